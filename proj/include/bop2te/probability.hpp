#pragma once

#include <array>
#include <utility>

namespace bop2te {

// Joint distribution of one patient's (response, toxicity) outcome, given by
// its two margins and the probability of both events.
struct OutcomeProbabilities {
  double pi_e = 0.0;
  double pi_t = 0.0;
  double pi_et = 0.0;
};

// Cell probabilities ordered (both, response only, toxicity only, neither).
using CellProbabilities = std::array<double, 4>;

// Dirichlet hyperparameters over the four outcome cells, same ordering as
// CellProbabilities. The sum is the prior effective sample size.
struct PriorHyperparameters {
  std::array<double, 4> tau{};

  double total() const { return tau[0] + tau[1] + tau[2] + tau[3]; }
  double efficacy() const { return tau[0] + tau[1]; }
  double toxicity() const { return tau[0] + tau[2]; }

  // Prior with the given marginal means and effective sample size, cells
  // filled by independence.
  static PriorHyperparameters from_margins(double mean_e, double mean_t,
                                           double effective_n = 1.0);
  void validate() const;
};

enum class TailDirection { above, at_or_below };

double log_binomial_pmf(int k, int n, double p);
double binomial_pmf(int k, int n, double p);

// Regularized incomplete beta I_x(a, b), continued fraction with relative
// tolerance 1e-14.
double regularized_incomplete_beta(double x, double a, double b);

// Posterior tail of a marginal rate after x events in n patients, under the
// Beta(tau_marginal + x, n + total_tau - tau_marginal - x) posterior.
double beta_posterior_tail(int x, int n, double tau_marginal, double total_tau,
                           double threshold, TailDirection direction);

std::pair<double, double> frechet_bounds(double pi_e, double pi_t);

CellProbabilities cells_from_margins(const OutcomeProbabilities& p);

// Odds ratio between response and toxicity. A zero cell makes the ratio
// degenerate; that case is reported through `kind` rather than as inf/nan.
struct OddsRatio {
  enum class Kind { finite, infinite, zero, undefined };
  Kind kind = Kind::finite;
  double value = 1.0;

  bool is_finite() const { return kind == Kind::finite; }
};

OddsRatio phi_from_pi_et(double pi_e, double pi_t, double pi_et);
double pi_et_from_phi(double pi_e, double pi_t, double phi);

OutcomeProbabilities outcome_with_phi(double pi_e, double pi_t, double phi);

void validate(const OutcomeProbabilities& p);

}  // namespace bop2te
