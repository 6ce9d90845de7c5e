#include "bop2te/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bop2te {

namespace {

constexpr double kFrechetSlack = 1e-12;

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

// Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

PriorHyperparameters PriorHyperparameters::from_margins(double mean_e, double mean_t,
                                                        double effective_n) {
  require_probability(mean_e, "prior efficacy mean");
  require_probability(mean_t, "prior toxicity mean");
  if (!(effective_n > 0.0)) {
    throw std::domain_error("prior effective sample size must be positive");
  }
  PriorHyperparameters prior;
  prior.tau = {effective_n * mean_e * mean_t, effective_n * mean_e * (1.0 - mean_t),
               effective_n * (1.0 - mean_e) * mean_t,
               effective_n * (1.0 - mean_e) * (1.0 - mean_t)};
  return prior;
}

void PriorHyperparameters::validate() const {
  for (double t : tau) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::domain_error("prior hyperparameters must be finite and non-negative");
    }
  }
  if (!(total() > 0.0)) {
    throw std::domain_error("prior hyperparameters must have a positive sum");
  }
}

double log_binomial_pmf(int k, int n, double p) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("binomial pmf requires 0 <= k <= n");
  require_probability(p, "binomial probability");
  if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return log_choose + k * std::log(p) + (n - k) * std::log1p(-p);
}

double binomial_pmf(int k, int n, double p) { return std::exp(log_binomial_pmf(k, n, p)); }

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta shapes must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta argument must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double beta_posterior_tail(int x, int n, double tau_marginal, double total_tau,
                           double threshold, TailDirection direction) {
  if (n < 0 || x < 0 || x > n) throw std::domain_error("posterior tail requires 0 <= x <= n");
  if (!(tau_marginal > 0.0) || !(total_tau > tau_marginal)) {
    throw std::domain_error("posterior tail requires 0 < tau_marginal < total_tau");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::domain_error("posterior threshold must lie in (0, 1)");
  }
  const double a = tau_marginal + x;
  const double b = n + total_tau - tau_marginal - x;
  const double below = regularized_incomplete_beta(threshold, a, b);
  return direction == TailDirection::above ? 1.0 - below : below;
}

std::pair<double, double> frechet_bounds(double pi_e, double pi_t) {
  return {std::max(0.0, pi_e + pi_t - 1.0), std::min(pi_e, pi_t)};
}

void validate(const OutcomeProbabilities& p) {
  require_probability(p.pi_e, "pi_e");
  require_probability(p.pi_t, "pi_t");
  require_probability(p.pi_et, "pi_et");
  const auto [lo, hi] = frechet_bounds(p.pi_e, p.pi_t);
  if (p.pi_et < lo - kFrechetSlack || p.pi_et > hi + kFrechetSlack) {
    throw std::domain_error("pi_et violates the Frechet bounds of its margins");
  }
}

CellProbabilities cells_from_margins(const OutcomeProbabilities& p) {
  validate(p);
  CellProbabilities cells{p.pi_et, p.pi_e - p.pi_et, p.pi_t - p.pi_et,
                          1.0 - p.pi_e - p.pi_t + p.pi_et};
  for (double& c : cells) c = std::clamp(c, 0.0, 1.0);
  return cells;
}

OddsRatio phi_from_pi_et(double pi_e, double pi_t, double pi_et) {
  const auto cells = cells_from_margins({pi_e, pi_t, pi_et});
  const double num = cells[0] * cells[3];
  const double den = cells[1] * cells[2];
  if (den > 0.0) {
    if (num == 0.0) return {OddsRatio::Kind::zero, 0.0};
    return {OddsRatio::Kind::finite, num / den};
  }
  if (num > 0.0) return {OddsRatio::Kind::infinite, std::numeric_limits<double>::infinity()};
  return {OddsRatio::Kind::undefined, std::numeric_limits<double>::quiet_NaN()};
}

double pi_et_from_phi(double pi_e, double pi_t, double phi) {
  require_probability(pi_e, "pi_e");
  require_probability(pi_t, "pi_t");
  if (!(phi > 0.0) || std::isnan(phi)) throw std::domain_error("odds ratio must be positive");
  const auto [lo, hi] = frechet_bounds(pi_e, pi_t);
  if (lo == hi) return lo;
  if (phi == 1.0) return pi_e * pi_t;

  // (1 - phi) x^2 + (1 + (phi - 1)(pi_e + pi_t)) x - phi pi_e pi_t = 0,
  // solved in the cancellation-free form and restricted to the Frechet range.
  const double a = 1.0 - phi;
  const double b = 1.0 + (phi - 1.0) * (pi_e + pi_t);
  const double c = -phi * pi_e * pi_t;
  const double disc = std::max(0.0, b * b - 4.0 * a * c);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double candidates[2] = {q != 0.0 ? c / q : lo, a != 0.0 ? q / a : lo};
  double best = candidates[0];
  double best_gap = std::numeric_limits<double>::infinity();
  for (double x : candidates) {
    if (!std::isfinite(x)) continue;
    const double gap = std::max({0.0, lo - x, x - hi});
    if (gap < best_gap) {
      best_gap = gap;
      best = x;
    }
  }
  return std::clamp(best, lo, hi);
}

OutcomeProbabilities outcome_with_phi(double pi_e, double pi_t, double phi) {
  return {pi_e, pi_t, pi_et_from_phi(pi_e, pi_t, phi)};
}

}  // namespace bop2te
