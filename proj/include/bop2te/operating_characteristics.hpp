#pragma once

#include <array>
#include <vector>

#include "bop2te/design.hpp"

namespace bop2te {

// Cell counts of observed outcomes, ordered like CellProbabilities.
struct TrialData {
  int n = 0;
  std::array<int, 4> x{};

  int responses() const { return x[0] + x[1]; }
  int toxicities() const { return x[0] + x[2]; }
  void validate() const;
};

// Square table over (cumulative responses, cumulative toxicities), both in
// [0, n].
class CountTable {
 public:
  CountTable() = default;
  explicit CountTable(int n) : n_(n), mass_((n + 1) * (n + 1), 0.0) {}

  int n() const { return n_; }
  double& at(int responses, int toxicities) { return mass_[responses * (n_ + 1) + toxicities]; }
  double at(int responses, int toxicities) const {
    return mass_[responses * (n_ + 1) + toxicities];
  }
  double total() const;

 private:
  int n_ = 0;
  std::vector<double> mass_;
};

struct OperatingCharacteristics {
  double pcp = 0.0;
  double pet = 0.0;
  double ess = 0.0;
  // Probability of passing every look up to and including stage r.
  std::vector<double> stage_pass_probs;
};

double joint_stage_pmf(int x_e, int x_t, int m, const OutcomeProbabilities& p);

// Full table of joint_stage_pmf over a cohort of m patients.
CountTable stage_pmf_table(int m, const OutcomeProbabilities& p);

// Distribution of cumulative counts at stage r (1-based), before the look at
// stage r is applied.
CountTable continuation_distribution(const StoppingBoundaries& b, const OutcomeProbabilities& p,
                                     std::size_t r);

double claim_probability(const StoppingBoundaries& b, const OutcomeProbabilities& p);

OperatingCharacteristics operating_characteristics(const StoppingBoundaries& b,
                                                   const OutcomeProbabilities& p);

// Evaluates many boundary vectors on one schedule under one outcome
// distribution, reusing the per-stage increment tables.
class OcEvaluator {
 public:
  OcEvaluator(const std::vector<int>& look_sizes, const OutcomeProbabilities& p);

  OperatingCharacteristics evaluate(const StoppingBoundaries& b) const;

 private:
  std::vector<int> look_sizes_;
  std::vector<CountTable> increments_;
};

// Literal enumeration of all 4^N outcome sequences. Requires N <= 10.
double brute_force_claim_probability(const StoppingBoundaries& b, const OutcomeProbabilities& p);

inline constexpr int kBruteForceMaxN = 10;

struct HypothesisClaims {
  double a00 = 0.0;
  double a01 = 0.0;
  double a10 = 0.0;
  double power = 0.0;
};

HypothesisClaims hypothesis_claims(const StoppingBoundaries& b, const DesignSpec& spec, double phi);

// alpha00 - alpha01 * alpha10 / power at phi = 1.
double independence_residual(const StoppingBoundaries& b, const DesignSpec& spec);

struct SensitivityPoint {
  double phi = 1.0;
  HypothesisClaims claims;
};

std::vector<SensitivityPoint> phi_sensitivity_curve(const StoppingBoundaries& b,
                                                    const DesignSpec& spec,
                                                    std::vector<double> phis);

}  // namespace bop2te
