#pragma once

#include <vector>

#include "bop2te/design.hpp"

namespace bop2te {

// Posterior probabilities equal to a cutoff within this tolerance count as
// not exceeding it.
inline constexpr double kCutoffTieTolerance = 1e-12;

double cutoff_efficacy(int n, int max_n, const CutoffParameters& q);
double cutoff_toxicity(int n, int max_n, const CutoffParameters& q, double attenuation);

// Caches the per-look posterior tails of a design so that boundaries for many
// cutoff parameters can be derived cheaply. Immutable after construction.
class BoundaryDeriver {
 public:
  explicit BoundaryDeriver(DesignSpec spec);

  StoppingBoundaries derive(const CutoffParameters& q) const;
  const DesignSpec& spec() const { return spec_; }

  // Pr(pi_e > eta_e_null | x of n) and Pr(pi_t <= eta_t_null | y of n).
  double efficacy_posterior(int n, int responses) const;
  double toxicity_posterior(int n, int toxicities) const;

 private:
  DesignSpec spec_;
  // Indexed by look, then by count.
  std::vector<std::vector<double>> efficacy_tail_;
  std::vector<std::vector<double>> toxicity_tail_;
};

StoppingBoundaries derive_boundaries(const DesignSpec& spec, const CutoffParameters& q);

struct InterimData {
  int n = 0;
  int responses = 0;
  int toxicities = 0;
};

struct DecisionRecord {
  bool go = true;
  bool futility = false;
  bool toxicity = false;
  int n = 0;
  int responses = 0;
  int toxicities = 0;
  double posterior_prob_eff = 0.0;
  double posterior_prob_tox = 0.0;
  std::optional<double> efficacy_cutoff;
  std::optional<double> toxicity_cutoff;
  std::optional<int> futility_bound;
  std::optional<int> toxicity_bound;

  std::vector<std::string> reasons() const;
};

DecisionRecord interim_decision(const DesignSpec& spec, const StoppingBoundaries& boundaries,
                                const InterimData& data);

}  // namespace bop2te
