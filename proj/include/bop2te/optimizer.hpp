#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bop2te/boundaries.hpp"
#include "bop2te/operating_characteristics.hpp"

namespace bop2te {

// literal: lambda on [0.5, 0.8) step 0.025 plus [0.8, 0.99] step 0.01 (32
// values per axis). compact: 29 values per axis, dropping 0.5, 0.525 and 0.99
// so the grid has 29 * 29 * 21 = 17,661 points.
enum class GridVariant { literal, compact };

std::vector<double> lambda_values(GridVariant variant = GridVariant::literal);
std::vector<double> gamma_values();

// lambda_e-major, then lambda_t, then gamma.
std::vector<CutoffParameters> parameter_grid(GridVariant variant = GridVariant::literal);

struct HypothesisResult {
  Hypothesis hypothesis = Hypothesis::h00;
  OutcomeProbabilities truth;
  OperatingCharacteristics oc;
};

struct OptimizationResult {
  std::string method = "BOP2-TE";
  std::optional<CutoffParameters> q;
  StoppingBoundaries boundaries;
  std::array<HypothesisResult, 4> oc{};
  double design_phi = 1.0;
  bool feasible = false;
  std::size_t candidates_evaluated = 0;
  std::size_t distinct_boundaries = 0;

  double alpha00() const { return oc[0].oc.pcp; }
  double alpha01() const { return oc[1].oc.pcp; }
  double alpha10() const { return oc[2].oc.pcp; }
  double power() const { return oc[3].oc.pcp; }
};

struct OptimizeOptions {
  GridVariant grid = GridVariant::literal;
  unsigned workers = 0;
};

OptimizationResult optimize(const DesignSpec& spec, const OptimizeOptions& options = {});

struct GlobalSearchOptions {
  bool practical_constraint = false;
  unsigned workers = 0;
  // Caps the number of boundary pairs evaluated by the full recursion when
  // the efficacy and toxicity claim probabilities do not factor (phi != 1).
  std::size_t max_exhaustive_pairs = 2'000'000;
};

inline constexpr std::size_t kGlobalMaxEfficacyLooks = 2;
inline constexpr std::size_t kGlobalMaxToxicityLooks = 3;

OptimizationResult global_boundary_search(const DesignSpec& spec,
                                          const GlobalSearchOptions& options = {});

// Smallest futility bound and largest toxicity bound allowed at a look of
// size n when a no-go is required for observed rates past the null values.
int practical_min_futility(int n, double eta_e_null);
int practical_max_toxicity(int n, double eta_t_null);

// Evaluates the four hypothesis points of `spec` for fixed boundaries.
std::array<HypothesisResult, 4> evaluate_hypotheses(const StoppingBoundaries& b,
                                                    const DesignSpec& spec, double phi);

}  // namespace bop2te
