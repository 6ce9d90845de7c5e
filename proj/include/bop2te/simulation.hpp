#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bop2te/boundaries.hpp"
#include "bop2te/operating_characteristics.hpp"

namespace bop2te {

// Independent generator for one (seed, replicate, arm) triple.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t arm = 0);

// Uniform draw on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index of the outcome cell drawn for one patient.
int draw_cell(const CellProbabilities& cells, std::mt19937_64& rng);

struct TrialOutcome {
  bool claimed = false;
  bool stopped_early = false;
  // 1-based index of the last look reached.
  int stage = 0;
  int enrolled = 0;
  int responses = 0;
  int toxicities = 0;
};

TrialOutcome simulate_trial(const StoppingBoundaries& boundaries, const DesignSpec& spec,
                            const OutcomeProbabilities& truth, std::mt19937_64& rng);

struct SimulationConfig {
  std::size_t replicates = 10000;
  std::uint64_t seed = 20240101;
  unsigned workers = 0;

  void validate() const;
};

struct MonteCarloOc {
  OperatingCharacteristics oc;
  double pcp_se = 0.0;
  double pet_se = 0.0;
  double ess_se = 0.0;
  std::size_t replicates = 0;
};

MonteCarloOc estimate_oc(const StoppingBoundaries& boundaries, const DesignSpec& spec,
                         const OutcomeProbabilities& truth, const SimulationConfig& config);

enum class Monotonicity { non_decreasing, non_increasing };

std::vector<double> pava(const std::vector<double>& values, const std::vector<double>& weights,
                         Monotonicity direction = Monotonicity::non_decreasing);

// Lowest surviving arm whose estimate exceeds delta times the estimate of the
// highest surviving arm. Arms are in ascending dose order.
std::optional<std::size_t> select_optimal_dose(const std::vector<double>& efficacy,
                                               const std::vector<bool>& surviving, double delta);

// How isotonic estimates are compared against the integer boundaries.
//   count: the adjusted posterior mean is mapped back to an event count
//          through the posterior, and an arm left untouched by the adjustment
//          uses its observed count.
//   sample_size: n times the adjusted posterior mean.
enum class IsotonicScale { count, sample_size };

struct DoseOptimizationSpec {
  std::vector<std::string> arms;
  DesignSpec design;
  double delta = 0.8;
  IsotonicScale scale = IsotonicScale::count;

  void validate() const;
};

struct ArmSummary {
  std::string label;
  OutcomeProbabilities truth;
  double selection_pct = 0.0;
  double early_stop_pct = 0.0;
  double average_n = 0.0;
};

struct MultiDoseResult {
  std::vector<ArmSummary> arms;
  double no_selection_pct = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  StoppingBoundaries boundaries;
};

MultiDoseResult simulate_multidose(const DoseOptimizationSpec& dspec,
                                   const StoppingBoundaries& boundaries,
                                   const std::vector<OutcomeProbabilities>& truth,
                                   const SimulationConfig& config);

// Optimizes the shared per-arm design first.
MultiDoseResult simulate_multidose(const DoseOptimizationSpec& dspec,
                                   const std::vector<OutcomeProbabilities>& truth,
                                   const SimulationConfig& config);

}  // namespace bop2te
