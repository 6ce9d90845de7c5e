#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bop2te/probability.hpp"

namespace bop2te {

// Thrown when a design or request fails validation. `field` names the
// offending input (snake_case, matching the JSON schema).
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct Look {
  int n = 0;
  bool check_efficacy = true;
  bool check_toxicity = true;
};

struct AlphaTargets {
  double a00 = 0.025;
  double a01 = 0.10;
  double a10 = 0.10;
};

enum class PriorCentering { null_rates, alternative_rates, custom };

struct DesignSpec {
  double eta_e = 0.0;       // target response rate
  double eta_e_null = 0.0;  // unacceptable response rate
  double eta_t = 0.0;       // desirable toxicity rate
  double eta_t_null = 0.0;  // unacceptable toxicity rate
  AlphaTargets alpha;
  std::vector<Look> schedule;
  PriorHyperparameters prior;
  PriorCentering centering = PriorCentering::null_rates;
  double attenuation = 3.0;
  double design_phi = 1.0;

  int max_n() const { return schedule.empty() ? 0 : schedule.back().n; }
  void validate() const;

  // Refills `prior` from the centering convention with effective size one.
  void apply_centering(PriorCentering c);
};

// Builds a spec with the prior centered per `centering`.
DesignSpec make_design(double eta_e, double eta_e_null, double eta_t, double eta_t_null,
                       AlphaTargets alpha, std::vector<Look> schedule,
                       PriorCentering centering = PriorCentering::null_rates);

enum class Hypothesis { h00, h01, h10, h11 };

inline constexpr std::array<Hypothesis, 4> kHypotheses{Hypothesis::h00, Hypothesis::h01,
                                                       Hypothesis::h10, Hypothesis::h11};

const char* hypothesis_name(Hypothesis h);

// Outcome distribution at a hypothesis point, joint probability set by phi.
OutcomeProbabilities hypothesis_point(const DesignSpec& spec, Hypothesis h, double phi);

struct CutoffParameters {
  double lambda_e = 0.0;
  double lambda_t = 0.0;
  double gamma = 0.0;

  void validate() const;
};

struct LookBoundary {
  int n = 0;
  // Stop for futility when cumulative responses <= futility.
  std::optional<int> futility;
  // Stop for toxicity when cumulative toxicities >= toxicity.
  std::optional<int> toxicity;
  std::optional<double> efficacy_cutoff;
  std::optional<double> toxicity_cutoff;

  int futility_or_inactive() const { return futility.value_or(-1); }
  int toxicity_or_inactive() const { return toxicity.value_or(n + 1); }
};

struct StoppingBoundaries {
  std::vector<LookBoundary> looks;

  int max_n() const { return looks.empty() ? 0 : looks.back().n; }
  std::size_t stages() const { return looks.size(); }
  void validate() const;

  bool same_thresholds(const StoppingBoundaries& other) const;
  // Integer thresholds only, inactive encoded as -1 / n + 1.
  std::vector<int> key() const;
};

// Builds boundaries from explicit threshold vectors. `futility` holds one
// entry per efficacy look, `toxicity` one per toxicity look, both in schedule
// order.
StoppingBoundaries make_boundaries(const std::vector<Look>& schedule,
                                   const std::vector<int>& futility,
                                   const std::vector<int>& toxicity);

}  // namespace bop2te
