#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "bop2te/boundaries.hpp"
#include "bop2te/operating_characteristics.hpp"
#include "bop2te/optimizer.hpp"
#include "bop2te/simulation.hpp"

namespace bop2te {

using Json = nlohmann::json;

// Parsers throw ValidationError naming the offending field.
DesignSpec design_spec_from_json(const Json& j);
Json to_json(const DesignSpec& spec);

Json to_json(const StoppingBoundaries& b);
StoppingBoundaries boundaries_from_json(const Json& j, const DesignSpec& spec);

Json to_json(const OperatingCharacteristics& oc);
Json to_json(const OutcomeProbabilities& p);
OutcomeProbabilities outcome_from_json(const Json& j, const std::string& field);
Json to_json(const OptimizationResult& r);
OptimizationResult optimization_result_from_json(const Json& j, const DesignSpec& spec);
Json to_json(const DecisionRecord& d);
Json to_json(const MonteCarloOc& mc);
Json to_json(const SensitivityPoint& s);
Json to_json(const MultiDoseResult& r);

struct MultiDoseRequest {
  DoseOptimizationSpec spec;
  std::vector<OutcomeProbabilities> truth;
  SimulationConfig config;
  // Fixed boundaries; optimized from the design when absent.
  std::optional<StoppingBoundaries> boundaries;
};

MultiDoseResult run_multidose(const MultiDoseRequest& req);

MultiDoseRequest multidose_request_from_json(const Json& j);

GridVariant grid_variant_from_string(const std::string& s);
const char* centering_name(PriorCentering c);

// Hex SHA-256 of the canonical (key-sorted, compact) serialization.
std::string content_hash(const Json& j);

}  // namespace bop2te
