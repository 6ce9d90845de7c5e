#pragma once

#include <string>
#include <vector>

#include "bop2te/json_io.hpp"
#include "bop2te/store.hpp"

namespace bop2te {

struct DesignRequest {
  DesignSpec spec;
  bool global = false;
  bool practical_constraint = false;
  GridVariant grid = GridVariant::literal;
  std::string annotation;
};

// Accepts either a bare spec or {"spec": ..., "global": ..., ...}.
DesignRequest design_request_from_json(const Json& j);

OptimizationResult run_design(const DesignRequest& req);

struct OcRequest {
  std::vector<double> phi_grid;
  std::size_t mc_replicates = 0;
  std::uint64_t seed = 20240101;
  // Outcome points to evaluate; the four hypothesis points when empty.
  std::vector<std::pair<std::string, OutcomeProbabilities>> truths;
};

OcRequest oc_request_from_json(const Json& j);

// Analytic OC per point, optional Monte Carlo columns and sensitivity rows.
Json oc_report(const DesignSpec& spec, const StoppingBoundaries& boundaries, const OcRequest& req);

DecisionLogEntry record_decision(DesignStore& store, const std::string& id, const InterimData& data);

// Deterministic protocol text for a document with a result.
std::string render_protocol(const DesignDocument& doc);

// Plain-text tables for the CLI.
std::string format_design(const DesignSpec& spec, const OptimizationResult& r);
std::string format_oc_report(const Json& report);
std::string format_decision(const DecisionRecord& d);
std::string format_multidose(const MultiDoseResult& r);

std::vector<double> parse_csv_doubles(const std::string& csv, const std::string& field);

}  // namespace bop2te
