#include "bop2te/service.hpp"

#include <cstdio>
#include <sstream>

namespace bop2te {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string prob4(double v) { return fmt("%.4f", v); }
std::string ess2(double v) { return fmt("%.2f", v); }

std::string pad(const std::string& s, std::size_t width, bool right = true) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

std::string bound_text(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

std::string boundary_table(const StoppingBoundaries& b) {
  std::ostringstream os;
  os << pad("Look", 6, false) << pad("n", 6) << pad("Stop if responses <=", 23)
     << pad("Stop if toxicities >=", 24) << "\n";
  for (std::size_t r = 0; r < b.looks.size(); ++r) {
    const auto& lb = b.looks[r];
    os << pad(std::to_string(r + 1), 6, false) << pad(std::to_string(lb.n), 6)
       << pad(bound_text(lb.futility), 23) << pad(bound_text(lb.toxicity), 24) << "\n";
  }
  return os.str();
}

std::string hypothesis_table(const std::array<HypothesisResult, 4>& oc) {
  std::ostringstream os;
  os << pad("Hypothesis", 12, false) << pad("(pi_e, pi_t)", 14) << pad("PCP", 9) << pad("PET", 9)
     << pad("ESS", 8) << "\n";
  for (const auto& h : oc) {
    const std::string point = "(" + fmt("%.2f", h.truth.pi_e) + ", " + fmt("%.2f", h.truth.pi_t) + ")";
    os << pad(hypothesis_name(h.hypothesis), 12, false) << pad(point, 14) << pad(prob4(h.oc.pcp), 9)
       << pad(prob4(h.oc.pet), 9) << pad(ess2(h.oc.ess), 8) << "\n";
  }
  return os.str();
}

std::string spec_summary(const DesignSpec& spec) {
  std::ostringstream os;
  os << "Target response rate (eta_e): " << fmt("%.4g", spec.eta_e) << "\n"
     << "Unacceptable response rate (eta_e_null): " << fmt("%.4g", spec.eta_e_null) << "\n"
     << "Desirable toxicity rate (eta_t): " << fmt("%.4g", spec.eta_t) << "\n"
     << "Unacceptable toxicity rate (eta_t_null): " << fmt("%.4g", spec.eta_t_null) << "\n"
     << "Type I error targets (a00, a01, a10): (" << fmt("%.4g", spec.alpha.a00) << ", "
     << fmt("%.4g", spec.alpha.a01) << ", " << fmt("%.4g", spec.alpha.a10) << ")\n"
     << "Maximum sample size: " << spec.max_n() << "\n"
     << "Prior: Dirichlet(" << fmt("%.4g", spec.prior.tau[0]) << ", " << fmt("%.4g", spec.prior.tau[1])
     << ", " << fmt("%.4g", spec.prior.tau[2]) << ", " << fmt("%.4g", spec.prior.tau[3]) << "), "
     << centering_name(spec.centering) << "\n"
     << "Toxicity cutoff attenuation: " << fmt("%.4g", spec.attenuation) << "\n"
     << "Assumed odds ratio between response and toxicity: " << fmt("%.4g", spec.design_phi) << "\n";
  return os.str();
}

}  // namespace

std::vector<double> parse_csv_doubles(const std::string& csv, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(field, "cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ValidationError(field, "no values given");
  return out;
}

DesignRequest design_request_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("request", "expected a JSON object");
  DesignRequest req;
  const bool wrapped = j.contains("spec");
  req.spec = design_spec_from_json(wrapped ? j.at("spec") : j);
  auto flag = [&](const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return false;
    if (!it->is_boolean()) throw ValidationError(name, "must be true or false");
    return it->get<bool>();
  };
  req.global = flag("global");
  req.practical_constraint = flag("practical_constraint");
  if (auto it = j.find("grid"); it != j.end() && it->is_string()) {
    req.grid = grid_variant_from_string(it->get<std::string>());
  }
  if (auto it = j.find("annotation"); it != j.end() && it->is_string()) {
    req.annotation = it->get<std::string>();
  }
  return req;
}

OptimizationResult run_design(const DesignRequest& req) {
  if (req.global) {
    GlobalSearchOptions opt;
    opt.practical_constraint = req.practical_constraint;
    return global_boundary_search(req.spec, opt);
  }
  OptimizeOptions opt;
  opt.grid = req.grid;
  return optimize(req.spec, opt);
}

OcRequest oc_request_from_json(const Json& j) {
  OcRequest req;
  if (j.is_null()) return req;
  if (!j.is_object()) throw ValidationError("request", "expected a JSON object");
  if (auto it = j.find("phi_grid"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("phi_grid", "must be an array of numbers");
    for (const auto& v : *it) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ValidationError("phi_grid", "odds ratios must be positive numbers");
      }
      req.phi_grid.push_back(v.get<double>());
    }
  }
  if (auto it = j.find("mc"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      throw ValidationError("mc", "must be a non-negative integer");
    }
    req.mc_replicates = it->get<std::size_t>();
  }
  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ValidationError("seed", "must be an integer");
    req.seed = it->get<std::uint64_t>();
  }
  if (auto it = j.find("truths"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("truths", "must be an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const Json& t = (*it)[k];
      const std::string field = "truths[" + std::to_string(k) + "]";
      std::string label = t.is_object() && t.contains("label") && t["label"].is_string()
                              ? t["label"].get<std::string>()
                              : "P" + std::to_string(k + 1);
      req.truths.emplace_back(label, outcome_from_json(t, field));
    }
  }
  return req;
}

Json oc_report(const DesignSpec& spec, const StoppingBoundaries& boundaries, const OcRequest& req) {
  std::vector<std::pair<std::string, OutcomeProbabilities>> points = req.truths;
  if (points.empty()) {
    for (Hypothesis h : kHypotheses) points.emplace_back(hypothesis_name(h), hypothesis_point(spec, h, spec.design_phi));
  }
  Json rows = Json::array();
  for (const auto& [label, truth] : points) {
    Json row = {{"label", label}, {"truth", to_json(truth)},
                {"oc", to_json(operating_characteristics(boundaries, truth))}};
    if (req.mc_replicates > 0) {
      SimulationConfig cfg;
      cfg.replicates = req.mc_replicates;
      cfg.seed = req.seed;
      row["mc"] = to_json(estimate_oc(boundaries, spec, truth, cfg));
    }
    rows.push_back(row);
  }
  Json report = {{"boundaries", to_json(boundaries)}, {"rows", rows}};
  if (!req.phi_grid.empty()) {
    Json curve = Json::array();
    for (const auto& p : phi_sensitivity_curve(boundaries, spec, req.phi_grid)) curve.push_back(to_json(p));
    report["sensitivity"] = curve;
  }
  if (req.mc_replicates > 0) report["seed"] = req.seed;
  return report;
}

DecisionLogEntry record_decision(DesignStore& store, const std::string& id, const InterimData& data) {
  const DesignDocument doc = store.load(id);
  if (!doc.result) throw ConflictError("design " + id + " has no stopping boundaries yet");
  const DecisionRecord rec = interim_decision(doc.spec, doc.result->boundaries, data);
  return store.append_decision(id, rec);
}

std::string render_protocol(const DesignDocument& doc) {
  if (!doc.result) throw ConflictError("design " + doc.id + " has no result to render");
  const auto& r = *doc.result;
  const auto& spec = doc.spec;
  std::ostringstream os;
  os << "STATISTICAL CONSIDERATIONS\n"
     << "Design document: " << doc.id << "\n\n"
     << "1. Design settings\n"
     << spec_summary(spec) << "\n"
     << "2. Interim monitoring and decision rule\n"
     << "Patients are enrolled up to a maximum of " << spec.max_n() << ". At each scheduled look "
     << "the cumulative number of responses and toxicities are compared with the boundaries below. "
     << "The trial is stopped for futility if the number of responses is at or below the futility "
     << "boundary, and stopped for toxicity if the number of toxicities is at or above the toxicity "
     << "boundary. A dash marks an endpoint that is not evaluated at that look. If the trial reaches "
     << "the final look without crossing either boundary, the treatment is declared promising.\n\n";
  if (r.q) {
    os << "The boundaries follow posterior probability cutoffs lambda_e * (n/N)^gamma for "
       << "Pr(pi_e > " << fmt("%.4g", spec.eta_e_null) << " | data) and lambda_t * (n/N)^(gamma/"
       << fmt("%.4g", spec.attenuation) << ") for Pr(pi_t <= " << fmt("%.4g", spec.eta_t_null)
       << " | data), with lambda_e = " << fmt("%.4f", r.q->lambda_e) << ", lambda_t = "
       << fmt("%.4f", r.q->lambda_t) << ", gamma = " << fmt("%.4f", r.q->gamma) << ".\n\n";
  } else {
    os << "The boundaries were obtained by direct search over integer boundary vectors (" << r.method
       << ").\n\n";
  }
  os << boundary_table(r.boundaries) << "\n"
     << "3. Operating characteristics\n"
     << "Computed exactly under an odds ratio of " << fmt("%.4g", r.design_phi)
     << " between response and toxicity. PCP is the probability of declaring the treatment "
     << "promising, PET the probability of early termination and ESS the expected sample size.\n\n"
     << hypothesis_table(r.oc) << "\n"
     << "Type I errors: a00 = " << prob4(r.alpha00()) << ", a01 = " << prob4(r.alpha01())
     << ", a10 = " << prob4(r.alpha10()) << "; power = " << prob4(r.power()) << ".\n"
     << (r.feasible ? "All three type I error targets are met.\n"
                    : "WARNING: no candidate met all three type I error targets; the least violating design is shown.\n");
  return os.str();
}

std::string format_design(const DesignSpec& spec, const OptimizationResult& r) {
  std::ostringstream os;
  os << "Method: " << r.method << "\n";
  if (r.q) {
    os << "lambda_e = " << fmt("%.4f", r.q->lambda_e) << ", lambda_t = " << fmt("%.4f", r.q->lambda_t)
       << ", gamma = " << fmt("%.4f", r.q->gamma) << "\n";
  }
  os << "\n" << boundary_table(r.boundaries) << "\n" << hypothesis_table(r.oc) << "\n";
  os << "feasible: " << (r.feasible ? "yes" : "no") << "  candidates: " << r.candidates_evaluated
     << "  distinct boundaries: " << r.distinct_boundaries << "\n";
  (void)spec;
  return os.str();
}

std::string format_oc_report(const Json& report) {
  std::ostringstream os;
  const bool mc = !report["rows"].empty() && report["rows"][0].contains("mc");
  os << pad("Point", 10, false) << pad("(pi_e, pi_t)", 14) << pad("PCP", 9) << pad("PET", 9) << pad("ESS", 8);
  if (mc) os << pad("MC PCP", 10) << pad("(SE)", 9) << pad("MC PET", 9) << pad("(SE)", 9) << pad("MC ESS", 9) << pad("(SE)", 7);
  os << "\n";
  for (const auto& row : report["rows"]) {
    const auto& t = row["truth"];
    const std::string point = "(" + fmt("%.2f", t["pi_e"].get<double>()) + ", " + fmt("%.2f", t["pi_t"].get<double>()) + ")";
    os << pad(row["label"].get<std::string>(), 10, false) << pad(point, 14)
       << pad(prob4(row["oc"]["pcp"].get<double>()), 9) << pad(prob4(row["oc"]["pet"].get<double>()), 9)
       << pad(ess2(row["oc"]["ess"].get<double>()), 8);
    if (mc) {
      const auto& m = row["mc"];
      os << pad(prob4(m["pcp"].get<double>()), 10) << pad(prob4(m["pcp_se"].get<double>()), 9)
         << pad(prob4(m["pet"].get<double>()), 9) << pad(prob4(m["pet_se"].get<double>()), 9)
         << pad(ess2(m["ess"].get<double>()), 9) << pad(ess2(m["ess_se"].get<double>()), 7);
    }
    os << "\n";
  }
  if (report.contains("sensitivity")) {
    os << "\n" << pad("phi", 10, false) << pad("a00", 9) << pad("a01", 9) << pad("a10", 9) << pad("power", 9) << "\n";
    for (const auto& s : report["sensitivity"]) {
      os << pad(fmt("%.4g", s["phi"].get<double>()), 10, false) << pad(prob4(s["alpha00"].get<double>()), 9)
         << pad(prob4(s["alpha01"].get<double>()), 9) << pad(prob4(s["alpha10"].get<double>()), 9)
         << pad(prob4(s["power"].get<double>()), 9) << "\n";
    }
  }
  return os.str();
}

std::string format_decision(const DecisionRecord& d) {
  std::ostringstream os;
  os << "Look n = " << d.n << ": responses = " << d.responses << ", toxicities = " << d.toxicities << "\n"
     << "Decision: " << (d.go ? "GO" : "NO-GO");
  const auto reasons = d.reasons();
  for (std::size_t i = 0; i < reasons.size(); ++i) os << (i == 0 ? " (" : ", ") << reasons[i];
  if (!reasons.empty()) os << ")";
  os << "\n";
  os << "Pr(efficacy above null | data) = " << prob4(d.posterior_prob_eff);
  if (d.efficacy_cutoff) os << "  cutoff " << prob4(*d.efficacy_cutoff) << "  futility bound " << bound_text(d.futility_bound);
  os << "\nPr(toxicity at or below null | data) = " << prob4(d.posterior_prob_tox);
  if (d.toxicity_cutoff) os << "  cutoff " << prob4(*d.toxicity_cutoff) << "  toxicity bound " << bound_text(d.toxicity_bound);
  os << "\n";
  return os.str();
}

std::string format_multidose(const MultiDoseResult& r) {
  std::ostringstream os;
  os << pad("Dose", 8, false) << pad("(pi_e, pi_t)", 14) << pad("Selection %", 13) << pad("Early stop %", 14)
     << pad("# patients", 12) << "\n";
  for (const auto& a : r.arms) {
    const std::string point = "(" + fmt("%.2f", a.truth.pi_e) + ", " + fmt("%.2f", a.truth.pi_t) + ")";
    os << pad(a.label, 8, false) << pad(point, 14) << pad(fmt("%.1f", a.selection_pct), 13)
       << pad(fmt("%.1f", a.early_stop_pct), 14) << pad(fmt("%.1f", a.average_n), 12) << "\n";
  }
  os << "No dose selected: " << fmt("%.1f", r.no_selection_pct) << "%  (replicates " << r.replicates
     << ", seed " << r.seed << ")\n";
  return os.str();
}

}  // namespace bop2te
