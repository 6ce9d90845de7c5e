#include "bop2te/json_io.hpp"

#include <openssl/evp.h>

#include <cstdio>

namespace bop2te {

namespace {

const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, "expected an object");
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) throw ValidationError(field, "is required");
  return *it;
}

double number(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_number()) throw ValidationError(field, "must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const std::string& field, double fallback) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw ValidationError(field, "must be a number");
  return it->get<double>();
}

bool flag_or(const Json& j, const std::string& field, bool fallback) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) throw ValidationError(field, "must be true or false");
  return it->get<bool>();
}

int integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ValidationError(field, "must be an integer");
  return v.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_array()) throw ValidationError(field, "must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) out.push_back(integer(x, field));
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

PriorCentering centering_from_string(const std::string& s) {
  if (s == "null_rates") return PriorCentering::null_rates;
  if (s == "alternative_rates") return PriorCentering::alternative_rates;
  if (s == "custom") return PriorCentering::custom;
  throw ValidationError("prior.centering", "expected null_rates, alternative_rates or custom");
}

Json hypothesis_json(const HypothesisResult& h) {
  return {{"hypothesis", hypothesis_name(h.hypothesis)},
          {"truth", to_json(h.truth)},
          {"oc", to_json(h.oc)}};
}

OperatingCharacteristics oc_from_json(const Json& j) {
  OperatingCharacteristics oc;
  oc.pcp = number(j, "pcp");
  oc.pet = number(j, "pet");
  oc.ess = number(j, "ess");
  for (const auto& v : require(j, "stage_pass_probs")) oc.stage_pass_probs.push_back(v.get<double>());
  return oc;
}

}  // namespace

const char* centering_name(PriorCentering c) {
  switch (c) {
    case PriorCentering::null_rates: return "null_rates";
    case PriorCentering::alternative_rates: return "alternative_rates";
    case PriorCentering::custom: return "custom";
  }
  return "custom";
}

GridVariant grid_variant_from_string(const std::string& s) {
  if (s == "literal") return GridVariant::literal;
  if (s == "compact") return GridVariant::compact;
  throw ValidationError("grid", "expected literal or compact");
}

DesignSpec design_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("spec", "expected a JSON object");
  DesignSpec spec;
  spec.eta_e = number(j, "eta_e");
  spec.eta_e_null = number(j, "eta_e_null");
  spec.eta_t = number(j, "eta_t");
  spec.eta_t_null = number(j, "eta_t_null");
  if (auto it = j.find("alpha_targets"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError("alpha_targets", "expected an object");
    spec.alpha.a00 = number_or(*it, "a00", spec.alpha.a00);
    spec.alpha.a01 = number_or(*it, "a01", spec.alpha.a01);
    spec.alpha.a10 = number_or(*it, "a10", spec.alpha.a10);
  }
  const Json& sched = require(j, "schedule");
  if (!sched.is_array()) throw ValidationError("schedule", "must be an array of looks");
  for (const auto& look : sched) {
    if (!look.is_object()) throw ValidationError("schedule", "each look must be an object");
    Look l;
    l.n = integer(require(look, "n"), "schedule.n");
    l.check_efficacy = flag_or(look, "check_efficacy", true);
    l.check_toxicity = flag_or(look, "check_toxicity", true);
    spec.schedule.push_back(l);
  }
  spec.attenuation = number_or(j, "attenuation", 3.0);
  spec.design_phi = number_or(j, "design_phi", 1.0);

  PriorCentering centering = PriorCentering::null_rates;
  std::optional<std::array<double, 4>> tau;
  if (auto it = j.find("prior"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError("prior", "expected an object");
    if (auto c = it->find("centering"); c != it->end()) {
      if (!c->is_string()) throw ValidationError("prior.centering", "must be a string");
      centering = centering_from_string(c->get<std::string>());
    }
    if (auto t = it->find("tau"); t != it->end() && !t->is_null()) {
      if (!t->is_array() || t->size() != 4) throw ValidationError("prior.tau", "must hold four numbers");
      std::array<double, 4> v{};
      for (std::size_t k = 0; k < 4; ++k) {
        if (!(*t)[k].is_number()) throw ValidationError("prior.tau", "must hold four numbers");
        v[k] = (*t)[k].get<double>();
      }
      tau = v;
      if (it->find("centering") == it->end()) centering = PriorCentering::custom;
    }
  }
  if (centering == PriorCentering::custom) {
    if (!tau) throw ValidationError("prior.tau", "is required for a custom prior");
    spec.centering = PriorCentering::custom;
    spec.prior.tau = *tau;
  } else {
    spec.apply_centering(centering);
  }
  spec.validate();
  return spec;
}

Json to_json(const DesignSpec& spec) {
  Json sched = Json::array();
  for (const auto& l : spec.schedule) {
    sched.push_back({{"n", l.n}, {"check_efficacy", l.check_efficacy}, {"check_toxicity", l.check_toxicity}});
  }
  return {{"eta_e", spec.eta_e},
          {"eta_e_null", spec.eta_e_null},
          {"eta_t", spec.eta_t},
          {"eta_t_null", spec.eta_t_null},
          {"alpha_targets", {{"a00", spec.alpha.a00}, {"a01", spec.alpha.a01}, {"a10", spec.alpha.a10}}},
          {"schedule", sched},
          {"prior", {{"centering", centering_name(spec.centering)},
                     {"tau", spec.prior.tau}}},
          {"attenuation", spec.attenuation},
          {"design_phi", spec.design_phi}};
}

Json to_json(const StoppingBoundaries& b) {
  Json looks = Json::array();
  Json futility = Json::array();
  Json toxicity = Json::array();
  for (const auto& lb : b.looks) {
    looks.push_back({{"n", lb.n},
                     {"l_e", optional_json(lb.futility)},
                     {"l_t", optional_json(lb.toxicity)},
                     {"efficacy_cutoff", optional_json(lb.efficacy_cutoff)},
                     {"toxicity_cutoff", optional_json(lb.toxicity_cutoff)}});
    if (lb.futility) futility.push_back(*lb.futility);
    if (lb.toxicity) toxicity.push_back(*lb.toxicity);
  }
  return {{"looks", looks}, {"futility", futility}, {"toxicity", toxicity}};
}

StoppingBoundaries boundaries_from_json(const Json& j, const DesignSpec& spec) {
  if (!j.is_object()) throw ValidationError("boundaries", "expected an object");
  auto b = make_boundaries(spec.schedule, int_list(j, "futility"), int_list(j, "toxicity"));
  // Cutoffs are informational; keep them when the per-look form is present.
  if (auto it = j.find("looks"); it != j.end() && it->is_array() && it->size() == b.looks.size()) {
    for (std::size_t r = 0; r < b.looks.size(); ++r) {
      const Json& l = (*it)[r];
      if (auto c = l.find("efficacy_cutoff"); c != l.end() && c->is_number()) b.looks[r].efficacy_cutoff = c->get<double>();
      if (auto c = l.find("toxicity_cutoff"); c != l.end() && c->is_number()) b.looks[r].toxicity_cutoff = c->get<double>();
    }
  }
  return b;
}

Json to_json(const OperatingCharacteristics& oc) {
  return {{"pcp", oc.pcp}, {"pet", oc.pet}, {"ess", oc.ess}, {"stage_pass_probs", oc.stage_pass_probs}};
}

Json to_json(const OutcomeProbabilities& p) {
  const auto phi = phi_from_pi_et(p.pi_e, p.pi_t, p.pi_et);
  Json phi_json;
  switch (phi.kind) {
    case OddsRatio::Kind::finite: phi_json = phi.value; break;
    case OddsRatio::Kind::infinite: phi_json = "infinite"; break;
    case OddsRatio::Kind::zero: phi_json = 0.0; break;
    case OddsRatio::Kind::undefined: phi_json = nullptr; break;
  }
  return {{"pi_e", p.pi_e}, {"pi_t", p.pi_t}, {"pi_et", p.pi_et}, {"phi", phi_json}};
}

OutcomeProbabilities outcome_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, "expected an object");
  const double pe = number(j, "pi_e");
  const double pt = number(j, "pi_t");
  OutcomeProbabilities p;
  try {
    if (auto it = j.find("pi_et"); it != j.end() && !it->is_null()) {
      if (!it->is_number()) throw ValidationError(field + ".pi_et", "must be a number");
      p = {pe, pt, it->get<double>()};
    } else {
      p = outcome_with_phi(pe, pt, number_or(j, "phi", 1.0));
    }
    validate(p);
  } catch (const std::domain_error& e) {
    throw ValidationError(field, e.what());
  }
  return p;
}

Json to_json(const OptimizationResult& r) {
  Json hyps = Json::array();
  for (const auto& h : r.oc) hyps.push_back(hypothesis_json(h));
  Json q = nullptr;
  if (r.q) q = {{"lambda_e", r.q->lambda_e}, {"lambda_t", r.q->lambda_t}, {"gamma", r.q->gamma}};
  return {{"method", r.method},
          {"q", q},
          {"boundaries", to_json(r.boundaries)},
          {"hypotheses", hyps},
          {"alpha00", r.alpha00()},
          {"alpha01", r.alpha01()},
          {"alpha10", r.alpha10()},
          {"power", r.power()},
          {"design_phi", r.design_phi},
          {"feasible", r.feasible},
          {"candidates_evaluated", r.candidates_evaluated},
          {"distinct_boundaries", r.distinct_boundaries}};
}

OptimizationResult optimization_result_from_json(const Json& j, const DesignSpec& spec) {
  OptimizationResult r;
  r.method = require(j, "method").get<std::string>();
  if (auto q = j.find("q"); q != j.end() && q->is_object()) {
    r.q = CutoffParameters{number(*q, "lambda_e"), number(*q, "lambda_t"), number(*q, "gamma")};
  }
  r.boundaries = boundaries_from_json(require(j, "boundaries"), spec);
  const Json& hyps = require(j, "hypotheses");
  if (!hyps.is_array() || hyps.size() != 4) throw ValidationError("hypotheses", "expected four entries");
  for (std::size_t i = 0; i < 4; ++i) {
    r.oc[i].hypothesis = kHypotheses[i];
    const Json& t = require(hyps[i], "truth");
    r.oc[i].truth = {number(t, "pi_e"), number(t, "pi_t"), number(t, "pi_et")};
    r.oc[i].oc = oc_from_json(require(hyps[i], "oc"));
  }
  r.design_phi = number(j, "design_phi");
  r.feasible = require(j, "feasible").get<bool>();
  r.candidates_evaluated = require(j, "candidates_evaluated").get<std::size_t>();
  r.distinct_boundaries = require(j, "distinct_boundaries").get<std::size_t>();
  return r;
}

Json to_json(const DecisionRecord& d) {
  return {{"decision", d.go ? "go" : "no-go"},
          {"reasons", d.reasons()},
          {"n", d.n},
          {"responses", d.responses},
          {"toxicities", d.toxicities},
          {"posterior_prob_eff", d.posterior_prob_eff},
          {"posterior_prob_tox", d.posterior_prob_tox},
          {"efficacy_cutoff", optional_json(d.efficacy_cutoff)},
          {"toxicity_cutoff", optional_json(d.toxicity_cutoff)},
          {"futility_bound", optional_json(d.futility_bound)},
          {"toxicity_bound", optional_json(d.toxicity_bound)}};
}

Json to_json(const MonteCarloOc& mc) {
  return {{"pcp", mc.oc.pcp},         {"pet", mc.oc.pet},       {"ess", mc.oc.ess},
          {"pcp_se", mc.pcp_se},      {"pet_se", mc.pet_se},    {"ess_se", mc.ess_se},
          {"stage_pass_probs", mc.oc.stage_pass_probs}, {"replicates", mc.replicates}};
}

Json to_json(const SensitivityPoint& s) {
  return {{"phi", s.phi},
          {"alpha00", s.claims.a00},
          {"alpha01", s.claims.a01},
          {"alpha10", s.claims.a10},
          {"power", s.claims.power}};
}

Json to_json(const MultiDoseResult& r) {
  Json arms = Json::array();
  for (const auto& a : r.arms) {
    arms.push_back({{"label", a.label},
                    {"truth", to_json(a.truth)},
                    {"selection_pct", a.selection_pct},
                    {"early_stop_pct", a.early_stop_pct},
                    {"average_n", a.average_n}});
  }
  return {{"arms", arms},
          {"no_selection_pct", r.no_selection_pct},
          {"replicates", r.replicates},
          {"seed", r.seed},
          {"boundaries", to_json(r.boundaries)}};
}

MultiDoseRequest multidose_request_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("request", "expected a JSON object");
  MultiDoseRequest req;
  req.spec.design = design_spec_from_json(require(j, "design"));
  const Json& arms = require(j, "arms");
  if (!arms.is_array()) throw ValidationError("arms", "must be an array");
  for (std::size_t k = 0; k < arms.size(); ++k) {
    const Json& a = arms[k];
    const std::string field = "arms[" + std::to_string(k) + "]";
    std::string label = "d" + std::to_string(k + 1);
    if (auto it = a.find("label"); it != a.end() && it->is_string()) label = it->get<std::string>();
    req.spec.arms.push_back(label);
    req.truth.push_back(outcome_from_json(a, field));
  }
  req.spec.delta = number_or(j, "delta", 0.8);
  if (auto it = j.find("scale"); it != j.end() && !it->is_null()) {
    const auto s = it->get<std::string>();
    if (s == "count") req.spec.scale = IsotonicScale::count;
    else if (s == "sample_size") req.spec.scale = IsotonicScale::sample_size;
    else throw ValidationError("scale", "expected count or sample_size");
  }
  if (auto it = j.find("replicates"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) {
      throw ValidationError("replicates", "must be a positive integer");
    }
    req.config.replicates = it->get<std::size_t>();
  }
  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ValidationError("seed", "must be an integer");
    req.config.seed = it->get<std::uint64_t>();
  }
  if (auto it = j.find("boundaries"); it != j.end() && !it->is_null()) {
    req.boundaries = boundaries_from_json(*it, req.spec.design);
  }
  req.spec.validate();
  return req;
}

MultiDoseResult run_multidose(const MultiDoseRequest& req) {
  if (req.boundaries) return simulate_multidose(req.spec, *req.boundaries, req.truth, req.config);
  return simulate_multidose(req.spec, req.truth, req.config);
}

std::string content_hash(const Json& j) {
  const std::string text = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace bop2te
