#include "bop2te/design.hpp"

#include <cmath>

namespace bop2te {

namespace {

bool open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

void DesignSpec::validate() const {
  if (!open_unit(eta_e_null)) throw ValidationError("eta_e_null", "must lie in (0, 1)");
  if (!open_unit(eta_e)) throw ValidationError("eta_e", "must lie in (0, 1)");
  if (!open_unit(eta_t)) throw ValidationError("eta_t", "must lie in (0, 1)");
  if (!open_unit(eta_t_null)) throw ValidationError("eta_t_null", "must lie in (0, 1)");
  if (!(eta_e_null < eta_e)) throw ValidationError("eta_e_null", "must be below eta_e");
  if (!(eta_t < eta_t_null)) throw ValidationError("eta_t", "must be below eta_t_null");
  if (!open_unit(alpha.a00)) throw ValidationError("alpha_targets.a00", "must lie in (0, 1)");
  if (!open_unit(alpha.a01)) throw ValidationError("alpha_targets.a01", "must lie in (0, 1)");
  if (!open_unit(alpha.a10)) throw ValidationError("alpha_targets.a10", "must lie in (0, 1)");
  if (schedule.empty()) throw ValidationError("schedule", "must contain at least one look");
  int prev = 0;
  for (const auto& look : schedule) {
    if (look.n <= prev) throw ValidationError("schedule", "sample sizes must be strictly increasing and positive");
    if (!look.check_efficacy && !look.check_toxicity) {
      throw ValidationError("schedule", "every look must monitor at least one endpoint");
    }
    prev = look.n;
  }
  if (!schedule.back().check_efficacy || !schedule.back().check_toxicity) {
    throw ValidationError("schedule", "the final look must monitor both endpoints");
  }
  try {
    prior.validate();
  } catch (const std::domain_error& e) {
    throw ValidationError("prior", e.what());
  }
  const double total = prior.total();
  if (!(prior.efficacy() > 0.0 && prior.efficacy() < total)) {
    throw ValidationError("prior", "efficacy prior mass must lie strictly inside (0, total)");
  }
  if (!(prior.toxicity() > 0.0 && prior.toxicity() < total)) {
    throw ValidationError("prior", "toxicity prior mass must lie strictly inside (0, total)");
  }
  if (!(attenuation > 0.0) || !std::isfinite(attenuation)) {
    throw ValidationError("attenuation", "must be positive");
  }
  if (!(design_phi > 0.0) || !std::isfinite(design_phi)) {
    throw ValidationError("design_phi", "must be positive");
  }
}

void DesignSpec::apply_centering(PriorCentering c) {
  centering = c;
  switch (c) {
    case PriorCentering::null_rates:
      prior = PriorHyperparameters::from_margins(eta_e_null, eta_t_null);
      break;
    case PriorCentering::alternative_rates:
      prior = PriorHyperparameters::from_margins(eta_e, eta_t);
      break;
    case PriorCentering::custom:
      break;
  }
}

DesignSpec make_design(double eta_e, double eta_e_null, double eta_t, double eta_t_null,
                       AlphaTargets alpha, std::vector<Look> schedule,
                       PriorCentering centering) {
  DesignSpec spec;
  spec.eta_e = eta_e;
  spec.eta_e_null = eta_e_null;
  spec.eta_t = eta_t;
  spec.eta_t_null = eta_t_null;
  spec.alpha = alpha;
  spec.schedule = std::move(schedule);
  if (centering == PriorCentering::custom) centering = PriorCentering::null_rates;
  spec.apply_centering(centering);
  return spec;
}

const char* hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::h00: return "H00";
    case Hypothesis::h01: return "H01";
    case Hypothesis::h10: return "H10";
    case Hypothesis::h11: return "H11";
  }
  return "?";
}

OutcomeProbabilities hypothesis_point(const DesignSpec& spec, Hypothesis h, double phi) {
  const bool efficacious = h == Hypothesis::h10 || h == Hypothesis::h11;
  const bool safe = h == Hypothesis::h01 || h == Hypothesis::h11;
  const double pe = efficacious ? spec.eta_e : spec.eta_e_null;
  const double pt = safe ? spec.eta_t : spec.eta_t_null;
  return outcome_with_phi(pe, pt, phi);
}

void CutoffParameters::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(lambda_e)) throw ValidationError("lambda_e", "must lie in [0, 1]");
  if (!in_unit(lambda_t)) throw ValidationError("lambda_t", "must lie in [0, 1]");
  if (!in_unit(gamma)) throw ValidationError("gamma", "must lie in [0, 1]");
}

void StoppingBoundaries::validate() const {
  if (looks.empty()) throw ValidationError("boundaries", "no looks");
  int prev_n = 0;
  int prev_e = -1;
  int prev_t = 0;
  for (const auto& lb : looks) {
    if (lb.n <= prev_n) throw ValidationError("boundaries", "look sizes must increase");
    if (lb.futility) {
      if (*lb.futility < -1 || *lb.futility > lb.n) {
        throw ValidationError("boundaries", "futility bound out of [-1, n]");
      }
      if (*lb.futility < prev_e) throw ValidationError("boundaries", "futility bounds must be non-decreasing");
      prev_e = *lb.futility;
    }
    if (lb.toxicity) {
      if (*lb.toxicity < 0 || *lb.toxicity > lb.n + 1) {
        throw ValidationError("boundaries", "toxicity bound out of [0, n + 1]");
      }
      if (*lb.toxicity < prev_t) throw ValidationError("boundaries", "toxicity bounds must be non-decreasing");
      prev_t = *lb.toxicity;
    }
    prev_n = lb.n;
  }
}

bool StoppingBoundaries::same_thresholds(const StoppingBoundaries& other) const {
  return key() == other.key();
}

std::vector<int> StoppingBoundaries::key() const {
  std::vector<int> k;
  k.reserve(looks.size() * 3);
  for (const auto& lb : looks) {
    k.push_back(lb.n);
    k.push_back(lb.futility_or_inactive());
    k.push_back(lb.toxicity_or_inactive());
  }
  return k;
}

StoppingBoundaries make_boundaries(const std::vector<Look>& schedule,
                                   const std::vector<int>& futility,
                                   const std::vector<int>& toxicity) {
  StoppingBoundaries b;
  std::size_t ie = 0;
  std::size_t it = 0;
  for (const auto& look : schedule) {
    LookBoundary lb;
    lb.n = look.n;
    if (look.check_efficacy) {
      if (ie >= futility.size()) throw ValidationError("futility", "too few futility bounds");
      lb.futility = futility[ie++];
    }
    if (look.check_toxicity) {
      if (it >= toxicity.size()) throw ValidationError("toxicity", "too few toxicity bounds");
      lb.toxicity = toxicity[it++];
    }
    b.looks.push_back(lb);
  }
  if (ie != futility.size()) throw ValidationError("futility", "too many futility bounds");
  if (it != toxicity.size()) throw ValidationError("toxicity", "too many toxicity bounds");
  b.validate();
  return b;
}

}  // namespace bop2te
