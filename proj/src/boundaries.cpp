#include "bop2te/boundaries.hpp"

#include <algorithm>
#include <cmath>

namespace bop2te {

double cutoff_efficacy(int n, int max_n, const CutoffParameters& q) {
  if (n < 1 || n > max_n) throw std::domain_error("cutoff requires 1 <= n <= N");
  return q.lambda_e * std::pow(static_cast<double>(n) / max_n, q.gamma);
}

double cutoff_toxicity(int n, int max_n, const CutoffParameters& q, double attenuation) {
  if (n < 1 || n > max_n) throw std::domain_error("cutoff requires 1 <= n <= N");
  if (!(attenuation > 0.0)) throw std::domain_error("attenuation must be positive");
  return q.lambda_t * std::pow(static_cast<double>(n) / max_n, q.gamma / attenuation);
}

BoundaryDeriver::BoundaryDeriver(DesignSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const double total = spec_.prior.total();
  for (const auto& look : spec_.schedule) {
    std::vector<double> eff(look.n + 1);
    std::vector<double> tox(look.n + 1);
    for (int x = 0; x <= look.n; ++x) {
      eff[x] = beta_posterior_tail(x, look.n, spec_.prior.efficacy(), total, spec_.eta_e_null,
                                   TailDirection::above);
      tox[x] = beta_posterior_tail(x, look.n, spec_.prior.toxicity(), total, spec_.eta_t_null,
                                   TailDirection::at_or_below);
    }
    efficacy_tail_.push_back(std::move(eff));
    toxicity_tail_.push_back(std::move(tox));
  }
}

double BoundaryDeriver::efficacy_posterior(int n, int responses) const {
  for (std::size_t i = 0; i < spec_.schedule.size(); ++i) {
    if (spec_.schedule[i].n == n) return efficacy_tail_[i].at(responses);
  }
  const double total = spec_.prior.total();
  return beta_posterior_tail(responses, n, spec_.prior.efficacy(), total, spec_.eta_e_null,
                             TailDirection::above);
}

double BoundaryDeriver::toxicity_posterior(int n, int toxicities) const {
  for (std::size_t i = 0; i < spec_.schedule.size(); ++i) {
    if (spec_.schedule[i].n == n) return toxicity_tail_[i].at(toxicities);
  }
  const double total = spec_.prior.total();
  return beta_posterior_tail(toxicities, n, spec_.prior.toxicity(), total, spec_.eta_t_null,
                             TailDirection::at_or_below);
}

StoppingBoundaries BoundaryDeriver::derive(const CutoffParameters& q) const {
  q.validate();
  const int max_n = spec_.max_n();
  StoppingBoundaries out;
  int running_e = -1;
  int running_t = 0;
  for (std::size_t i = 0; i < spec_.schedule.size(); ++i) {
    const Look& look = spec_.schedule[i];
    LookBoundary lb;
    lb.n = look.n;
    if (look.check_efficacy) {
      const double c = cutoff_efficacy(look.n, max_n, q);
      // Largest x whose posterior does not exceed the cutoff.
      int le = -1;
      for (int x = 0; x <= look.n; ++x) {
        if (efficacy_tail_[i][x] <= c + kCutoffTieTolerance) le = x;
      }
      running_e = std::max(running_e, le);
      lb.futility = running_e;
      lb.efficacy_cutoff = c;
    }
    if (look.check_toxicity) {
      const double c = cutoff_toxicity(look.n, max_n, q, spec_.attenuation);
      // Smallest y whose posterior does not exceed the cutoff.
      int lt = look.n + 1;
      for (int y = look.n; y >= 0; --y) {
        if (toxicity_tail_[i][y] <= c + kCutoffTieTolerance) lt = y;
      }
      running_t = std::max(running_t, lt);
      lb.toxicity = std::min(running_t, look.n + 1);
      lb.toxicity_cutoff = c;
    }
    out.looks.push_back(lb);
  }
  return out;
}

StoppingBoundaries derive_boundaries(const DesignSpec& spec, const CutoffParameters& q) {
  return BoundaryDeriver(spec).derive(q);
}

std::vector<std::string> DecisionRecord::reasons() const {
  std::vector<std::string> r;
  if (futility) r.emplace_back("futility");
  if (toxicity) r.emplace_back("toxicity");
  return r;
}

DecisionRecord interim_decision(const DesignSpec& spec, const StoppingBoundaries& boundaries,
                                const InterimData& data) {
  const auto it = std::find_if(boundaries.looks.begin(), boundaries.looks.end(),
                               [&](const LookBoundary& lb) { return lb.n == data.n; });
  if (it == boundaries.looks.end()) {
    throw ValidationError("n", "no scheduled look at n = " + std::to_string(data.n));
  }
  if (data.responses < 0 || data.responses > data.n) {
    throw ValidationError("responses", "must lie in [0, n]");
  }
  if (data.toxicities < 0 || data.toxicities > data.n) {
    throw ValidationError("toxicities", "must lie in [0, n]");
  }
  const double total = spec.prior.total();
  DecisionRecord rec;
  rec.n = data.n;
  rec.responses = data.responses;
  rec.toxicities = data.toxicities;
  rec.posterior_prob_eff = beta_posterior_tail(data.responses, data.n, spec.prior.efficacy(),
                                               total, spec.eta_e_null, TailDirection::above);
  rec.posterior_prob_tox = beta_posterior_tail(data.toxicities, data.n, spec.prior.toxicity(),
                                               total, spec.eta_t_null, TailDirection::at_or_below);
  rec.efficacy_cutoff = it->efficacy_cutoff;
  rec.toxicity_cutoff = it->toxicity_cutoff;
  rec.futility_bound = it->futility;
  rec.toxicity_bound = it->toxicity;
  rec.futility = it->futility && data.responses <= *it->futility;
  rec.toxicity = it->toxicity && data.toxicities >= *it->toxicity;
  rec.go = !rec.futility && !rec.toxicity;
  return rec;
}

}  // namespace bop2te
