#include "bop2te/operating_characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bop2te/probability.hpp"

namespace bop2te {

namespace {

// Pr(response | toxicity) and Pr(response | no toxicity). When a margin is
// degenerate the conditional never carries mass, so any value in [0, 1] works.
std::pair<double, double> conditional_response(const OutcomeProbabilities& p) {
  const double given_tox = p.pi_t > 0.0 ? p.pi_et / p.pi_t : p.pi_e;
  const double given_no_tox = p.pi_t < 1.0 ? (p.pi_e - p.pi_et) / (1.0 - p.pi_t) : p.pi_e;
  return {std::clamp(given_tox, 0.0, 1.0), std::clamp(given_no_tox, 0.0, 1.0)};
}

std::vector<double> binomial_row(int m, double p) {
  std::vector<double> row(m + 1);
  for (int k = 0; k <= m; ++k) row[k] = binomial_pmf(k, m, p);
  return row;
}

bool continues(const LookBoundary& lb, int responses, int toxicities) {
  return responses > lb.futility_or_inactive() && toxicities < lb.toxicity_or_inactive();
}

std::vector<int> look_sizes(const StoppingBoundaries& b) {
  std::vector<int> sizes;
  sizes.reserve(b.looks.size());
  for (const auto& lb : b.looks) sizes.push_back(lb.n);
  return sizes;
}

// Mass of `from` inside the continuation region of `lb`, convolved with one
// cohort increment.
CountTable advance(const CountTable& from, const LookBoundary& lb, const CountTable& increment) {
  const int m = increment.n();
  CountTable to(from.n() + m);
  for (int se = 0; se <= from.n(); ++se) {
    for (int st = 0; st <= from.n(); ++st) {
      const double w = from.at(se, st);
      if (w == 0.0 || !continues(lb, se, st)) continue;
      for (int a = 0; a <= m; ++a) {
        for (int c = 0; c <= m; ++c) {
          to.at(se + a, st + c) += w * increment.at(a, c);
        }
      }
    }
  }
  return to;
}

double continuation_mass(const CountTable& table, const LookBoundary& lb) {
  double sum = 0.0;
  for (int se = 0; se <= table.n(); ++se) {
    for (int st = 0; st <= table.n(); ++st) {
      if (continues(lb, se, st)) sum += table.at(se, st);
    }
  }
  return sum;
}

OperatingCharacteristics summarize(const std::vector<int>& sizes, std::vector<double> pass) {
  OperatingCharacteristics oc;
  const std::size_t stages = sizes.size();
  oc.pcp = pass.back();
  oc.pet = stages > 1 ? 1.0 - pass[stages - 2] : 0.0;
  oc.ess = sizes.front();
  for (std::size_t r = 1; r < stages; ++r) {
    oc.ess += (sizes[r] - sizes[r - 1]) * pass[r - 1];
  }
  oc.stage_pass_probs = std::move(pass);
  return oc;
}

}  // namespace

void TrialData::validate() const {
  if (n < 0) throw ValidationError("n", "must be non-negative");
  int sum = 0;
  for (int v : x) {
    if (v < 0) throw ValidationError("x", "cell counts must be non-negative");
    sum += v;
  }
  if (sum != n) throw ValidationError("x", "cell counts must sum to n");
}

double CountTable::total() const { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

double joint_stage_pmf(int x_e, int x_t, int m, const OutcomeProbabilities& p) {
  if (m < 0 || x_e < 0 || x_t < 0 || x_e > m || x_t > m) {
    throw std::domain_error("stage pmf requires 0 <= x_e, x_t <= m");
  }
  validate(p);
  const auto [given_tox, given_no_tox] = conditional_response(p);
  double inner = 0.0;
  for (int x = 0; x <= std::min(x_e, x_t); ++x) {
    if (x_e - x > m - x_t) continue;
    inner += binomial_pmf(x, x_t, given_tox) * binomial_pmf(x_e - x, m - x_t, given_no_tox);
  }
  return binomial_pmf(x_t, m, p.pi_t) * inner;
}

CountTable stage_pmf_table(int m, const OutcomeProbabilities& p) {
  if (m < 0) throw std::domain_error("cohort size must be non-negative");
  validate(p);
  const auto [given_tox, given_no_tox] = conditional_response(p);
  const auto tox_row = binomial_row(m, p.pi_t);
  CountTable table(m);
  for (int xt = 0; xt <= m; ++xt) {
    if (tox_row[xt] == 0.0) continue;
    const auto among_tox = binomial_row(xt, given_tox);
    const auto among_rest = binomial_row(m - xt, given_no_tox);
    for (int a = 0; a <= xt; ++a) {
      for (int c = 0; c <= m - xt; ++c) {
        table.at(a + c, xt) += tox_row[xt] * among_tox[a] * among_rest[c];
      }
    }
  }
  return table;
}

OcEvaluator::OcEvaluator(const std::vector<int>& sizes, const OutcomeProbabilities& p)
    : look_sizes_(sizes) {
  validate(p);
  int prev = 0;
  for (int n : look_sizes_) {
    if (n <= prev) throw std::domain_error("look sizes must be strictly increasing");
    increments_.push_back(stage_pmf_table(n - prev, p));
    prev = n;
  }
}

OperatingCharacteristics OcEvaluator::evaluate(const StoppingBoundaries& b) const {
  if (look_sizes(b) != look_sizes_) throw std::invalid_argument("boundaries do not match the evaluator schedule");
  std::vector<double> pass;
  pass.reserve(b.looks.size());
  CountTable dist = increments_.front();
  pass.push_back(continuation_mass(dist, b.looks.front()));
  for (std::size_t r = 1; r < b.looks.size(); ++r) {
    dist = advance(dist, b.looks[r - 1], increments_[r]);
    pass.push_back(continuation_mass(dist, b.looks[r]));
  }
  return summarize(look_sizes_, std::move(pass));
}

CountTable continuation_distribution(const StoppingBoundaries& b, const OutcomeProbabilities& p,
                                     std::size_t r) {
  if (r < 1 || r > b.looks.size()) throw std::out_of_range("stage index out of range");
  validate(p);
  CountTable dist = stage_pmf_table(b.looks.front().n, p);
  for (std::size_t s = 1; s < r; ++s) {
    const int m = b.looks[s].n - b.looks[s - 1].n;
    dist = advance(dist, b.looks[s - 1], stage_pmf_table(m, p));
  }
  return dist;
}

double claim_probability(const StoppingBoundaries& b, const OutcomeProbabilities& p) {
  const auto final_dist = continuation_distribution(b, p, b.looks.size());
  return continuation_mass(final_dist, b.looks.back());
}

OperatingCharacteristics operating_characteristics(const StoppingBoundaries& b,
                                                   const OutcomeProbabilities& p) {
  return OcEvaluator(look_sizes(b), p).evaluate(b);
}

double brute_force_claim_probability(const StoppingBoundaries& b, const OutcomeProbabilities& p) {
  const int max_n = b.max_n();
  if (max_n > kBruteForceMaxN) {
    throw std::length_error("brute-force enumeration is limited to N <= 10");
  }
  const auto cells = cells_from_margins(p);
  std::vector<int> look_at(max_n + 1, -1);
  for (std::size_t i = 0; i < b.looks.size(); ++i) look_at[b.looks[i].n] = static_cast<int>(i);

  long long sequences = 1;
  for (int i = 0; i < max_n; ++i) sequences *= 4;
  double claim = 0.0;
  std::vector<int> outcome(max_n);
  for (long long code = 0; code < sequences; ++code) {
    long long rest = code;
    double prob = 1.0;
    for (int i = 0; i < max_n; ++i) {
      outcome[i] = static_cast<int>(rest % 4);
      rest /= 4;
      prob *= cells[outcome[i]];
    }
    if (prob == 0.0) continue;
    int responses = 0;
    int toxicities = 0;
    bool stopped = false;
    for (int i = 0; i < max_n && !stopped; ++i) {
      // cells: 0 both, 1 response only, 2 toxicity only, 3 neither
      responses += (outcome[i] == 0 || outcome[i] == 1) ? 1 : 0;
      toxicities += (outcome[i] == 0 || outcome[i] == 2) ? 1 : 0;
      const int look = look_at[i + 1];
      if (look >= 0 && !continues(b.looks[look], responses, toxicities)) stopped = true;
    }
    if (!stopped) claim += prob;
  }
  return claim;
}

HypothesisClaims hypothesis_claims(const StoppingBoundaries& b, const DesignSpec& spec, double phi) {
  HypothesisClaims c;
  c.a00 = claim_probability(b, hypothesis_point(spec, Hypothesis::h00, phi));
  c.a01 = claim_probability(b, hypothesis_point(spec, Hypothesis::h01, phi));
  c.a10 = claim_probability(b, hypothesis_point(spec, Hypothesis::h10, phi));
  c.power = claim_probability(b, hypothesis_point(spec, Hypothesis::h11, phi));
  return c;
}

double independence_residual(const StoppingBoundaries& b, const DesignSpec& spec) {
  const auto c = hypothesis_claims(b, spec, 1.0);
  if (c.power == 0.0) return c.a00;
  return c.a00 - c.a01 * c.a10 / c.power;
}

std::vector<SensitivityPoint> phi_sensitivity_curve(const StoppingBoundaries& b,
                                                    const DesignSpec& spec,
                                                    std::vector<double> phis) {
  for (double phi : phis) {
    if (!(phi > 0.0)) throw ValidationError("phi_grid", "odds ratios must be positive");
  }
  std::sort(phis.begin(), phis.end());
  std::vector<SensitivityPoint> curve;
  curve.reserve(phis.size());
  for (double phi : phis) curve.push_back({phi, hypothesis_claims(b, spec, phi)});
  return curve;
}

}  // namespace bop2te
