#include "bop2te/optimizer.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "bop2te/parallel.hpp"

namespace bop2te {

namespace {

constexpr double kCompareTolerance = 1e-12;
constexpr double kRateTolerance = 1e-9;

struct Score {
  double power = 0.0;
  double a00 = 0.0;
  double a01 = 0.0;
  double a10 = 0.0;
  double pet_h00 = 0.0;
  std::size_t order = 0;
};

bool feasible(const Score& s, const AlphaTargets& t) {
  return s.a00 <= t.a00 && s.a01 <= t.a01 && s.a10 <= t.a10;
}

double violation(const Score& s, const AlphaTargets& t) {
  return std::max(0.0, s.a00 - t.a00) + std::max(0.0, s.a01 - t.a01) +
         std::max(0.0, s.a10 - t.a10);
}

// -1 if a < b, 1 if a > b, 0 within tolerance.
int compare(double a, double b) {
  if (a < b - kCompareTolerance) return -1;
  if (a > b + kCompareTolerance) return 1;
  return 0;
}

// True when `a` should be preferred over `b`, both feasible.
bool better(const Score& a, const Score& b) {
  if (int c = compare(a.power, b.power)) return c > 0;
  if (int c = compare(a.a00, b.a00)) return c < 0;
  if (int c = compare(a.a01 + a.a10, b.a01 + b.a10)) return c < 0;
  if (int c = compare(a.pet_h00, b.pet_h00)) return c > 0;
  return a.order < b.order;
}

bool less_violating(const Score& a, const Score& b, const AlphaTargets& t) {
  if (int c = compare(violation(a, t), violation(b, t))) return c < 0;
  return better(a, b);
}

// Index of the preferred score: best feasible, otherwise least violating.
std::size_t select(const std::vector<Score>& scores, const AlphaTargets& t, bool& any_feasible) {
  std::size_t best = scores.size();
  any_feasible = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!feasible(scores[i], t)) continue;
    if (!any_feasible || better(scores[i], scores[best])) best = i;
    any_feasible = true;
  }
  if (any_feasible) return best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (best == scores.size() || less_violating(scores[i], scores[best], t)) best = i;
  }
  return best;
}

std::vector<int> schedule_sizes(const DesignSpec& spec) {
  std::vector<int> sizes;
  for (const auto& look : spec.schedule) sizes.push_back(look.n);
  return sizes;
}

std::array<OcEvaluator, 4> make_evaluators(const DesignSpec& spec, double phi) {
  const auto sizes = schedule_sizes(spec);
  return {OcEvaluator(sizes, hypothesis_point(spec, Hypothesis::h00, phi)),
          OcEvaluator(sizes, hypothesis_point(spec, Hypothesis::h01, phi)),
          OcEvaluator(sizes, hypothesis_point(spec, Hypothesis::h10, phi)),
          OcEvaluator(sizes, hypothesis_point(spec, Hypothesis::h11, phi))};
}

Score score_of(const std::array<OcEvaluator, 4>& ev, const StoppingBoundaries& b,
               std::size_t order) {
  const auto h00 = ev[0].evaluate(b);
  Score s;
  s.a00 = h00.pcp;
  s.pet_h00 = h00.pet;
  s.a01 = ev[1].evaluate(b).pcp;
  s.a10 = ev[2].evaluate(b).pcp;
  s.power = ev[3].evaluate(b).pcp;
  s.order = order;
  return s;
}

// Probability of passing every look of one endpoint, by stage, for a single
// binomial rate. Bounds are indexed by look; inactive looks never stop.
struct MarginalPass {
  double final_pass = 0.0;
  double penultimate_pass = 1.0;
};

MarginalPass marginal_pass(const std::vector<int>& sizes, const std::vector<int>& bound,
                           const std::vector<bool>& active, double p, bool futility) {
  std::vector<double> dist{1.0};
  int prev = 0;
  MarginalPass out;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    const int m = sizes[r] - prev;
    std::vector<double> inc(m + 1);
    for (int k = 0; k <= m; ++k) inc[k] = binomial_pmf(k, m, p);
    std::vector<double> next(dist.size() + m, 0.0);
    for (std::size_t s = 0; s < dist.size(); ++s) {
      if (dist[s] == 0.0) continue;
      for (int k = 0; k <= m; ++k) next[s + k] += dist[s] * inc[k];
    }
    if (active[r]) {
      for (std::size_t s = 0; s < next.size(); ++s) {
        const int count = static_cast<int>(s);
        if (futility ? count <= bound[r] : count >= bound[r]) next[s] = 0.0;
      }
    }
    dist = std::move(next);
    double sum = 0.0;
    for (double v : dist) sum += v;
    if (r + 2 == sizes.size()) out.penultimate_pass = sum;
    if (r + 1 == sizes.size()) out.final_pass = sum;
    prev = sizes[r];
  }
  return out;
}

// All non-decreasing vectors with entry i in [lo[i], hi[i]].
void enumerate_monotone(const std::vector<int>& lo, const std::vector<int>& hi,
                        std::vector<int>& current, std::vector<std::vector<int>>& out) {
  const std::size_t i = current.size();
  if (i == lo.size()) {
    out.push_back(current);
    return;
  }
  const int start = std::max(lo[i], i == 0 ? lo[i] : current.back());
  for (int v = start; v <= hi[i]; ++v) {
    current.push_back(v);
    enumerate_monotone(lo, hi, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> monotone_vectors(const std::vector<int>& lo,
                                               const std::vector<int>& hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate_monotone(lo, hi, current, out);
  return out;
}

}  // namespace

std::vector<double> lambda_values(GridVariant variant) {
  std::vector<double> v;
  for (int i = 0; i < 12; ++i) v.push_back(0.5 + 0.025 * i);
  for (int i = 0; i < 20; ++i) v.push_back(0.80 + 0.01 * i);
  for (double& x : v) x = std::round(x * 1e6) / 1e6;
  if (variant == GridVariant::compact) {
    v.erase(v.begin(), v.begin() + 2);
    v.pop_back();
  }
  return v;
}

std::vector<double> gamma_values() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) {
    const double v = 1.0 - 0.025 * i;
    g.push_back(std::log(v) / std::log(0.5));
  }
  g.front() = 0.0;
  g.back() = 1.0;
  return g;
}

std::vector<CutoffParameters> parameter_grid(GridVariant variant) {
  const auto lambdas = lambda_values(variant);
  const auto gammas = gamma_values();
  std::vector<CutoffParameters> grid;
  grid.reserve(lambdas.size() * lambdas.size() * gammas.size());
  for (double le : lambdas) {
    for (double lt : lambdas) {
      for (double g : gammas) grid.push_back({le, lt, g});
    }
  }
  return grid;
}

std::array<HypothesisResult, 4> evaluate_hypotheses(const StoppingBoundaries& b,
                                                    const DesignSpec& spec, double phi) {
  std::array<HypothesisResult, 4> out;
  for (std::size_t i = 0; i < kHypotheses.size(); ++i) {
    out[i].hypothesis = kHypotheses[i];
    out[i].truth = hypothesis_point(spec, kHypotheses[i], phi);
    out[i].oc = operating_characteristics(b, out[i].truth);
  }
  return out;
}

OptimizationResult optimize(const DesignSpec& spec, const OptimizeOptions& options) {
  const BoundaryDeriver deriver(spec);
  const auto grid = parameter_grid(options.grid);

  std::map<std::vector<int>, std::size_t> seen;
  std::vector<StoppingBoundaries> distinct;
  std::vector<std::size_t> first_q;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto b = deriver.derive(grid[i]);
    auto [it, inserted] = seen.emplace(b.key(), distinct.size());
    if (!inserted) continue;
    distinct.push_back(std::move(b));
    first_q.push_back(i);
  }

  const auto evaluators = make_evaluators(spec, spec.design_phi);
  std::vector<Score> scores(distinct.size());
  parallel_for(
      distinct.size(),
      [&](std::size_t i) { scores[i] = score_of(evaluators, distinct[i], first_q[i]); },
      options.workers);

  bool any_feasible = false;
  const std::size_t best = select(scores, spec.alpha, any_feasible);

  OptimizationResult result;
  result.q = grid[first_q[best]];
  result.boundaries = distinct[best];
  result.oc = evaluate_hypotheses(result.boundaries, spec, spec.design_phi);
  result.design_phi = spec.design_phi;
  result.feasible = any_feasible;
  result.candidates_evaluated = grid.size();
  result.distinct_boundaries = distinct.size();
  return result;
}

int practical_min_futility(int n, double eta_e_null) {
  // Largest x with x / n < eta_e_null.
  const double edge = n * eta_e_null;
  int x = static_cast<int>(std::ceil(edge - kRateTolerance)) - 1;
  return std::clamp(x, -1, n);
}

int practical_max_toxicity(int n, double eta_t_null) {
  // Smallest y with y / n > eta_t_null.
  const double edge = n * eta_t_null;
  int y = static_cast<int>(std::floor(edge + kRateTolerance)) + 1;
  return std::clamp(y, 0, n + 1);
}

OptimizationResult global_boundary_search(const DesignSpec& spec,
                                          const GlobalSearchOptions& options) {
  spec.validate();
  const auto sizes = schedule_sizes(spec);
  const std::size_t looks = sizes.size();
  std::vector<bool> eff_active(looks), tox_active(looks);
  std::vector<int> e_lo, e_hi, t_lo, t_hi;
  for (std::size_t r = 0; r < looks; ++r) {
    const Look& look = spec.schedule[r];
    eff_active[r] = look.check_efficacy;
    tox_active[r] = look.check_toxicity;
    if (look.check_efficacy) {
      e_lo.push_back(options.practical_constraint ? std::max(0, practical_min_futility(look.n, spec.eta_e_null)) : 0);
      e_hi.push_back(look.n);
    }
    if (look.check_toxicity) {
      t_lo.push_back(1);
      t_hi.push_back(options.practical_constraint ? practical_max_toxicity(look.n, spec.eta_t_null) : look.n + 1);
    }
  }
  if (e_lo.size() > kGlobalMaxEfficacyLooks || t_lo.size() > kGlobalMaxToxicityLooks) {
    throw std::length_error("global search supports at most 2 efficacy and 3 toxicity looks");
  }
  const auto eff_vectors = monotone_vectors(e_lo, e_hi);
  const auto tox_vectors = monotone_vectors(t_lo, t_hi);
  if (eff_vectors.empty() || tox_vectors.empty()) {
    throw std::domain_error("global search range is empty");
  }

  // Expand compact vectors (one entry per active look) to per-look arrays.
  auto expand = [&](const std::vector<int>& v, const std::vector<bool>& active) {
    std::vector<int> full(looks, 0);
    std::size_t k = 0;
    for (std::size_t r = 0; r < looks; ++r) {
      if (active[r]) full[r] = v[k++];
    }
    return full;
  };

  const std::size_t n_e = eff_vectors.size();
  const std::size_t n_t = tox_vectors.size();
  const std::size_t pairs = n_e * n_t;
  const double phi = spec.design_phi;
  std::vector<Score> best_per_e(n_e);
  std::vector<std::size_t> best_t(n_e, 0);
  const AlphaTargets& targets = spec.alpha;

  auto reduce_row = [&](std::size_t ie, const std::vector<Score>& row) {
    bool any = false;
    const std::size_t j = select(row, targets, any);
    best_per_e[ie] = row[j];
    best_t[ie] = j;
    (void)any;
  };

  if (phi == 1.0) {
    // Claim probabilities factor into an efficacy part and a toxicity part.
    std::vector<MarginalPass> e_null(n_e), e_alt(n_e), t_null(n_t), t_alt(n_t);
    parallel_for(n_e, [&](std::size_t i) {
      const auto full = expand(eff_vectors[i], eff_active);
      e_null[i] = marginal_pass(sizes, full, eff_active, spec.eta_e_null, true);
      e_alt[i] = marginal_pass(sizes, full, eff_active, spec.eta_e, true);
    }, options.workers);
    parallel_for(n_t, [&](std::size_t i) {
      const auto full = expand(tox_vectors[i], tox_active);
      t_null[i] = marginal_pass(sizes, full, tox_active, spec.eta_t_null, false);
      t_alt[i] = marginal_pass(sizes, full, tox_active, spec.eta_t, false);
    }, options.workers);
    parallel_for(n_e, [&](std::size_t ie) {
      std::vector<Score> row(n_t);
      for (std::size_t it = 0; it < n_t; ++it) {
        Score& s = row[it];
        s.a00 = e_null[ie].final_pass * t_null[it].final_pass;
        s.a01 = e_null[ie].final_pass * t_alt[it].final_pass;
        s.a10 = e_alt[ie].final_pass * t_null[it].final_pass;
        s.power = e_alt[ie].final_pass * t_alt[it].final_pass;
        s.pet_h00 = looks > 1 ? 1.0 - e_null[ie].penultimate_pass * t_null[it].penultimate_pass : 0.0;
        s.order = ie * n_t + it;
      }
      reduce_row(ie, row);
    }, options.workers);
  } else {
    if (pairs > options.max_exhaustive_pairs) {
      throw std::length_error("global search without factorization exceeds the pair budget");
    }
    const auto evaluators = make_evaluators(spec, phi);
    parallel_for(n_e, [&](std::size_t ie) {
      std::vector<Score> row(n_t);
      for (std::size_t it = 0; it < n_t; ++it) {
        const auto b = make_boundaries(spec.schedule, eff_vectors[ie], tox_vectors[it]);
        row[it] = score_of(evaluators, b, ie * n_t + it);
      }
      reduce_row(ie, row);
    }, options.workers);
  }

  bool any_feasible = false;
  const std::size_t ie = select(best_per_e, targets, any_feasible);

  OptimizationResult result;
  result.method = options.practical_constraint ? "Global*" : "Global";
  result.boundaries = make_boundaries(spec.schedule, eff_vectors[ie], tox_vectors[best_t[ie]]);
  result.oc = evaluate_hypotheses(result.boundaries, spec, phi);
  result.design_phi = phi;
  result.feasible = any_feasible;
  result.candidates_evaluated = pairs;
  result.distinct_boundaries = pairs;
  return result;
}

}  // namespace bop2te
