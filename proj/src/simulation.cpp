#include "bop2te/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "bop2te/optimizer.hpp"
#include "bop2te/parallel.hpp"

namespace bop2te {

namespace {

constexpr std::size_t kBlock = 2048;
constexpr double kScaleTolerance = 1e-9;

struct PatientTally {
  int responses = 0;
  int toxicities = 0;
};

void enroll(int m, const CellProbabilities& cells, std::mt19937_64& rng, PatientTally& t) {
  for (int i = 0; i < m; ++i) {
    const int c = draw_cell(cells, rng);
    // cells: 0 both, 1 response only, 2 toxicity only, 3 neither
    t.responses += (c == 0 || c == 1) ? 1 : 0;
    t.toxicities += (c == 0 || c == 2) ? 1 : 0;
  }
}

bool stops(const LookBoundary& lb, double responses, double toxicities) {
  if (lb.futility && responses <= *lb.futility + kScaleTolerance) return true;
  if (lb.toxicity && toxicities >= *lb.toxicity - kScaleTolerance) return true;
  return false;
}

std::size_t blocks_for(std::size_t replicates) { return (replicates + kBlock - 1) / kBlock; }

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t arm) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32), static_cast<std::uint32_t>(arm)};
  return std::mt19937_64(seq);
}

int draw_cell(const CellProbabilities& cells, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    acc += cells[c];
    if (u < acc) return c;
  }
  return 3;
}

TrialOutcome simulate_trial(const StoppingBoundaries& boundaries, const DesignSpec& spec,
                            const OutcomeProbabilities& truth, std::mt19937_64& rng) {
  (void)spec;
  const auto cells = cells_from_margins(truth);
  TrialOutcome out;
  PatientTally tally;
  int prev = 0;
  const std::size_t stages = boundaries.looks.size();
  for (std::size_t r = 0; r < stages; ++r) {
    const LookBoundary& lb = boundaries.looks[r];
    enroll(lb.n - prev, cells, rng, tally);
    prev = lb.n;
    out.stage = static_cast<int>(r + 1);
    out.enrolled = lb.n;
    out.responses = tally.responses;
    out.toxicities = tally.toxicities;
    if (stops(lb, tally.responses, tally.toxicities)) {
      out.stopped_early = r + 1 < stages;
      return out;
    }
  }
  out.claimed = true;
  return out;
}

void SimulationConfig::validate() const {
  if (replicates < 1) throw ValidationError("replicates", "must be at least 1");
}

MonteCarloOc estimate_oc(const StoppingBoundaries& boundaries, const DesignSpec& spec,
                         const OutcomeProbabilities& truth, const SimulationConfig& config) {
  config.validate();
  validate(truth);
  boundaries.validate();
  const std::size_t stages = boundaries.looks.size();
  const std::size_t blocks = blocks_for(config.replicates);

  struct Counts {
    std::vector<std::uint64_t> passed;  // per stage
    std::uint64_t early = 0;
    std::uint64_t enrolled = 0;
    std::uint64_t enrolled_sq = 0;
  };
  std::vector<Counts> partial(blocks, Counts{std::vector<std::uint64_t>(stages, 0)});
  parallel_for(blocks, [&](std::size_t b) {
    Counts& c = partial[b];
    const std::size_t end = std::min(config.replicates, (b + 1) * kBlock);
    for (std::size_t rep = b * kBlock; rep < end; ++rep) {
      auto rng = substream(config.seed, rep, 0);
      const auto t = simulate_trial(boundaries, spec, truth, rng);
      const std::size_t passed = t.claimed ? stages : static_cast<std::size_t>(t.stage - 1);
      for (std::size_t r = 0; r < passed; ++r) ++c.passed[r];
      c.early += t.stopped_early ? 1 : 0;
      c.enrolled += t.enrolled;
      c.enrolled_sq += static_cast<std::uint64_t>(t.enrolled) * t.enrolled;
    }
  }, config.workers);

  Counts total{std::vector<std::uint64_t>(stages, 0)};
  for (const auto& c : partial) {
    for (std::size_t r = 0; r < stages; ++r) total.passed[r] += c.passed[r];
    total.early += c.early;
    total.enrolled += c.enrolled;
    total.enrolled_sq += c.enrolled_sq;
  }
  const double reps = static_cast<double>(config.replicates);
  MonteCarloOc mc;
  mc.replicates = config.replicates;
  for (std::size_t r = 0; r < stages; ++r) mc.oc.stage_pass_probs.push_back(total.passed[r] / reps);
  mc.oc.pcp = mc.oc.stage_pass_probs.back();
  mc.oc.pet = total.early / reps;
  mc.oc.ess = total.enrolled / reps;
  mc.pcp_se = std::sqrt(mc.oc.pcp * (1.0 - mc.oc.pcp) / reps);
  mc.pet_se = std::sqrt(mc.oc.pet * (1.0 - mc.oc.pet) / reps);
  const double var = std::max(0.0, total.enrolled_sq / reps - mc.oc.ess * mc.oc.ess);
  mc.ess_se = std::sqrt(var / reps);
  return mc;
}

std::vector<double> pava(const std::vector<double>& values, const std::vector<double>& weights,
                         Monotonicity direction) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("pava: values and weights differ in length");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("pava: weights must be positive");
  }
  const double sign = direction == Monotonicity::non_decreasing ? 1.0 : -1.0;
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> stack;
  for (std::size_t i = 0; i < values.size(); ++i) {
    stack.push_back({sign * values[i], weights[i], 1});
    while (stack.size() > 1 && stack[stack.size() - 2].mean > stack.back().mean) {
      Block top = stack.back();
      stack.pop_back();
      Block& prev = stack.back();
      const double w = prev.weight + top.weight;
      prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
      prev.weight = w;
      prev.count += top.count;
    }
  }
  std::vector<double> fit;
  fit.reserve(values.size());
  for (const auto& b : stack) fit.insert(fit.end(), b.count, sign * b.mean);
  return fit;
}

std::optional<std::size_t> select_optimal_dose(const std::vector<double>& efficacy,
                                               const std::vector<bool>& surviving, double delta) {
  if (efficacy.size() != surviving.size()) {
    throw std::invalid_argument("select_optimal_dose: size mismatch");
  }
  std::optional<std::size_t> highest;
  for (std::size_t i = 0; i < surviving.size(); ++i) {
    if (surviving[i]) highest = i;
  }
  if (!highest) return std::nullopt;
  const double threshold = delta * efficacy[*highest];
  for (std::size_t i = 0; i < efficacy.size(); ++i) {
    if (surviving[i] && efficacy[i] > threshold) return i;
  }
  return std::nullopt;
}

void DoseOptimizationSpec::validate() const {
  if (arms.empty()) throw ValidationError("arms", "at least one dose arm is required");
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta", "must lie in (0, 1]");
  design.validate();
}

MultiDoseResult simulate_multidose(const DoseOptimizationSpec& dspec,
                                   const StoppingBoundaries& boundaries,
                                   const std::vector<OutcomeProbabilities>& truth,
                                   const SimulationConfig& config) {
  dspec.validate();
  config.validate();
  boundaries.validate();
  if (truth.size() != dspec.arms.size()) {
    throw ValidationError("truth", "one outcome distribution per arm is required");
  }
  const std::size_t arms = dspec.arms.size();
  std::vector<CellProbabilities> cells;
  for (const auto& p : truth) {
    try {
      cells.push_back(cells_from_margins(p));
    } catch (const std::domain_error& e) {
      throw ValidationError("truth", e.what());
    }
  }
  const double tau_e = dspec.design.prior.efficacy();
  const double tau_t = dspec.design.prior.toxicity();
  const double tau = dspec.design.prior.total();
  const std::size_t stages = boundaries.looks.size();

  auto to_scale = [&](double adjusted, double raw_mean, int raw_count, int n, double tau_m) {
    if (dspec.scale == IsotonicScale::sample_size) return n * adjusted;
    if (std::fabs(adjusted - raw_mean) <= 1e-12) return static_cast<double>(raw_count);
    return adjusted * (n + tau) - tau_m;
  };

  struct Counts {
    std::vector<std::uint64_t> selected, early, enrolled;
    std::uint64_t none = 0;
  };
  const std::size_t blocks = blocks_for(config.replicates);
  std::vector<Counts> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Counts& c = partial[b];
    c.selected.assign(arms, 0);
    c.early.assign(arms, 0);
    c.enrolled.assign(arms, 0);
    const std::size_t end = std::min(config.replicates, (b + 1) * kBlock);
    std::vector<std::mt19937_64> rngs(arms);
    std::vector<PatientTally> tally(arms);
    std::vector<bool> active(arms);
    std::vector<int> enrolled(arms);
    for (std::size_t rep = b * kBlock; rep < end; ++rep) {
      for (std::size_t k = 0; k < arms; ++k) {
        rngs[k] = substream(config.seed, rep, k);
        tally[k] = {};
        active[k] = true;
        enrolled[k] = 0;
      }
      int prev = 0;
      std::vector<double> final_eff(arms, 0.0);
      for (std::size_t r = 0; r < stages; ++r) {
        const LookBoundary& lb = boundaries.looks[r];
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < arms; ++k) {
          if (!active[k]) continue;
          enroll(lb.n - prev, cells[k], rngs[k], tally[k]);
          enrolled[k] = lb.n;
          idx.push_back(k);
        }
        prev = lb.n;
        if (idx.empty()) break;
        std::vector<double> pe, pt, w;
        for (std::size_t k : idx) {
          pe.push_back((tau_e + tally[k].responses) / (lb.n + tau));
          pt.push_back((tau_t + tally[k].toxicities) / (lb.n + tau));
          w.push_back(lb.n);
        }
        const auto adj_e = pava(pe, w);
        const auto adj_t = pava(pt, w);
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const std::size_t k = idx[j];
          const double xe = to_scale(adj_e[j], pe[j], tally[k].responses, lb.n, tau_e);
          const double xt = to_scale(adj_t[j], pt[j], tally[k].toxicities, lb.n, tau_t);
          if (stops(lb, xe, xt)) {
            active[k] = false;
            if (r + 1 < stages) ++c.early[k];
          }
          final_eff[k] = pe[j];
        }
      }
      std::vector<double> est, wts;
      std::vector<std::size_t> surv;
      for (std::size_t k = 0; k < arms; ++k) {
        c.enrolled[k] += enrolled[k];
        if (!active[k]) continue;
        surv.push_back(k);
        est.push_back(final_eff[k]);
        wts.push_back(enrolled[k]);
      }
      std::optional<std::size_t> pick;
      if (!surv.empty()) {
        const auto adj = pava(est, wts);
        pick = select_optimal_dose(adj, std::vector<bool>(adj.size(), true), dspec.delta);
      }
      if (pick) {
        ++c.selected[surv[*pick]];
      } else {
        ++c.none;
      }
    }
  }, config.workers);

  MultiDoseResult result;
  result.replicates = config.replicates;
  result.seed = config.seed;
  result.boundaries = boundaries;
  const double reps = static_cast<double>(config.replicates);
  std::uint64_t none = 0;
  std::vector<std::uint64_t> selected(arms, 0), early(arms, 0), enrolled(arms, 0);
  for (const auto& c : partial) {
    for (std::size_t k = 0; k < arms; ++k) {
      selected[k] += c.selected[k];
      early[k] += c.early[k];
      enrolled[k] += c.enrolled[k];
    }
    none += c.none;
  }
  for (std::size_t k = 0; k < arms; ++k) {
    ArmSummary s;
    s.label = dspec.arms[k];
    s.truth = truth[k];
    s.selection_pct = 100.0 * selected[k] / reps;
    s.early_stop_pct = 100.0 * early[k] / reps;
    s.average_n = enrolled[k] / reps;
    result.arms.push_back(s);
  }
  result.no_selection_pct = 100.0 * none / reps;
  return result;
}

MultiDoseResult simulate_multidose(const DoseOptimizationSpec& dspec,
                                   const std::vector<OutcomeProbabilities>& truth,
                                   const SimulationConfig& config) {
  const auto design = optimize(dspec.design);
  return simulate_multidose(dspec, design.boundaries, truth, config);
}

}  // namespace bop2te
