#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "bop2te/simulation.hpp"

using namespace bop2te;

namespace {

std::vector<Look> standard_schedule() { return {{9, false, true}, {18, true, true}, {36, true, true}}; }

DesignSpec scenario4() { return make_design(0.6, 0.3, 0.2, 0.4, {}, standard_schedule()); }

StoppingBoundaries scenario4_boundaries() { return make_boundaries(standard_schedule(), {5, 14}, {4, 7, 11}); }

// Least-squares isotonic fit by trying every split into consecutive blocks.
std::vector<double> isotonic_by_enumeration(const std::vector<double>& v, const std::vector<double>& w) {
  const std::size_t k = v.size();
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (unsigned mask = 0; mask < (1u << (k - 1)); ++mask) {
    std::vector<double> fit(k);
    std::size_t start = 0;
    double prev_mean = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (std::size_t i = 0; i < k; ++i) {
      const bool cut = i + 1 == k || (mask >> i & 1u);
      if (!cut) continue;
      double sw = 0, swx = 0;
      for (std::size_t j = start; j <= i; ++j) {
        sw += w[j];
        swx += w[j] * v[j];
      }
      const double m = swx / sw;
      if (m < prev_mean - 1e-15) monotone = false;
      prev_mean = m;
      for (std::size_t j = start; j <= i; ++j) fit[j] = m;
      start = i + 1;
    }
    if (!monotone) continue;
    double sse = 0;
    for (std::size_t i = 0; i < k; ++i) sse += w[i] * (v[i] - fit[i]) * (v[i] - fit[i]);
    if (sse < best_sse - 1e-15) {
      best_sse = sse;
      best = fit;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("PAVA agrees with exhaustive block search") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0), wd(0.5, 40.0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 1 + t % 7;
    std::vector<double> v(k), w(k);
    for (std::size_t i = 0; i < k; ++i) {
      v[i] = u(rng);
      w[i] = wd(rng);
    }
    const auto got = pava(v, w);
    const auto want = isotonic_by_enumeration(v, w);
    REQUIRE(got.size() == k);
    double sw = 0, swv = 0, swf = 0;
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
      if (i) CHECK(got[i] >= got[i - 1] - 1e-15);
      sw += w[i];
      swv += w[i] * v[i];
      swf += w[i] * got[i];
    }
    CHECK(swf == doctest::Approx(swv).epsilon(1e-12));
    // non-increasing fit is the mirror image
    std::vector<double> neg(k);
    for (std::size_t i = 0; i < k; ++i) neg[i] = -v[i];
    const auto down = pava(neg, w, Monotonicity::non_increasing);
    for (std::size_t i = 0; i < k; ++i) CHECK(down[i] == doctest::Approx(-got[i]).epsilon(1e-12));
  }
}

TEST_CASE("PAVA small cases") {
  CHECK(pava({0.1, 0.2, 0.3}, {1, 1, 1}) == std::vector<double>{0.1, 0.2, 0.3});
  const auto f = pava({0.4, 0.2}, {1, 3});
  CHECK(f[0] == doctest::Approx(0.25));
  CHECK(f[1] == doctest::Approx(0.25));
  CHECK(pava({}, {}).empty());
  CHECK_THROWS_AS(pava({0.1, 0.2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(pava({0.1, 0.2}, {1, 0}), std::invalid_argument);
}

TEST_CASE("dose selection rule") {
  // lowest surviving dose with efficacy above delta times the highest surviving
  CHECK(select_optimal_dose({0.3, 0.5, 0.55}, {true, true, true}, 0.8) == std::optional<std::size_t>(1));
  CHECK(select_optimal_dose({0.5, 0.5, 0.55}, {true, true, true}, 0.8) == std::optional<std::size_t>(0));
  CHECK(select_optimal_dose({0.5, 0.5, 0.9}, {true, true, false}, 0.8) == std::optional<std::size_t>(0));
  CHECK(select_optimal_dose({0.2, 0.5}, {true, false}, 0.8) == std::optional<std::size_t>(0));
  CHECK(select_optimal_dose({0.2, 0.5}, {false, false}, 0.8) == std::nullopt);
  CHECK(select_optimal_dose({0.0}, {true}, 0.8) == std::nullopt);
  CHECK_THROWS_AS(select_optimal_dose({0.2}, {true, true}, 0.8), std::invalid_argument);
}

TEST_CASE("random streams are reproducible and distinct") {
  auto a = substream(42, 7, 1), b = substream(42, 7, 1), c = substream(42, 7, 2), d = substream(42, 8, 1);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  auto e = substream(1, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = uniform01(e);
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("cell draws follow the cell probabilities") {
  const CellProbabilities cells{0.1, 0.4, 0.2, 0.3};
  auto rng = substream(9, 0, 0);
  std::array<int, 4> hits{};
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[draw_cell(cells, rng)];
  for (int k = 0; k < 4; ++k) {
    const double se = std::sqrt(cells[k] * (1 - cells[k]) / n);
    CHECK(std::abs(hits[k] / double(n) - cells[k]) < 4.5 * se);
  }
}

TEST_CASE("Monte Carlo OC agrees with the exact values") {
  const auto spec = scenario4();
  const auto b = scenario4_boundaries();
  SimulationConfig cfg;
  cfg.replicates = 40000;
  cfg.seed = 99;
  for (const auto h : kHypotheses) {
    const auto p = hypothesis_point(spec, h, 1.0);
    const auto exact = operating_characteristics(b, p);
    const auto mc = estimate_oc(b, spec, p, cfg);
    CHECK(std::abs(mc.oc.pcp - exact.pcp) <= 4.5 * std::max(mc.pcp_se, 1e-4));
    CHECK(std::abs(mc.oc.pet - exact.pet) <= 4.5 * std::max(mc.pet_se, 1e-4));
    CHECK(std::abs(mc.oc.ess - exact.ess) <= 4.5 * mc.ess_se);
  }
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  const auto spec = scenario4();
  const auto b = scenario4_boundaries();
  const auto p = hypothesis_point(spec, Hypothesis::h01, 1.0);
  SimulationConfig one{5000, 3, 1}, many{5000, 3, 4};
  const auto x = estimate_oc(b, spec, p, one), y = estimate_oc(b, spec, p, many);
  CHECK(x.oc.pcp == y.oc.pcp);
  CHECK(x.oc.pet == y.oc.pet);
  CHECK(x.oc.ess == y.oc.ess);
  SimulationConfig other{5000, 4, 1};
  CHECK(estimate_oc(b, spec, p, other).oc.ess != x.oc.ess);
  SimulationConfig zero{0, 3, 1};
  CHECK_THROWS_AS(estimate_oc(b, spec, p, zero), ValidationError);
}

TEST_CASE("single-arm multi-dose run reduces to the one-arm simulation") {
  const auto spec = scenario4();
  const auto b = scenario4_boundaries();
  const OutcomeProbabilities p = outcome_with_phi(0.45, 0.3, 1.0);
  DoseOptimizationSpec d{{"d1"}, spec, 0.8, IsotonicScale::count};
  SimulationConfig cfg{8000, 123, 0};
  const auto multi = simulate_multidose(d, b, {p}, cfg);
  const auto mc = estimate_oc(b, spec, p, cfg);
  REQUIRE(multi.arms.size() == 1);
  CHECK(multi.arms[0].selection_pct == doctest::Approx(100.0 * mc.oc.pcp).epsilon(1e-12));
  CHECK(multi.arms[0].early_stop_pct == doctest::Approx(100.0 * mc.oc.pet).epsilon(1e-12));
  CHECK(multi.arms[0].average_n == doctest::Approx(mc.oc.ess).epsilon(1e-12));
  CHECK(multi.no_selection_pct == doctest::Approx(100.0 * (1.0 - mc.oc.pcp)).epsilon(1e-9));
}

TEST_CASE("multi-dose bookkeeping") {
  const auto spec = make_design(0.56, 0.24, 0.18, 0.42, {}, {{12, true, true}, {24, true, true}});
  const auto b = make_boundaries(spec.schedule, {2, 8}, {5, 7});
  DoseOptimizationSpec d{{"dL", "dM", "dH"}, spec, 0.8, IsotonicScale::count};
  const std::vector<OutcomeProbabilities> truth{outcome_with_phi(0.3, 0.1, 1.0), outcome_with_phi(0.55, 0.15, 1.0),
                                                outcome_with_phi(0.6, 0.35, 1.0)};
  SimulationConfig cfg{6000, 5, 0};
  const auto r = simulate_multidose(d, b, truth, cfg);
  double total = r.no_selection_pct;
  for (const auto& a : r.arms) {
    total += a.selection_pct;
    CHECK(a.average_n >= 12.0);
    CHECK(a.average_n <= 24.0);
    CHECK(a.early_stop_pct >= 0.0);
  }
  CHECK(total == doctest::Approx(100.0));
  CHECK(r.arms[1].selection_pct > r.arms[0].selection_pct);
  CHECK(r.arms[1].selection_pct > r.arms[2].selection_pct);
  const auto again = simulate_multidose(d, b, truth, SimulationConfig{6000, 5, 1});
  for (std::size_t k = 0; k < 3; ++k) CHECK(again.arms[k].selection_pct == r.arms[k].selection_pct);

  CHECK_THROWS_AS(simulate_multidose(d, b, {truth[0]}, cfg), ValidationError);
  CHECK_THROWS_AS(simulate_multidose(d, b, truth, SimulationConfig{0, 5, 0}), ValidationError);
  d.delta = 0.0;
  CHECK_THROWS_AS(simulate_multidose(d, b, truth, cfg), ValidationError);
  d.delta = 0.8;
  d.arms.clear();
  CHECK_THROWS_AS(simulate_multidose(d, b, {}, cfg), ValidationError);
}

TEST_CASE("a single trial walks the looks") {
  const auto spec = scenario4();
  const auto b = scenario4_boundaries();
  auto rng = substream(1, 0, 0);
  const auto sure = simulate_trial(b, spec, {1.0, 0.0, 0.0}, rng);
  CHECK(sure.claimed);
  CHECK(sure.enrolled == 36);
  CHECK(sure.responses == 36);
  const auto toxic = simulate_trial(b, spec, {1.0, 1.0, 1.0}, rng);
  CHECK_FALSE(toxic.claimed);
  CHECK(toxic.stopped_early);
  CHECK(toxic.stage == 1);
  CHECK(toxic.enrolled == 9);
}
