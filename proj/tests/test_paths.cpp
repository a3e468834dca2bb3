#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polaron/clusters.hpp"
#include "polaron/errors.hpp"
#include "polaron/paths.hpp"

using namespace polaron;

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

std::mt19937_64 rng(777);

double uniform(double lo, double hi) { return lo + (hi - lo) * ((rng() >> 11) * 0x1p-53); }

ConfinedPath frozen_path(int box, double horizon, int steps, const std::array<double, 3>& at) {
  ConfinedPath p;
  p.box_index = box;
  p.horizon = horizon;
  p.positions.assign(steps + 1, at);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("paths");

TEST_CASE("sampled bridges are confined, closed, and deterministic") {
  auto cfg = make_boxes({{0, 0, 0}}, 1.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto p = sample_confined_bridge(cfg, 0, 1.0, 100, seed);
    REQUIRE(p.positions.size() == 101);
    CHECK(p.positions.front() == p.positions.back());
    for (const auto& x : p.positions)
      for (int a = 0; a < 3; ++a) CHECK(std::abs(x[a]) < 0.5);
  }
  auto a = sample_confined_bridge(cfg, 0, 1.0, 100, 42);
  auto b = sample_confined_bridge(cfg, 0, 1.0, 100, 42);
  CHECK(a.positions == b.positions);
  auto c = sample_confined_bridge(cfg, 0, 1.0, 100, 43);
  CHECK(a.positions != c.positions);
}

TEST_CASE("short horizons hug the center") {
  auto cfg = make_boxes({{1, 2, 3}}, 1.0);
  auto p = sample_confined_bridge(cfg, 0, 1e-6, 50, 5);
  for (const auto& x : p.positions)
    for (int a = 0; a < 3; ++a) CHECK(std::abs(x[a] - cfg.centers[0][a]) < 0.01);
}

TEST_CASE("hopeless confinement exhausts the rejection budget") {
  auto cfg = make_boxes({{0, 0, 0}}, 0.02);  // box far below the diffusion scale
  CHECK_THROWS_AS(sample_confined_bridge(cfg, 0, 1.0, 50, 1, 200),
                  RejectionBudgetExceededError);
}

TEST_CASE("distance bounds for static geometry") {
  const double side = 1.0;
  auto cfg = make_boxes({{0, 0, 0}, {4, 0, 0}}, side);
  const double d = box_distance(0, 1, cfg);
  SUBCASE("center-frozen paths sit inside the window") {
    auto pi = frozen_path(0, 1.0, 20, {0, 0, 0});
    auto pj = frozen_path(1, 1.0, 20, {4, 0, 0});
    auto rep = verify_path_distance_bounds(pi, pj, cfg);
    CHECK(rep.pass);
    CHECK(rep.observed_min == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(rep.observed_max == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(rep.lower == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rep.upper == doctest::Approx(3.0 + 2.0 * kSqrt3).epsilon(1e-14));
  }
  SUBCASE("opposite corners of diagonally aligned boxes saturate the upper bound") {
    auto diag = make_boxes({{0, 0, 0}, {4, 4, 4}}, side);
    const double h = side / 2 - 1e-12;
    auto pi = frozen_path(0, 1.0, 20, {-h, -h, -h});
    auto pj = frozen_path(1, 1.0, 20, {4 + h, 4 + h, 4 + h});
    auto rep = verify_path_distance_bounds(pi, pj, diag);
    CHECK(rep.pass);
    CHECK(rep.observed_max <= rep.upper);
    CHECK(rep.observed_max > rep.upper - 1e-9);  // the diameter bound is tight here
  }
  SUBCASE("mismatched sampling grids are rejected") {
    auto pi = frozen_path(0, 1.0, 20, {0, 0, 0});
    auto pj = frozen_path(1, 1.0, 30, {4, 0, 0});
    CHECK_THROWS_AS(verify_path_distance_bounds(pi, pj, cfg), Error);
  }
}

TEST_CASE("distance bounds over sampled disjoint pairs") {
  int checked = 0;
  while (checked < 100) {
    auto cfg = make_boxes({{uniform(-6, 6), uniform(-6, 6), uniform(-6, 6)},
                           {uniform(-6, 6), uniform(-6, 6), uniform(-6, 6)}},
                          1.5);
    if (box_distance(0, 1, cfg) <= 0.0) continue;
    auto pi = sample_confined_bridge(cfg, 0, 1.0, 60, rng());
    auto pj = sample_confined_bridge(cfg, 1, 1.0, 60, rng());
    CHECK(verify_path_distance_bounds(pi, pj, cfg).pass);
    ++checked;
  }
}

TEST_CASE("split inequality for a single cluster is tight") {
  auto cfg = make_boxes({{0, 0, 0}, {1.2, 0, 0}}, 1.0);
  auto part = partition(cfg, 5.0);
  REQUIRE(part.groups.size() == 1);
  std::vector<ConfinedPath> paths{sample_confined_bridge(cfg, 0, 1.0, 40, 1),
                                  sample_confined_bridge(cfg, 1, 1.0, 40, 2)};
  auto rep = integrand_cluster_split_check(paths, part, cfg, 1.0, 3.0);
  CHECK(rep.pass);
  CHECK(std::abs(rep.margin) <= rep.tolerance);  // both sides coincide
  CHECK(rep.lhs == rep.rhs);
}

TEST_CASE("split inequality for frozen far-apart singletons") {
  auto cfg = make_boxes({{0, 0, 0}, {6, 0, 0}}, 1.0);
  auto part = partition(cfg, 2.0);
  REQUIRE(part.groups.size() == 2);
  const int steps = 40;
  std::vector<ConfinedPath> paths{frozen_path(0, 1.0, steps, {0, 0, 0}),
                                  frozen_path(1, 1.0, steps, {6, 0, 0})};
  auto rep = integrand_cluster_split_check(paths, part, cfg, 1.0, 0.0);
  CHECK(rep.pass);
  // the actual separation 6 exceeds the box distance 5, so the bound holds
  // with margin 2 T (1/5 - 1/6) from the two ordered pairs
  CHECK(rep.margin == doctest::Approx(2.0 * (1.0 / 5.0 - 1.0 / 6.0)).epsilon(1e-9));
}

TEST_CASE("split inequality over sampled multi-cluster ensembles") {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    std::vector<std::array<double, 3>> centers;
    for (int i = 0; i < n; ++i)
      centers.push_back({uniform(-9, 9), uniform(-9, 9), uniform(-9, 9)});
    auto cfg = make_boxes(centers, 1.4);
    auto part = partition(cfg, 2.0);
    std::vector<ConfinedPath> paths;
    for (int i = 0; i < n; ++i)
      paths.push_back(sample_confined_bridge(cfg, i, 1.0, 48, rng()));
    auto rep = integrand_cluster_split_check(paths, part, cfg, 1.0, 3.0);
    CHECK(rep.pass);
    CHECK(rep.pairs_checked + rep.pairs_skipped == n * n);
  }
}

TEST_CASE("near-contact pairs are reported and skipped") {
  // two overlapping boxes with coincident frozen paths
  auto cfg = make_boxes({{0, 0, 0}, {0.1, 0, 0}}, 1.0);
  auto part = partition(cfg, 1.0);
  REQUIRE(part.groups.size() == 1);
  std::vector<ConfinedPath> paths{frozen_path(0, 1.0, 20, {0.05, 0, 0}),
                                  frozen_path(1, 1.0, 20, {0.05, 0, 0})};
  auto rep = integrand_cluster_split_check(paths, part, cfg, 1.0, 3.0);
  CHECK(rep.pairs_skipped >= 2);  // the coincident cross pair, both orders
}

TEST_SUITE_END();
