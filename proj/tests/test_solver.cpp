#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "polaron/energy.hpp"
#include "polaron/errors.hpp"
#include "polaron/solver.hpp"

using namespace polaron;

namespace {

constexpr double kPi = std::numbers::pi;

// one shared cache: the solves are deterministic and reused across cases
PtValueCache& shared_cache() {
  static PtValueCache cache;
  return cache;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("pekar minimum at unit coupling") {
  auto solve = minimize_pekar(1.0);
  CHECK(solve.estimate.converged);
  CHECK(solve.estimate.kind == EstimateKind::UpperVariational);
  // beats the best gaussian
  CHECK(solve.estimate.value <= -1.0 / (3.0 * kPi));
  CHECK(solve.estimate.value > -0.1095);
  CHECK(solve.estimate.value < -0.1061);
  // dense uniform-grid relaxation as an independent discretization
  const double reference = oracle::dense_uniform_pekar_energy();
  CHECK(std::abs(solve.estimate.value - reference) <= 1e-3);
  // the minimizer itself reproduces the reported energy through the public
  // quadrature
  CHECK(pt_energy(std::vector<RadialWaveFunction>{solve.orbital}, 1.0, 0.0) ==
        doctest::Approx(solve.estimate.value).epsilon(1e-12));
}

TEST_CASE("recorded descent is nonincreasing") {
  auto solve = minimize_pekar(1.0);
  for (std::size_t k = 1; k < solve.energy_trace.size(); ++k)
    CHECK(solve.energy_trace[k] <=
          solve.energy_trace[k - 1] + 1e-12 * std::abs(solve.energy_trace[k - 1]));
}

TEST_CASE("coupling rescale of the pekar solve is exact") {
  auto e1 = minimize_pekar(1.0).estimate.value;
  auto e2 = minimize_pekar(2.0).estimate.value;
  CHECK(std::abs(e2 - 4.0 * e1) / std::abs(e2) <= 1e-4);
}

TEST_CASE("seeded initial-guess perturbation leaves the minimum unchanged") {
  SolverConfig seeded;
  seeded.seed = 99;
  auto a = minimize_pekar(1.0);
  auto b = minimize_pekar(1.0, seeded);
  CHECK(std::abs(a.estimate.value - b.estimate.value) <= 1e-7);
}

TEST_CASE("hartree with one particle reduces to the pekar solve") {
  auto pekar = minimize_pekar(1.0);
  auto hartree = minimize_hartree(1, 5.0);  // nu is irrelevant at N = 1
  CHECK(hartree.estimate.value == doctest::Approx(pekar.estimate.value).epsilon(1e-12));
  CHECK(hartree.cluster_sizes == std::vector<int>{1});
}

TEST_CASE("hartree pair estimates against the closed-form product model") {
  // identical orbitals reduce to a rescaled single-particle problem with
  // coupling (4 - nu)/2; separated clusters give twice the single energy
  const double e1 = shared_cache().estimate(1, 0.0).value;
  for (double nu : {0.0, 1.0, 2.0}) {
    const double scale = (4.0 - nu) / 2.0;
    const double expect = 2.0 * e1 * scale * scale;
    CHECK(shared_cache().estimate(2, nu).value == doctest::Approx(expect).epsilon(5e-3));
  }
  for (double nu : {4.0, 8.0}) {
    CHECK(shared_cache().estimate(2, nu).value ==
          doctest::Approx(2.0 * e1).epsilon(1e-10));
  }
}

TEST_CASE("hartree estimates are subadditive and monotone in the repulsion") {
  const double e1 = shared_cache().estimate(1, 0.0).value;
  double prev = -1e300;
  for (double nu : {0.0, 0.5, 2.0, 10.0}) {
    const double e2 = shared_cache().estimate(2, nu).value;
    CHECK(e2 <= 2.0 * e1 + 2e-9);
    CHECK(e2 >= prev - 1e-12);
    prev = e2;
  }
}

TEST_CASE("hartree estimates are concave in the repulsion ratio") {
  const std::vector<double> nus{0.0, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> e;
  for (double nu : nus) e.push_back(shared_cache().estimate(2, nu).value);
  for (std::size_t i = 0; i + 2 < nus.size(); ++i) {
    const double t = (nus[i + 1] - nus[i]) / (nus[i + 2] - nus[i]);
    const double chord = (1.0 - t) * e[i] + t * e[i + 2];
    CHECK(e[i + 1] >= chord - 2e-9);
  }
}

TEST_CASE("three-particle estimate prefers dissociation at strong repulsion") {
  auto strong = minimize_hartree(3, 8.0);
  CHECK(strong.cluster_sizes.size() == 3);
  const double e1 = shared_cache().estimate(1, 0.0).value;
  CHECK(strong.estimate.value == doctest::Approx(3.0 * e1).epsilon(1e-9));
  auto weak = minimize_hartree(3, 0.0);
  CHECK(weak.cluster_sizes == std::vector<int>{3});
  CHECK(weak.estimate.value < 3.0 * e1);
}

TEST_CASE("coupling rescale helper propagates kind and value") {
  auto provider = shared_cache().provider();
  auto unit = provider(1, 0.0);
  auto scaled = pt_energy_scaled(0.0, 1.0, 1, provider);
  CHECK(scaled.value == unit.value);
  auto big = pt_energy_scaled(0.0, 10.0, 1, provider);
  CHECK(big.value == doctest::Approx(100.0 * unit.value).epsilon(1e-14));
  CHECK(big.kind == EstimateKind::UpperVariational);
  CHECK(big.alpha == 10.0);
}

TEST_CASE("binding check behaviour") {
  auto provider = shared_cache().provider();
  SUBCASE("attractive regime suggests binding") {
    auto report = binding_check(2, 0.0, 1, provider);
    CHECK(report.margin >= -1e-9);
    CHECK(report.strictly_bound);
    CHECK(!report.caveat.empty());
  }
  SUBCASE("strong repulsion yields a vanishing margin") {
    auto report = binding_check(2, 20.0, 1, provider);
    CHECK(std::abs(report.margin) <= 1e-9);
    CHECK(!report.strictly_bound);
  }
  SUBCASE("invalid split sizes are rejected") {
    CHECK_THROWS_AS(binding_check(1, 0.0, 1, provider), InvalidKError);
    CHECK_THROWS_AS(binding_check(3, 0.0, 3, provider), InvalidKError);
    CHECK_THROWS_AS(binding_check(3, 0.0, 0, provider), InvalidKError);
  }
  SUBCASE("provider failures surface as such") {
    PtProvider broken = [](int, double) -> EnergyEstimate {
      throw Error("backend offline");
    };
    CHECK_THROWS_AS(binding_check(2, 0.0, 1, broken), ProviderFailureError);
  }
}

TEST_CASE("cache returns identical estimates for repeated queries") {
  auto a = shared_cache().estimate(2, 1.0);
  auto b = shared_cache().estimate(2, 1.0);
  CHECK(a.value == b.value);
  CHECK(a.grid_hash == b.grid_hash);
}

TEST_CASE("cartesian minimizer is insensitive to a one-cell shift of the guess") {
  CartesianSolverConfig cfg;
  cfg.extent = 16.0;
  cfg.points = 32;
  cfg.max_iterations = 400;
  cfg.tolerance = 1e-7;
  auto centered = minimize_pekar_cartesian(1.0, cfg);
  cfg.guess_center = {cfg.extent / cfg.points, 0.0, 0.0};
  auto shifted = minimize_pekar_cartesian(1.0, cfg);
  CHECK(std::abs(shifted.estimate.value - centered.estimate.value) /
            std::abs(centered.estimate.value) <
        0.01);
  // and it lands in the right energy range despite the finite box
  CHECK(centered.estimate.value < -0.09);
  CHECK(centered.estimate.value > -0.12);
}

TEST_SUITE_END();
