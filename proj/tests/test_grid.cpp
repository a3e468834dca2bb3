#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "polaron/energy.hpp"
#include "polaron/errors.hpp"
#include "polaron/grid.hpp"

using namespace polaron;

namespace {

constexpr double kPi = std::numbers::pi;

RadialWaveFunction default_grid() { return make_radial_grid(500, 0.04, 40.0); }

std::mt19937_64 rng(12345);

double uniform(double lo, double hi) { return lo + (hi - lo) * ((rng() >> 11) * 0x1p-53); }

}  // namespace

TEST_SUITE_BEGIN("grid");

TEST_CASE("normalize is the identity on a unit state") {
  auto g = gaussian_radial(default_grid(), 1.0);
  auto g2 = normalize(g);
  for (int k = 0; k < g.size(); ++k) CHECK(g2.values[k] == doctest::Approx(g.values[k]).epsilon(1e-14));
}

TEST_CASE("normalize removes a scalar factor") {
  auto g = gaussian_radial(default_grid(), 1.0);
  auto doubled = g;
  for (double& v : doubled.values) v *= 2.0;
  auto back = normalize(doubled);
  for (int k = 0; k < g.size(); ++k) CHECK(back.values[k] == doctest::Approx(g.values[k]).epsilon(1e-13));
}

TEST_CASE("normalize of random values has unit norm under reversed summation") {
  auto psi = default_grid();
  for (double& v : psi.values) v = uniform(-1.0, 1.0);
  auto unit = normalize(psi);
  // independent summation order
  double s = 0.0;
  for (int k = unit.size() - 1; k >= 0; --k) s += unit.weights[k] * unit.values[k] * unit.values[k];
  CHECK(std::abs(std::sqrt(s) - 1.0) <= 1e-12);

  auto cart = make_cartesian(10.0, 12, 1);
  for (double& v : cart.values) v = uniform(-1.0, 1.0);
  auto cunit = normalize(cart);
  CHECK(std::abs(norm(cunit) - 1.0) <= 1e-12);
}

TEST_CASE("normalize rejects a zero state") {
  auto psi = default_grid();
  CHECK_THROWS_AS(normalize(psi), ZeroNormError);
}

TEST_CASE("kinetic energy of a gaussian") {
  for (double sigma : {0.7, 1.0, 2.0}) {
    auto g = gaussian_radial(default_grid(), sigma);
    CHECK(kinetic_energy(g) == doctest::Approx(0.75 / (sigma * sigma)).epsilon(1e-3));
  }
}

TEST_CASE("kinetic energy of a constant is zero") {
  auto psi = default_grid();
  for (double& v : psi.values) v = 0.3;
  CHECK(std::abs(kinetic_energy(psi)) <= 1e-12);

  auto cart = make_cartesian(8.0, 16, 1);
  for (double& v : cart.values) v = 0.3;
  CHECK(kinetic_energy(cart) == 0.0);  // periodic wrap, exact
}

TEST_CASE("kinetic energy of the box ground state approaches the confinement constant") {
  // cosine-product state on a cube of the given side, embedded with margin
  // so the wall gradient is resolved
  const double side = 2.5;
  const int n = 48;
  auto psi = make_cartesian(1.5 * side, n, 1);
  auto profile = [&](double x) {
    return std::abs(x) < 0.5 * side ? std::cos(kPi * x / side) : 0.0;
  };
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx)
        psi.values[idx] =
            profile(psi.coordinate(i)) * profile(psi.coordinate(j)) * profile(psi.coordinate(k));
  psi = normalize(psi);
  const double expected = 3.0 * kPi * kPi / (side * side);
  CHECK(kinetic_energy(psi) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("kinetic energy rejects too-coarse grids") {
  CHECK_THROWS_AS(make_cartesian(4.0, 3, 1), GridTooCoarseError);
  CHECK_THROWS_AS(make_radial_grid(3, 0.1, 10.0), GridTooCoarseError);
}

TEST_CASE("density of one and two orbitals") {
  auto g = gaussian_radial(default_grid(), 1.0);
  auto rho1 = density(std::vector<RadialWaveFunction>{g});
  double mass = 0.0;
  for (std::size_t k = 0; k < rho1.values.size(); ++k) {
    CHECK(rho1.values[k] == g.values[k] * g.values[k]);
    mass += rho1.weights[k] * rho1.values[k];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  auto rho2 = density(std::vector<RadialWaveFunction>{g, g});
  for (std::size_t k = 0; k < rho2.values.size(); ++k)
    CHECK(rho2.values[k] == doctest::Approx(2.0 * rho1.values[k]).epsilon(1e-14));
  CHECK(rho2.particle_count == 2.0);
}

TEST_CASE("density of disjointly supported orbitals") {
  const int n = 32;
  auto a = gaussian_cartesian(16.0, n, 0.5, {-4.0, 0.0, 0.0});
  auto b = gaussian_cartesian(16.0, n, 0.5, {4.0, 0.0, 0.0});
  // hard-truncate the tails so the supports are exactly disjoint
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        if (a.coordinate(i) > -1.0) a.values[idx] = 0.0;
        if (a.coordinate(i) < 1.0) b.values[idx] = 0.0;
      }
  a = normalize(a);
  b = normalize(b);
  auto rho = density(std::vector<CartesianWaveFunction>{a, b});
  const double h = rho.extent / rho.points;
  double mass = 0.0;
  for (double v : rho.values) mass += v;
  mass *= h * h * h;
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-10));
  for (std::size_t k = 0; k < rho.values.size(); ++k)
    CHECK(rho.values[k] * 0.0 == 0.0);  // finite
  // supports disjoint: no cell carries both orbitals
  for (std::size_t k = 0; k < rho.values.size(); ++k)
    CHECK(!(a.values[k] != 0.0 && b.values[k] != 0.0));
}

TEST_CASE("density rejects mismatched grids") {
  auto g1 = gaussian_radial(make_radial_grid(200, 0.05, 30.0), 1.0);
  auto g2 = gaussian_radial(make_radial_grid(210, 0.05, 30.0), 1.0);
  CHECK_THROWS_AS(density(std::vector<RadialWaveFunction>{g1, g2}), GridMismatchError);
}

TEST_CASE("coulomb interaction of a zero density vanishes") {
  auto psi = default_grid();
  Density zero;
  zero.kind = GridKind::Radial;
  zero.nodes = psi.nodes;
  zero.weights = psi.weights;
  zero.values.assign(psi.nodes.size(), 0.0);
  zero.particle_count = 0.0;
  CHECK(coulomb_interaction(zero, zero) == 0.0);
}

TEST_CASE("coulomb self-interaction of a gaussian density") {
  for (double sigma : {0.8, 1.0, 1.5}) {
    auto g = gaussian_radial(default_grid(), sigma);
    auto rho = density(std::vector<RadialWaveFunction>{g});
    CHECK(coulomb_interaction(rho, rho) ==
          doctest::Approx(1.0 / (std::sqrt(kPi) * sigma)).epsilon(1e-3));
  }
  // cartesian route
  auto gc = gaussian_cartesian(14.0, 48, 1.0);
  auto rho = density(std::vector<CartesianWaveFunction>{gc});
  CHECK(coulomb_interaction(rho, rho) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(0.01));
}

TEST_CASE("coulomb interaction of two remote bumps behaves like point charges") {
  const int n = 64;
  auto a = gaussian_cartesian(16.0, n, 0.5, {-5.0, 0.0, 0.0});
  auto b = gaussian_cartesian(16.0, n, 0.5, {5.0, 0.0, 0.0});
  auto ra = density(std::vector<CartesianWaveFunction>{a});
  auto rb = density(std::vector<CartesianWaveFunction>{b});
  CHECK(coulomb_interaction(ra, rb) == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("coulomb interaction is bit-symmetric and positive") {
  auto grid = default_grid();
  for (int trial = 0; trial < 20; ++trial) {
    auto p1 = grid, p2 = grid;
    for (double& v : p1.values) v = uniform(0.0, 1.0);
    for (double& v : p2.values) v = uniform(0.0, 1.0);
    p1 = normalize(p1);
    p2 = normalize(p2);
    auto r1 = density(std::vector<RadialWaveFunction>{p1});
    auto r2 = density(std::vector<RadialWaveFunction>{p2});
    CHECK(coulomb_interaction(r1, r2) == coulomb_interaction(r2, r1));
    CHECK(coulomb_interaction(r1, r1) >= 0.0);
  }
  // cartesian: symmetry bit-exact, self-interaction positive up to roundoff
  auto c1 = make_cartesian(10.0, 16, 1);
  auto c2 = make_cartesian(10.0, 16, 1);
  for (int trial = 0; trial < 5; ++trial) {
    for (double& v : c1.values) v = uniform(0.0, 1.0);
    for (double& v : c2.values) v = uniform(0.0, 1.0);
    auto n1 = normalize(c1);
    auto n2 = normalize(c2);
    auto r1 = density(std::vector<CartesianWaveFunction>{n1});
    auto r2 = density(std::vector<CartesianWaveFunction>{n2});
    CHECK(coulomb_interaction(r1, r2) == coulomb_interaction(r2, r1));
    CHECK(coulomb_interaction(r1, r1) >= -1e-12);
  }
}

TEST_CASE("coulomb interaction rejects mismatched grids") {
  auto g1 = gaussian_radial(make_radial_grid(200, 0.05, 30.0), 1.0);
  auto g2 = gaussian_radial(make_radial_grid(210, 0.05, 30.0), 1.0);
  auto r1 = density(std::vector<RadialWaveFunction>{g1});
  auto r2 = density(std::vector<RadialWaveFunction>{g2});
  CHECK_THROWS_AS(coulomb_interaction(r1, r2), GridMismatchError);
}

TEST_CASE("pt energy of gaussian trial states") {
  auto g = gaussian_radial(default_grid(), 1.0);
  const double expected = 0.75 - 1.0 / std::sqrt(kPi);
  CHECK(pt_energy(std::vector<RadialWaveFunction>{g}, 1.0, 0.0) ==
        doctest::Approx(expected).epsilon(2e-3));
  // couplings off: kinetic only
  CHECK(pt_energy(std::vector<RadialWaveFunction>{g}, 0.0, 0.0) ==
        doctest::Approx(kinetic_energy(g)).epsilon(1e-14));
  // the optimal gaussian width reaches -alpha^2/(3 pi)
  auto gopt = gaussian_radial(default_grid(), 1.5 * std::sqrt(kPi));
  CHECK(pt_energy(std::vector<RadialWaveFunction>{gopt}, 1.0, 0.0) ==
        doctest::Approx(-1.0 / (3.0 * kPi)).epsilon(1e-3));
}

TEST_CASE("scaling a wavefunction") {
  auto g = gaussian_radial(default_grid(), 1.0);
  SUBCASE("unit factor is the identity") {
    auto s = scale_wavefunction(g, 1.0);
    CHECK(s.values == g.values);
    CHECK(s.nodes == g.nodes);
  }
  SUBCASE("gaussians stay gaussian with halved width") {
    auto s = scale_wavefunction(g, 2.0);
    // s should equal the sigma = 1/2 gaussian sampled on the scaled grid
    auto narrow = gaussian_radial(make_radial(s.nodes, std::vector<double>(s.nodes.size(), 0.0)),
                                  0.5);
    for (std::size_t k = 0; k < s.nodes.size(); ++k)
      CHECK(s.values[k] == doctest::Approx(narrow.values[k]).epsilon(1e-10));
  }
  SUBCASE("nonpositive factors are rejected") {
    CHECK_THROWS_AS(scale_wavefunction(g, 0.0), InvalidScaleError);
    CHECK_THROWS_AS(scale_wavefunction(g, -2.0), InvalidScaleError);
  }
}

TEST_CASE("coupling rescale identity on analytic trial states") {
  auto g = gaussian_radial(default_grid(), 1.3);
  const double nu = 1.7;  // U = nu * alpha
  const double base = pt_energy(std::vector<RadialWaveFunction>{g}, 1.0, 0.0);
  for (double alpha : {0.5, 2.0, 10.0}) {
    auto scaled = scale_wavefunction(g, alpha);
    const double lhs = pt_energy(std::vector<RadialWaveFunction>{scaled}, alpha, nu * alpha);
    const double rhs = alpha * alpha * base;  // N = 1: repulsion term empty
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) <= 1e-8);
  }
  // two-orbital product state exercises the repulsion term as well
  auto g2 = gaussian_radial(default_grid(), 0.9);
  const double base2 = pt_energy(std::vector<RadialWaveFunction>{g, g2}, 1.0, nu);
  for (double alpha : {0.5, 2.0, 10.0}) {
    std::vector<RadialWaveFunction> pair{scale_wavefunction(g, alpha),
                                         scale_wavefunction(g2, alpha)};
    const double lhs = pt_energy(pair, alpha, nu * alpha);
    CHECK(std::abs(lhs - alpha * alpha * base2) / std::abs(lhs) <= 1e-8);
  }
}

TEST_CASE("radial and cartesian discretizations agree on a gaussian") {
  auto gr = gaussian_radial(default_grid(), 1.0);
  const double e_radial = pt_energy(std::vector<RadialWaveFunction>{gr}, 1.0, 0.0);
  auto gc = gaussian_cartesian(12.0, 80, 1.0);
  const double e_cartesian = pt_energy(std::vector<CartesianWaveFunction>{gc}, 1.0, 0.0);
  CHECK(std::abs(e_cartesian - e_radial) / std::abs(e_radial) <= 0.01);
}

TEST_CASE("two-particle grid evaluates products like the orbital path") {
  const int n = 10;
  const double extent = 12.0;
  auto phi = gaussian_cartesian(extent, n, 1.2);
  auto pair = make_cartesian(extent, n, 2);
  const std::size_t n3 = phi.values.size();
  for (std::size_t i = 0; i < n3; ++i)
    for (std::size_t j = 0; j < n3; ++j)
      pair.values[i * n3 + j] = phi.values[i] * phi.values[j];

  const double nu = 2.3;
  const double via_orbitals = pt_energy(std::vector<CartesianWaveFunction>{phi, phi}, 1.0, nu);
  const double via_grid = pt_energy(pair, 1.0, nu);
  CHECK(via_grid == doctest::Approx(via_orbitals).epsilon(1e-9));

  auto rho = density(pair);
  CHECK(rho.particle_count == 2.0);
  auto rho_orb = density(std::vector<CartesianWaveFunction>{phi, phi});
  for (std::size_t k = 0; k < rho.values.size(); ++k)
    CHECK(rho.values[k] == doctest::Approx(rho_orb.values[k]).epsilon(1e-10));
}

TEST_SUITE_END();
