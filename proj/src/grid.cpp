#include "polaron/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> volume_weights(const std::vector<double>& r) {
  auto w = radial_segments(r);
  for (std::size_t k = 0; k < r.size(); ++k) w[k] *= 4.0 * kPi * r[k] * r[k];
  return w;
}

void check_radial_nodes(const std::vector<double>& r) {
  if (r.size() < 4) throw GridTooCoarseError("radial grid needs at least 4 nodes");
  if (r.front() <= 0.0) throw Error("radial nodes must be positive");
  for (std::size_t k = 1; k < r.size(); ++k)
    if (r[k] <= r[k - 1]) throw Error("radial nodes must be strictly increasing");
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 14695981039346656037ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

// The same segments serve both the psi-measure (times 4 pi r^2) and the
// (r psi)-measure, so solver and quadrature norms agree.
std::vector<double> radial_segments(const std::vector<double>& r) {
  const int n = static_cast<int>(r.size());
  std::vector<double> delta(n);
  delta[0] = 0.5 * (r[1] - r[0]) + r[0] / 3.0;
  for (int k = 1; k + 1 < n; ++k) delta[k] = 0.5 * (r[k + 1] - r[k - 1]);
  delta[n - 1] = 0.5 * (r[n - 1] - r[n - 2]);
  return delta;
}

RadialWaveFunction make_radial_grid(int n, double r_min, double r_max) {
  if (n < 4) throw GridTooCoarseError("radial grid needs at least 4 nodes");
  if (!(r_min > 0.0) || !(r_max > r_min)) throw Error("need 0 < r_min < r_max");
  std::vector<double> r(n);
  const double ratio = std::log(r_max / r_min) / (n - 1);
  for (int k = 0; k < n; ++k) r[k] = r_min * std::exp(ratio * k);
  r[n - 1] = r_max;
  RadialWaveFunction psi;
  psi.weights = volume_weights(r);
  psi.nodes = std::move(r);
  psi.values.assign(n, 0.0);
  return psi;
}

RadialWaveFunction make_radial(std::vector<double> nodes, std::vector<double> values) {
  check_radial_nodes(nodes);
  if (nodes.size() != values.size()) throw Error("nodes/values size mismatch");
  RadialWaveFunction psi;
  psi.weights = volume_weights(nodes);
  psi.nodes = std::move(nodes);
  psi.values = std::move(values);
  return psi;
}

CartesianWaveFunction make_cartesian(double extent, int points, int particles) {
  if (points < 4) throw GridTooCoarseError("cartesian grid needs at least 4 points per axis");
  if (!(extent > 0.0)) throw Error("extent must be positive");
  if (particles != 1 && particles != 2) throw Error("1 or 2 particles supported");
  if (particles == 2 && points > 16)
    throw Error("two-particle grids are limited to 16 points per axis");
  CartesianWaveFunction psi;
  psi.extent = extent;
  psi.points = points;
  psi.particles = particles;
  std::size_t total = 1;
  for (int a = 0; a < 3 * particles; ++a) total *= static_cast<std::size_t>(points);
  psi.values.assign(total, 0.0);
  return psi;
}

RadialWaveFunction gaussian_radial(const RadialWaveFunction& grid_like, double sigma) {
  RadialWaveFunction psi = grid_like;
  for (int k = 0; k < psi.size(); ++k)
    psi.values[k] = std::exp(-psi.nodes[k] * psi.nodes[k] / (4.0 * sigma * sigma));
  return normalize(psi);
}

CartesianWaveFunction gaussian_cartesian(double extent, int points, double sigma,
                                         const std::array<double, 3>& center) {
  CartesianWaveFunction psi = make_cartesian(extent, points, 1);
  const int n = points;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        const double dx = psi.coordinate(i) - center[0];
        const double dy = psi.coordinate(j) - center[1];
        const double dz = psi.coordinate(k) - center[2];
        psi.values[idx] = std::exp(-(dx * dx + dy * dy + dz * dz) / (4.0 * sigma * sigma));
      }
  return normalize(psi);
}

double norm(const RadialWaveFunction& psi) {
  double s = 0.0;
  for (int k = 0; k < psi.size(); ++k) s += psi.weights[k] * psi.values[k] * psi.values[k];
  return std::sqrt(s);
}

double norm(const CartesianWaveFunction& psi) {
  double s = 0.0;
  for (double v : psi.values) s += v * v;
  const double h = psi.spacing();
  double cell = 1.0;
  for (int a = 0; a < 3 * psi.particles; ++a) cell *= h;
  return std::sqrt(s * cell);
}

namespace {

template <class Wf>
Wf normalize_impl(const Wf& psi) {
  const double nrm = norm(psi);
  if (nrm <= std::numeric_limits<double>::epsilon() * static_cast<double>(psi.values.size()))
    throw ZeroNormError("cannot normalize a (numerically) zero wave function");
  Wf out = psi;
  for (double& v : out.values) v /= nrm;
  return out;
}

}  // namespace

RadialWaveFunction normalize(const RadialWaveFunction& psi) { return normalize_impl(psi); }
CartesianWaveFunction normalize(const CartesianWaveFunction& psi) { return normalize_impl(psi); }

bool same_grid(const RadialWaveFunction& a, const RadialWaveFunction& b) {
  return a.nodes == b.nodes;
}

bool same_grid(const CartesianWaveFunction& a, const CartesianWaveFunction& b) {
  return a.extent == b.extent && a.points == b.points && a.particles == b.particles;
}

bool same_grid(const Density& a, const Density& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == GridKind::Radial) return a.nodes == b.nodes;
  return a.extent == b.extent && a.points == b.points;
}

namespace {

void check_density_mass(Density& rho, double expected) {
  double mass = 0.0;
  if (rho.kind == GridKind::Radial) {
    for (std::size_t k = 0; k < rho.values.size(); ++k) mass += rho.weights[k] * rho.values[k];
  } else {
    const double h = rho.extent / rho.points;
    for (double v : rho.values) mass += v;
    mass *= h * h * h;
  }
  if (std::abs(mass - expected) > 1e-8 * std::max(1.0, expected))
    throw Error("density mass deviates from particle count");
  rho.particle_count = expected;
}

}  // namespace

Density density(const std::vector<RadialWaveFunction>& orbitals) {
  if (orbitals.empty()) throw Error("density of zero orbitals");
  for (const auto& phi : orbitals)
    if (!same_grid(phi, orbitals.front())) throw GridMismatchError("orbitals on different grids");
  Density rho;
  rho.kind = GridKind::Radial;
  rho.nodes = orbitals.front().nodes;
  rho.weights = orbitals.front().weights;
  rho.values.assign(rho.nodes.size(), 0.0);
  for (const auto& phi : orbitals)
    for (std::size_t k = 0; k < rho.values.size(); ++k)
      rho.values[k] += phi.values[k] * phi.values[k];
  check_density_mass(rho, static_cast<double>(orbitals.size()));
  return rho;
}

Density density(const std::vector<CartesianWaveFunction>& orbitals) {
  if (orbitals.empty()) throw Error("density of zero orbitals");
  for (const auto& phi : orbitals) {
    if (phi.particles != 1) throw Error("orbital densities need one-particle states");
    if (!same_grid(phi, orbitals.front())) throw GridMismatchError("orbitals on different grids");
  }
  Density rho;
  rho.kind = GridKind::Cartesian;
  rho.extent = orbitals.front().extent;
  rho.points = orbitals.front().points;
  rho.values.assign(orbitals.front().values.size(), 0.0);
  for (const auto& phi : orbitals)
    for (std::size_t k = 0; k < rho.values.size(); ++k)
      rho.values[k] += phi.values[k] * phi.values[k];
  check_density_mass(rho, static_cast<double>(orbitals.size()));
  return rho;
}

Density density(const CartesianWaveFunction& pair_state) {
  if (pair_state.particles != 2) throw Error("expected a two-particle state");
  const int n = pair_state.points;
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  const double h = pair_state.spacing();
  const double cell = h * h * h;
  Density rho;
  rho.kind = GridKind::Cartesian;
  rho.extent = pair_state.extent;
  rho.points = n;
  rho.values.assign(n3, 0.0);
  for (std::size_t i = 0; i < n3; ++i) {
    const double* row = pair_state.values.data() + i * n3;
    double s = 0.0;
    for (std::size_t j = 0; j < n3; ++j) {
      const double v2 = row[j] * row[j];
      s += v2;
      rho.values[j] += v2;  // second-slot marginal accumulates across rows
    }
    rho.values[i] += s;  // first-slot marginal
  }
  for (double& v : rho.values) v *= cell;
  check_density_mass(rho, 2.0);
  return rho;
}

std::uint64_t grid_hash(const RadialWaveFunction& psi) {
  return fnv1a(psi.nodes.data(), psi.nodes.size() * sizeof(double));
}

std::uint64_t grid_hash(const CartesianWaveFunction& psi) {
  std::uint64_t h = fnv1a(&psi.extent, sizeof(double));
  h = fnv1a(&psi.points, sizeof(int), h);
  return fnv1a(&psi.particles, sizeof(int), h);
}

}  // namespace polaron
