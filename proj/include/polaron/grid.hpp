#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace polaron {

// Spherically symmetric single-particle state on a strictly increasing
// radial grid with nodes[0] > 0.  `weights` is a volume quadrature:
//     sum_k weights[k] * f(nodes[k])  ~  integral f(|x|) d^3x.
struct RadialWaveFunction {
  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Uniform cell-centered grid on [-extent/2, extent/2)^3 per particle.
// One particle stores points^3 values, two particles points^6 (coarse,
// points <= 16; used only as a cross-check for product-state results).
struct CartesianWaveFunction {
  double extent = 0.0;
  int points = 0;
  int particles = 1;
  std::vector<double> values;

  double spacing() const { return extent / points; }
  double coordinate(int i) const { return -0.5 * extent + (i + 0.5) * spacing(); }
  int size() const { return static_cast<int>(values.size()); }
};

enum class GridKind { Radial, Cartesian };

// Nonnegative single-particle density; integrates to particle_count.
struct Density {
  GridKind kind = GridKind::Radial;
  std::vector<double> values;
  double particle_count = 0.0;

  // radial descriptor
  std::vector<double> nodes;
  std::vector<double> weights;

  // cartesian descriptor
  double extent = 0.0;
  int points = 0;
};

// Trapezoidal segment lengths for strictly increasing radii; the innermost
// segment is extended to r = 0 with an r^2-weighted core correction.
std::vector<double> radial_segments(const std::vector<double>& nodes);

// Log-spaced radial grid covering [r_min, r_max], zero-valued amplitudes.
RadialWaveFunction make_radial_grid(int n, double r_min, double r_max);

// Radial grid from explicit nodes; trapezoidal volume weights are derived.
RadialWaveFunction make_radial(std::vector<double> nodes, std::vector<double> values);

CartesianWaveFunction make_cartesian(double extent, int points, int particles = 1);

// exp(-|x - center|^2 / (4 sigma^2)), normalized on the grid.
RadialWaveFunction gaussian_radial(const RadialWaveFunction& grid_like, double sigma);
CartesianWaveFunction gaussian_cartesian(double extent, int points, double sigma,
                                         const std::array<double, 3>& center = {0.0, 0.0, 0.0});

double norm(const RadialWaveFunction& psi);
double norm(const CartesianWaveFunction& psi);

RadialWaveFunction normalize(const RadialWaveFunction& psi);
CartesianWaveFunction normalize(const CartesianWaveFunction& psi);

// rho = sum_i |phi_i|^2 for normalized orbitals on one shared grid.
Density density(const std::vector<RadialWaveFunction>& orbitals);
Density density(const std::vector<CartesianWaveFunction>& orbitals);
// Marginal density of a two-particle state (both slots summed).
Density density(const CartesianWaveFunction& pair_state);

bool same_grid(const RadialWaveFunction& a, const RadialWaveFunction& b);
bool same_grid(const CartesianWaveFunction& a, const CartesianWaveFunction& b);
bool same_grid(const Density& a, const Density& b);

std::uint64_t grid_hash(const RadialWaveFunction& psi);
std::uint64_t grid_hash(const CartesianWaveFunction& psi);

}  // namespace polaron
