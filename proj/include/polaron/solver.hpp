#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "polaron/grid.hpp"

namespace polaron {

struct SolverConfig {
  int max_iterations = 20000;
  double step = 0.0;          // imaginary-time increment; 0 -> 1e-3 * r_max^2
  double tolerance = 1e-9;    // relative energy change between accepted steps
  std::uint64_t seed = 0;     // initial-guess perturbation
  int radial_points = 500;
  double r_max = 40.0;        // at alpha = 1; rescaled solutions shrink as 1/alpha
  double r_min_fraction = 1e-3;
};

enum class EstimateKind { UpperVariational, LowerCertificate, ReferenceOracle };

std::string to_string(EstimateKind kind);

struct EnergyEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::UpperVariational;
  int n_particles = 0;
  double nu = 0.0;
  double alpha = 1.0;
  std::string note;
  int iterations = 0;
  bool converged = true;
  std::uint64_t grid_hash = 0;
};

struct PekarSolve {
  EnergyEstimate estimate;
  RadialWaveFunction orbital;
  std::vector<double> energy_trace;  // accepted steps only, nonincreasing
};

// Ground state of the single-particle functional |grad psi|^2 - alpha D(|psi|^2,|psi|^2)
// by normalized imaginary-time descent on a log radial grid.  Internally
// solved at alpha = 1 and rescaled exactly.
PekarSolve minimize_pekar(double alpha, const SolverConfig& config = {});

struct HartreeSolve {
  EnergyEstimate estimate;
  std::vector<RadialWaveFunction> orbitals;
  std::vector<std::array<double, 3>> centers;  // orbital centers (separated clusters)
  std::vector<int> cluster_sizes;              // best grouping found
  std::vector<double> energy_trace;
};

// Product-state upper bound for N particles with repulsion ratio nu = U/alpha,
// solved at alpha = 1.  Self-consistent co-centered orbital relaxation is
// combined with separated-cluster candidates whose cross terms are evaluated
// in closed form; the best candidate is reported.
HartreeSolve minimize_hartree(int n_particles, double nu, const SolverConfig& config = {});

struct CartesianSolverConfig {
  double extent = 18.0;
  int points = 36;
  int max_iterations = 1500;
  double step = 0.0;  // 0 -> 5e-3 * extent^2
  double tolerance = 3e-8;
  std::array<double, 3> guess_center{0.0, 0.0, 0.0};
};

struct CartesianPekarSolve {
  EnergyEstimate estimate;
  CartesianWaveFunction orbital;
  std::vector<double> energy_trace;
};

// Cartesian-grid counterpart of minimize_pekar (spectral semi-implicit
// descent); used as an independent discretization cross-check.
CartesianPekarSolve minimize_pekar_cartesian(double alpha,
                                             const CartesianSolverConfig& config = {});

using PtProvider = std::function<EnergyEstimate(int n_particles, double nu)>;

// alpha^2 * provider(N, nu), kind and provenance propagated.
EnergyEstimate pt_energy_scaled(double nu, double alpha, int n_particles,
                                const PtProvider& provider);

struct BindingReport {
  EnergyEstimate whole;       // N particles
  EnergyEstimate left;        // k particles
  EnergyEstimate right;       // N - k particles
  double margin = 0.0;        // left + right - whole; > 0 suggests binding
  bool strictly_bound = false;
  std::string caveat;
};

BindingReport binding_check(int n_particles, double nu, int k, const PtProvider& provider);

// Append-only cache of product-state estimates keyed by (N, nu, grid hash).
class PtValueCache {
 public:
  explicit PtValueCache(SolverConfig config = {}) : config_(config) {}

  EnergyEstimate estimate(int n_particles, double nu);
  PtProvider provider();

 private:
  SolverConfig config_;
  std::map<std::tuple<int, std::uint64_t, std::uint64_t>, EnergyEstimate> cache_;
  std::mutex mutex_;
};

}  // namespace polaron
