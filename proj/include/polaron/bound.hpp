#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polaron/clusters.hpp"
#include "polaron/solver.hpp"

namespace polaron {

enum class Regime { Strong, General };

std::string to_string(Regime regime);

struct BoundConstants {
  double c1 = 1.0;  // momentum cutoff coefficient
  double c2 = 1.0;  // box side coefficient
  double c3 = 1.0;  // momentum block side coefficient
  double c4 = 1.0;  // number-operator margin coefficient
  double c5 = 1.0;  // separation/box ratio (general regime only)
  double epsilon = 0.0;  // optional extra floor alpha > epsilon * N^4 (strong) / epsilon (general)
};

// Parameter schedule for the lower-bound certificate.  Per-cluster-size maps
// follow fixed power laws in alpha and the cluster size.
struct BoundParameters {
  Regime regime = Regime::Strong;
  double alpha = 0.0;
  double nu = 0.0;
  int n_total = 0;
  double box_side = 0.0;   // R
  double separation = 0.0; // d
  BoundConstants constants;
  double admissibility_threshold = 0.0;  // schedule requires alpha > this

  double cutoff(int size) const;      // momentum cutoff K(size)
  double block_side(int size) const;  // momentum block side P(size)
  double delta(int size) const;       // number-operator margin delta(size)
  double reduced_nu(int size) const;  // nu (1 - 2 delta)

  bool cutoff_ok(int size) const;  // 8 alpha size < pi K
  bool delta_ok(int size) const;   // 2 delta < 1
};

// K = k^{1/5} a^{6/5} c1, R = c2 a^{-9/10} N^{-2/5}, P = c3 a^{3/5} k^{-2/5},
// delta = c4 a^{-1/5} k^{4/5}, d = 4 sqrt(3) R / (nu - 2); requires nu > 2 and
// alpha > N^4 max{(2 nu c4/(nu-2))^5, (8/(pi c1))^5}.
BoundParameters schedule_strong(double nu, double alpha, int n_total,
                                const BoundConstants& constants = {});

// K = k a^{27/23} c1, R = c2 a^{-19/23} / N, d = c5 R, P = c3 a^{13/23},
// delta = c4 a^{-4/23}; requires alpha > max{(2 c4)^{23/4}, (8/(pi c1))^{23/4}}.
BoundParameters schedule_general(double nu, double alpha, int n_total,
                                 const BoundConstants& constants = {});

// Kinetic cost of confining N particles to boxes of side R: 3 N pi^2 / R^2.
double ims_penalty(int n_particles, double box_side);

// Smallest separation at which the pairwise inter-cluster error vanishes:
// 4 sqrt(3) R / (nu - 2); defined for nu > 2.
double zero_correction_threshold(double nu, double box_side);

// Pairwise inter-cluster energy error.  `exact_pair_sum` follows the ordered
// double sum over cluster pairs, alpha/d(i,j) - U/(2 d(i,j) + 4 sqrt(3) R)
// with U = nu * alpha; `crude` is the uniform bound alpha N^2 / d.
struct InterclusterCorrection {
  double exact_pair_sum = 0.0;
  double crude = 0.0;
};
InterclusterCorrection intercluster_correction(const ClusterPartition& partition,
                                               const BoxConfiguration& config, double alpha,
                                               double nu);

// Value of the pairwise term at gap g (for threshold and sign checks).
double intercluster_pair_term(double gap, double alpha, double nu, double box_side);

// Concavity chord: a lower bound for the energy at nu_tilde in [0, nu] from
// the values at 0 and nu.
double chord_lower_bound(double e_nu, double e_zero, double nu, double nu_tilde);

// Per-cluster lower bound: the PT term with its multiplicative cutoff and
// margin factors, minus the locality and mode-count errors and 1/2.
struct ClusterBound {
  int size = 0;
  double pt_value = 0.0;         // PT energy input at the reduced repulsion ratio
  double denominator = 0.0;      // (1-2 delta)^2 (1 - 8 alpha k / (pi K))
  double pt_term = 0.0;          // alpha^2 pt_value / denominator
  double locality_term = 0.0;    // 9 alpha (R+d)^2 k^4 P^2 K / (pi delta)
  double mode_count_term = 0.0;  // (2K/P + 1)^3
  double value = 0.0;            // pt_term - locality - modes - 1/2
  bool hypothesis_ok = true;
};
ClusterBound cluster_energy_bound(int size, const BoundParameters& params, double pt_value);

// min over  partitions N = sum N_i  of  sum per_size(N_i), via the dynamic
// program g(n) = min_k v(k) + g(n-k); ties keep the smallest first part.
struct PartitionOptimum {
  double value = 0.0;
  std::vector<int> parts;  // sorted ascending
};
PartitionOptimum optimal_partition(int n_total, const std::function<double(int)>& per_size);

struct BoundCertificate {
  Regime regime = Regime::Strong;
  int n_particles = 0;
  double nu = 0.0;
  double alpha = 0.0;
  BoundConstants constants;
  BoundParameters parameters;

  std::vector<int> witness_partition;
  std::vector<ClusterBound> per_size;  // sizes 1..N

  // additive breakdown over the witness partition; value = their sum
  double pt_term = 0.0;
  double locality_term = 0.0;      // negative contribution stored signed
  double mode_count_term = 0.0;    // signed
  double half_constant = 0.0;      // signed, -(number of clusters)/2
  double ims_term = 0.0;           // signed, -3 N pi^2 / R^2
  double intercluster_term = 0.0;  // signed, general regime only
  double value = 0.0;

  // part of the error budget that follows the regime's exact power law in
  // alpha (locality + ims in the strong regime, locality + crude
  // inter-cluster in the general regime), stored as a positive magnitude
  double power_law_error = 0.0;

  bool hypotheses_ok = true;
  bool valid = false;
  std::string provenance;

  std::string to_json() const;
};

// Assembles the certificate: schedule, per-size cluster bounds fed by chord-
// interpolated PT estimates, localization penalty, partition optimization,
// and (general regime) the crude inter-cluster correction.
BoundCertificate lower_bound_certificate(Regime regime, double nu, double alpha, int n_particles,
                                         const BoundConstants& constants,
                                         const PtProvider& provider);

}  // namespace polaron
