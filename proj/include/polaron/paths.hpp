#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "polaron/clusters.hpp"

namespace polaron {

// Closed Brownian bridge confined to one localization cube, sampled at
// n_steps + 1 uniform times with positions[0] == positions[n_steps].
struct ConfinedPath {
  int box_index = 0;
  double horizon = 0.0;  // T
  std::vector<std::array<double, 3>> positions;

  int steps() const { return static_cast<int>(positions.size()) - 1; }
};

// Bridge from the box center to itself; whole coordinate paths are
// rejection-resampled until every position lies strictly inside the cube
// (coordinates are independent, so this realizes the conditioned law).
// Deterministic for a fixed seed.
ConfinedPath sample_confined_bridge(const BoxConfiguration& config, int box_index, double horizon,
                                    int n_steps, std::uint64_t seed,
                                    int rejection_budget = 100000);

// Checks dist(Q_i, Q_j) <= |w_i(t) - w_j(t+s)| <= dist + 2 sqrt(3) R over the
// discrete times and all cyclic lags of two equally sampled paths.
struct DistanceBoundReport {
  double lower = 0.0;  // dist(Q_i, Q_j)
  double upper = 0.0;  // dist + 2 sqrt(3) R
  double observed_min = 0.0;
  double observed_max = 0.0;
  bool pass = false;
};
DistanceBoundReport verify_path_distance_bounds(const ConfinedPath& path_i,
                                                const ConfinedPath& path_j,
                                                const BoxConfiguration& config);

// Compares the full interaction exponent of a path ensemble against its
// cluster-split bound: intra-cluster terms are kept, inter-cluster terms are
// replaced by T (alpha/d(i,j) - U/(2 d(i,j) + 4 sqrt(3) R)).  The retarded
// weight e^{-|s|}/2 is truncated at |s| <= 40 and normalized to unit mass;
// time integrals use the periodic trapezoid rule.
struct SplitCheckReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs, should be >= -tolerance
  double tolerance = 0.0;
  bool pass = false;
  int pairs_checked = 0;
  int pairs_skipped = 0;  // near-contact pairs reported and skipped
};
SplitCheckReport integrand_cluster_split_check(const std::vector<ConfinedPath>& paths,
                                               const ClusterPartition& partition,
                                               const BoxConfiguration& config, double alpha,
                                               double nu);

}  // namespace polaron
