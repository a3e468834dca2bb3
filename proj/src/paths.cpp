#include "polaron/paths.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kLagTruncation = 40.0;  // e^{-40} ~ 4e-18 of the weight mass
constexpr double kContactDistance = 1e-9;

// Standard normal via Box-Muller on explicitly constructed uniforms, so the
// stream is reproducible across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

double path_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

ConfinedPath sample_confined_bridge(const BoxConfiguration& config, int box_index, double horizon,
                                    int n_steps, std::uint64_t seed, int rejection_budget) {
  if (box_index < 0 || box_index >= config.size())
    throw IndexOutOfRangeError("box index out of range");
  if (!(horizon > 0.0)) throw Error("time horizon must be positive");
  if (n_steps < 2) throw Error("need at least 2 steps");

  const double half = 0.5 * config.side;
  const double dt = horizon / n_steps;
  const double step_sd = std::sqrt(dt);
  GaussianSource gauss(seed ^ (0x9e3779b97f4a7c15ull * (box_index + 1)));

  ConfinedPath path;
  path.box_index = box_index;
  path.horizon = horizon;
  path.positions.assign(n_steps + 1, config.centers[box_index]);

  std::vector<double> walk(n_steps + 1);
  for (int axis = 0; axis < 3; ++axis) {
    int attempts = 0;
    bool accepted = false;
    while (!accepted) {
      if (++attempts > rejection_budget) {
        std::ostringstream msg;
        msg << "confined bridge rejected " << rejection_budget
            << " times (box side " << config.side << ", horizon " << horizon
            << "); acceptance rate below " << 1.0 / rejection_budget;
        throw RejectionBudgetExceededError(msg.str());
      }
      walk[0] = 0.0;
      for (int k = 1; k <= n_steps; ++k) walk[k] = walk[k - 1] + step_sd * gauss();
      accepted = true;
      for (int k = 1; k < n_steps; ++k) {
        const double bridge = walk[k] - (static_cast<double>(k) / n_steps) * walk[n_steps];
        walk[k] = bridge;  // reuse storage for the pinned path
        if (!(std::abs(bridge) < half)) {
          accepted = false;
          break;
        }
      }
    }
    walk[n_steps] = 0.0;
    for (int k = 0; k <= n_steps; ++k)
      path.positions[k][axis] = config.centers[box_index][axis] + walk[k];
  }
  return path;
}

DistanceBoundReport verify_path_distance_bounds(const ConfinedPath& path_i,
                                                const ConfinedPath& path_j,
                                                const BoxConfiguration& config) {
  if (path_i.steps() != path_j.steps() || path_i.horizon != path_j.horizon)
    throw Error("paths must share the sampling grid");
  const int n = path_i.steps();
  DistanceBoundReport report;
  report.lower = box_distance(path_i.box_index, path_j.box_index, config);
  report.upper = report.lower + 2.0 * kSqrt3 * config.side;
  report.observed_min = std::numeric_limits<double>::infinity();
  report.observed_max = 0.0;
  for (int shift = 0; shift < n; ++shift)
    for (int t = 0; t < n; ++t) {
      const double dist = path_distance(path_i.positions[t], path_j.positions[(t + shift) % n]);
      report.observed_min = std::min(report.observed_min, dist);
      report.observed_max = std::max(report.observed_max, dist);
    }
  report.pass = report.observed_min >= report.lower - 1e-12 &&
                report.observed_max <= report.upper + 1e-12;
  return report;
}

SplitCheckReport integrand_cluster_split_check(const std::vector<ConfinedPath>& paths,
                                               const ClusterPartition& partition,
                                               const BoxConfiguration& config, double alpha,
                                               double nu) {
  const int n_paths = static_cast<int>(paths.size());
  if (n_paths != config.size()) throw Error("one path per box required");
  for (const auto& p : paths)
    if (p.steps() != paths.front().steps() || p.horizon != paths.front().horizon)
      throw Error("paths must share the sampling grid");
  const int n = paths.front().steps();
  const double horizon = paths.front().horizon;
  const double dt = horizon / n;
  const double repulsion_u = nu * alpha;

  // e^{-|s|}/2 on lag multiples of dt, truncated and normalized, then folded
  // onto shift residues modulo the period
  std::vector<double> residue_weight(n, 0.0);
  {
    const int q_max = static_cast<int>(std::ceil(kLagTruncation / dt));
    double mass = 0.0;
    std::vector<double> raw(2 * q_max + 1);
    for (int q = -q_max; q <= q_max; ++q) {
      raw[q + q_max] = std::exp(-std::abs(q * dt));
      mass += raw[q + q_max];
    }
    for (int q = -q_max; q <= q_max; ++q)
      residue_weight[((q % n) + n) % n] += raw[q + q_max] / mass;
  }

  // time-correlation of 1/|w_i - w_j| per cyclic shift; positions 0..n-1
  // cover the closed path once
  auto pair_correlation = [&](const ConfinedPath& a, const ConfinedPath& b, bool skip_zero_shift,
                              bool& contact) {
    std::vector<double> q(n, 0.0);
    for (int shift = 0; shift < n; ++shift) {
      if (skip_zero_shift && shift == 0) continue;
      double sum = 0.0;
      for (int t = 0; t < n; ++t) {
        const double dist = path_distance(a.positions[t], b.positions[(t + shift) % n]);
        if (dist < kContactDistance) {
          contact = true;
          return q;
        }
        sum += 1.0 / dist;
      }
      q[shift] = sum * dt;
    }
    return q;
  };

  SplitCheckReport report;
  report.tolerance = 1e-6 * horizon;
  for (int i = 0; i < n_paths; ++i)
    for (int j = 0; j < n_paths; ++j) {
      const bool same_cluster = partition.cluster_of(i) == partition.cluster_of(j);
      const bool self = (i == j);
      bool contact = false;
      // the self term at zero shift is singular and identical on both sides;
      // it cancels, so it is excluded from both
      const auto q = pair_correlation(paths[i], paths[j], self, contact);
      if (contact) {
        ++report.pairs_skipped;
        continue;
      }
      ++report.pairs_checked;
      double retarded = 0.0;
      for (int shift = 0; shift < n; ++shift) retarded += residue_weight[shift] * q[shift];
      report.lhs += alpha * retarded;
      if (!self && i < j) report.lhs -= repulsion_u * q[0];
      if (same_cluster) {
        report.rhs += alpha * retarded;
        if (!self && i < j) report.rhs -= repulsion_u * q[0];
      } else {
        const double gap = box_distance(i, j, config);
        report.rhs +=
            horizon * (alpha / gap - repulsion_u / (2.0 * gap + 4.0 * kSqrt3 * config.side));
      }
    }
  report.margin = report.rhs - report.lhs;
  report.pass = report.margin >= -report.tolerance;
  return report;
}

}  // namespace polaron
