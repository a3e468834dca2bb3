#include "polaron/bound.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlohmann/json.hpp"
#include "polaron/errors.hpp"

namespace polaron {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;

}  // namespace

std::string to_string(Regime regime) {
  return regime == Regime::Strong ? "strong" : "general";
}

double BoundParameters::cutoff(int size) const {
  if (regime == Regime::Strong)
    return std::pow(size, 0.2) * std::pow(alpha, 1.2) * constants.c1;
  return size * std::pow(alpha, 27.0 / 23.0) * constants.c1;
}

double BoundParameters::block_side(int size) const {
  if (regime == Regime::Strong) return constants.c3 * std::pow(alpha, 0.6) * std::pow(size, -0.4);
  return constants.c3 * std::pow(alpha, 13.0 / 23.0);
}

double BoundParameters::delta(int size) const {
  if (regime == Regime::Strong) return constants.c4 * std::pow(alpha, -0.2) * std::pow(size, 0.8);
  return constants.c4 * std::pow(alpha, -4.0 / 23.0);
}

double BoundParameters::reduced_nu(int size) const { return nu * (1.0 - 2.0 * delta(size)); }

bool BoundParameters::cutoff_ok(int size) const {
  return 8.0 * alpha * size < kPi * cutoff(size);
}

bool BoundParameters::delta_ok(int size) const { return 2.0 * delta(size) < 1.0; }

BoundParameters schedule_strong(double nu, double alpha, int n_total,
                                const BoundConstants& constants) {
  if (!(nu > 2.0)) throw NuNotAboveTwoError("strong regime needs nu > 2");
  if (n_total < 1) throw Error("need at least one particle");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  BoundParameters p;
  p.regime = Regime::Strong;
  p.alpha = alpha;
  p.nu = nu;
  p.n_total = n_total;
  p.constants = constants;
  const double n4 = std::pow(n_total, 4.0);
  const double margin_bound = std::pow(2.0 * nu * constants.c4 / (nu - 2.0), 5.0);
  const double cutoff_bound = std::pow(8.0 / (kPi * constants.c1), 5.0);
  p.admissibility_threshold = n4 * std::max(margin_bound, cutoff_bound);
  if (constants.epsilon > 0.0)
    p.admissibility_threshold = std::max(p.admissibility_threshold, constants.epsilon * n4);
  if (!(alpha > p.admissibility_threshold)) {
    std::ostringstream msg;
    msg << "alpha too small for the strong-regime schedule: need alpha > N^4 * "
        << "max{(2 nu c4/(nu-2))^5, (8/(pi c1))^5} = " << p.admissibility_threshold << ", got "
        << alpha;
    throw AlphaTooSmallError(msg.str());
  }
  p.box_side = constants.c2 * std::pow(alpha, -0.9) * std::pow(n_total, -0.4);
  p.separation = zero_correction_threshold(nu, p.box_side);
  return p;
}

BoundParameters schedule_general(double nu, double alpha, int n_total,
                                 const BoundConstants& constants) {
  if (nu < 0.0) throw Error("nu must be nonnegative");
  if (n_total < 1) throw Error("need at least one particle");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  BoundParameters p;
  p.regime = Regime::General;
  p.alpha = alpha;
  p.nu = nu;
  p.n_total = n_total;
  p.constants = constants;
  const double margin_bound = std::pow(2.0 * constants.c4, 23.0 / 4.0);
  const double cutoff_bound = std::pow(8.0 / (kPi * constants.c1), 23.0 / 4.0);
  p.admissibility_threshold = std::max(margin_bound, cutoff_bound);
  if (constants.epsilon > 0.0)
    p.admissibility_threshold = std::max(p.admissibility_threshold, constants.epsilon);
  if (!(alpha > p.admissibility_threshold)) {
    std::ostringstream msg;
    msg << "alpha too small for the general-regime schedule: need alpha > "
        << "max{(2 c4)^{23/4}, (8/(pi c1))^{23/4}} = " << p.admissibility_threshold << ", got "
        << alpha;
    throw AlphaTooSmallError(msg.str());
  }
  p.box_side = constants.c2 * std::pow(alpha, -19.0 / 23.0) / n_total;
  p.separation = constants.c5 * p.box_side;
  return p;
}

double ims_penalty(int n_particles, double box_side) {
  if (!(box_side > 0.0)) throw NonpositiveSideError("box side must be positive");
  if (n_particles < 1) throw Error("need at least one particle");
  return 3.0 * n_particles * kPi * kPi / (box_side * box_side);
}

double zero_correction_threshold(double nu, double box_side) {
  if (!(nu > 2.0)) throw NuNotAboveTwoError("threshold defined for nu > 2 only");
  return 4.0 * kSqrt3 * box_side / (nu - 2.0);
}

double intercluster_pair_term(double gap, double alpha, double nu, double box_side) {
  return alpha / gap - nu * alpha / (2.0 * gap + 4.0 * kSqrt3 * box_side);
}

InterclusterCorrection intercluster_correction(const ClusterPartition& partition,
                                               const BoxConfiguration& config, double alpha,
                                               double nu) {
  InterclusterCorrection out;
  const auto& groups = partition.groups;
  for (std::size_t g1 = 0; g1 < groups.size(); ++g1)
    for (std::size_t g2 = 0; g2 < groups.size(); ++g2) {
      if (g1 == g2) continue;
      for (int i : groups[g1])
        for (int j : groups[g2]) {
          const double gap = box_distance(i, j, config);
          out.exact_pair_sum += intercluster_pair_term(gap, alpha, nu, config.side);
        }
    }
  const double n = static_cast<double>(config.size());
  out.crude = alpha * n * n / partition.threshold;
  return out;
}

double chord_lower_bound(double e_nu, double e_zero, double nu, double nu_tilde) {
  if (nu_tilde < 0.0 || nu_tilde > nu)
    throw OrderingViolatedError("chord needs 0 <= nu_tilde <= nu");
  if (nu == 0.0) return e_zero;
  const double t = nu_tilde / nu;
  return (1.0 - t) * e_zero + t * e_nu;
}

ClusterBound cluster_energy_bound(int size, const BoundParameters& params, double pt_value) {
  if (size < 1) throw Error("cluster size must be positive");
  ClusterBound b;
  b.size = size;
  b.pt_value = pt_value;
  const double alpha = params.alpha;
  const double cutoff = params.cutoff(size);
  const double block = params.block_side(size);
  const double margin = params.delta(size);
  b.hypothesis_ok = params.cutoff_ok(size) && params.delta_ok(size);
  const double one_minus = 1.0 - 2.0 * margin;
  b.denominator = one_minus * one_minus * (1.0 - 8.0 * alpha * size / (kPi * cutoff));
  const double rd = params.box_side + params.separation;
  b.locality_term = 9.0 * alpha * rd * rd * std::pow(size, 4.0) * block * block * cutoff /
                    (kPi * margin);
  const double modes = 2.0 * cutoff / block + 1.0;
  b.mode_count_term = modes * modes * modes;
  if (!b.hypothesis_ok) {
    b.pt_term = std::numeric_limits<double>::quiet_NaN();
    b.value = std::numeric_limits<double>::quiet_NaN();
    return b;
  }
  b.pt_term = alpha * alpha * pt_value / b.denominator;
  b.value = b.pt_term - b.locality_term - b.mode_count_term - 0.5;
  return b;
}

PartitionOptimum optimal_partition(int n_total, const std::function<double(int)>& per_size) {
  if (n_total < 1) throw Error("need at least one particle");
  std::vector<double> value(n_total + 1, 0.0);
  std::vector<int> first(n_total + 1, 0);
  for (int n = 1; n <= n_total; ++n) {
    value[n] = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
      const double candidate = per_size(k) + value[n - k];
      if (candidate < value[n]) {  // strict: ties keep the smallest part
        value[n] = candidate;
        first[n] = k;
      }
    }
  }
  PartitionOptimum out;
  out.value = value[n_total];
  for (int n = n_total; n > 0; n -= first[n]) out.parts.push_back(first[n]);
  std::sort(out.parts.begin(), out.parts.end());
  return out;
}

BoundCertificate lower_bound_certificate(Regime regime, double nu, double alpha, int n_particles,
                                         const BoundConstants& constants,
                                         const PtProvider& provider) {
  BoundCertificate cert;
  cert.regime = regime;
  cert.n_particles = n_particles;
  cert.nu = nu;
  cert.alpha = alpha;
  cert.constants = constants;
  cert.parameters = regime == Regime::Strong ? schedule_strong(nu, alpha, n_particles, constants)
                                             : schedule_general(nu, alpha, n_particles, constants);
  const BoundParameters& params = cert.parameters;

  bool heuristic_inputs = false;
  auto pt_input = [&](int size, double target_nu) {
    EnergyEstimate est;
    try {
      est = provider(size, target_nu);
    } catch (const AlphaTooSmallError&) {
      throw;
    } catch (const std::exception& e) {
      throw ProviderFailureError(std::string("PT provider failed: ") + e.what());
    }
    if (est.kind != EstimateKind::LowerCertificate) heuristic_inputs = true;
    return est.value;
  };

  cert.per_size.reserve(n_particles);
  cert.hypotheses_ok = true;
  for (int k = 1; k <= n_particles; ++k) {
    const double reduced = params.reduced_nu(k);
    double pt_value;
    if (nu == 0.0) {
      pt_value = pt_input(k, 0.0);
    } else {
      const double e_nu = pt_input(k, nu);
      const double e_zero = pt_input(k, 0.0);
      pt_value = chord_lower_bound(e_nu, e_zero, nu, std::max(reduced, 0.0));
    }
    ClusterBound bound = cluster_energy_bound(k, params, pt_value);
    cert.hypotheses_ok = cert.hypotheses_ok && bound.hypothesis_ok;
    cert.per_size.push_back(bound);
  }

  if (!cert.hypotheses_ok)
    throw HypothesisViolatedError("cluster-bound hypotheses failed despite schedule");

  auto per_size_value = [&](int k) {
    return cert.per_size[k - 1].value - ims_penalty(k, params.box_side);
  };
  const PartitionOptimum opt = optimal_partition(n_particles, per_size_value);
  cert.witness_partition = opt.parts;

  for (int k : opt.parts) {
    const ClusterBound& b = cert.per_size[k - 1];
    cert.pt_term += b.pt_term;
    cert.locality_term -= b.locality_term;
    cert.mode_count_term -= b.mode_count_term;
    cert.half_constant -= 0.5;
  }
  cert.ims_term = -ims_penalty(n_particles, params.box_side);

  double crude = 0.0;
  if (regime == Regime::General) {
    crude = alpha * static_cast<double>(n_particles) * n_particles / params.separation;
    cert.intercluster_term = -crude;
  }
  cert.value = opt.value - crude;

  double locality_total = 0.0;
  for (int k : opt.parts) locality_total += cert.per_size[k - 1].locality_term;
  cert.power_law_error = regime == Regime::Strong
                             ? locality_total + ims_penalty(n_particles, params.box_side)
                             : locality_total + crude;

  cert.valid = cert.hypotheses_ok;
  cert.provenance = heuristic_inputs
                        ? "heuristic lower bound: PT inputs are variational upper estimates"
                        : "certified lower bound: PT inputs are lower-type values";
  return cert;
}

std::string BoundCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["regime"] = polaron::to_string(regime);
  j["n_particles"] = n_particles;
  j["nu"] = nu;
  j["alpha"] = alpha;
  j["constants"] = {{"c1", constants.c1}, {"c2", constants.c2}, {"c3", constants.c3},
                    {"c4", constants.c4}, {"c5", constants.c5}, {"epsilon", constants.epsilon}};
  j["box_side"] = parameters.box_side;
  j["separation"] = parameters.separation;
  j["admissibility_threshold"] = parameters.admissibility_threshold;
  j["witness_partition"] = witness_partition;
  nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
  for (const auto& b : per_size) {
    sizes.push_back({{"size", b.size},
                     {"cutoff", parameters.cutoff(b.size)},
                     {"block_side", parameters.block_side(b.size)},
                     {"delta", parameters.delta(b.size)},
                     {"reduced_nu", parameters.reduced_nu(b.size)},
                     {"pt_value", b.pt_value},
                     {"denominator", b.denominator},
                     {"pt_term", b.pt_term},
                     {"locality_term", b.locality_term},
                     {"mode_count_term", b.mode_count_term},
                     {"value", b.value},
                     {"hypothesis_ok", b.hypothesis_ok}});
  }
  j["per_size"] = sizes;
  j["terms"] = {{"pt_term", pt_term},
                {"locality_term", locality_term},
                {"mode_count_term", mode_count_term},
                {"half_constant", half_constant},
                {"ims_term", ims_term},
                {"intercluster_term", intercluster_term}};
  j["power_law_error"] = power_law_error;
  j["value"] = value;
  j["hypotheses_ok"] = hypotheses_ok;
  j["valid"] = valid;
  j["provenance"] = provenance;
  return j.dump(2);
}

}  // namespace polaron
