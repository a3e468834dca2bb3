// Batch front-end for the polaron bound toolkit: variational upper
// estimates, lower-bound certificates, cluster partitions, and confined-path
// inequality sweeps, emitted as reproducible CSV/JSON artifacts.

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "polaron/bound.hpp"
#include "polaron/clusters.hpp"
#include "polaron/energy.hpp"
#include "polaron/errors.hpp"
#include "polaron/io.hpp"
#include "polaron/paths.hpp"
#include "polaron/solver.hpp"

namespace {

using nlohmann::ordered_json;
using namespace polaron;

struct CommonOptions {
  std::string out;
  std::string format = "json";
  int grid_n = 500;
  double rmax = 40.0;
  std::uint64_t seed = 0;
};

SolverConfig solver_config(const CommonOptions& common) {
  SolverConfig cfg;
  cfg.radial_points = common.grid_n;
  cfg.r_max = common.rmax;
  cfg.seed = common.seed;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--out", common.out, "output file (default: stdout)");
  cmd->add_option("--format", common.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--grid-n", common.grid_n, "radial grid points");
  cmd->add_option("--rmax", common.rmax, "radial grid extent at alpha=1");
  cmd->add_option("--seed", common.seed, "seed for stochastic commands");
}

void emit(const CommonOptions& common, const std::string& text) {
  if (common.out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(common.out);
  if (!out) throw ConfigError("cannot open output file: " + common.out);
  out << text << '\n';
}

std::string render_json(ordered_json config, ordered_json payload) {
  ordered_json doc;
  doc["config"] = std::move(config);
  doc["results"] = std::move(payload);
  doc["content_hash"] = fnv1a64(doc["results"].dump());
  return doc.dump(2);
}

std::string render_csv(const ordered_json& config, const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [key, value] : config.items()) out << "# " << key << " = " << value << '\n';
  std::ostringstream body;
  body.precision(17);
  for (std::size_t c = 0; c < columns.size(); ++c) body << (c ? "," : "") << columns[c];
  body << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) body << (c ? "," : "") << row[c];
    body << '\n';
  }
  out << "# content_hash = " << fnv1a64(body.str()) << '\n' << body.str();
  return out.str();
}

ordered_json estimate_json(const EnergyEstimate& est) {
  return ordered_json{{"N", est.n_particles},
                      {"nu", est.nu},
                      {"alpha", est.alpha},
                      {"kind", to_string(est.kind)},
                      {"value", est.value},
                      {"iterations", est.iterations},
                      {"converged", est.converged},
                      {"grid_hash", est.grid_hash},
                      {"note", est.note}};
}

Regime parse_regime(const std::string& name, double nu) {
  if (name == "strong") return Regime::Strong;
  if (name == "general") return Regime::General;
  return nu > 2.0 ? Regime::Strong : Regime::General;
}

int run_pekar_min(const CommonOptions& common, double alpha, const std::string& orbital_out) {
  auto solve = minimize_pekar(alpha, solver_config(common));
  if (!orbital_out.empty()) write_snapshot(orbital_out, solve.orbital);
  ordered_json config{{"command", "pekar-min"}, {"alpha", alpha}, {"grid_n", common.grid_n},
                      {"rmax", common.rmax}, {"seed", common.seed}};
  std::cout << "pekar minimum at alpha=" << alpha << ": " << solve.estimate.value << '\n';
  if (common.format == "csv") {
    emit(common, render_csv(config, {"alpha", "energy", "iterations", "converged"},
                            {{alpha, solve.estimate.value,
                              static_cast<double>(solve.estimate.iterations),
                              static_cast<double>(solve.estimate.converged)}}));
  } else {
    emit(common, render_json(config, estimate_json(solve.estimate)));
  }
  return 0;
}

int run_hartree_min(const CommonOptions& common, int n_particles, double nu) {
  auto solve = minimize_hartree(n_particles, nu, solver_config(common));
  ordered_json config{{"command", "hartree-min"}, {"N", n_particles}, {"nu", nu},
                      {"grid_n", common.grid_n}, {"rmax", common.rmax}, {"seed", common.seed}};
  ordered_json payload = estimate_json(solve.estimate);
  payload["cluster_sizes"] = solve.cluster_sizes;
  std::cout << "hartree upper estimate N=" << n_particles << " nu=" << nu << ": "
            << solve.estimate.value << '\n';
  if (common.format == "csv") {
    emit(common, render_csv(config, {"N", "nu", "energy", "converged"},
                            {{static_cast<double>(n_particles), nu, solve.estimate.value,
                              static_cast<double>(solve.estimate.converged)}}));
  } else {
    emit(common, render_json(config, payload));
  }
  return 0;
}

int run_certificate(const CommonOptions& common, const std::string& regime_name, double nu,
                    double alpha, int n_particles, const BoundConstants& constants) {
  PtValueCache cache(solver_config(common));
  const Regime regime = parse_regime(regime_name, nu);
  auto cert =
      lower_bound_certificate(regime, nu, alpha, n_particles, constants, cache.provider());
  ordered_json config{{"command", "certificate"},
                      {"regime", to_string(regime)},
                      {"nu", nu},
                      {"alpha", alpha},
                      {"N", n_particles},
                      {"c1", constants.c1},
                      {"c2", constants.c2},
                      {"c3", constants.c3},
                      {"c4", constants.c4},
                      {"c5", constants.c5},
                      {"epsilon", constants.epsilon},
                      {"grid_n", common.grid_n},
                      {"rmax", common.rmax}};
  emit(common, render_json(config, ordered_json::parse(cert.to_json())));
  return 0;
}

int run_gap(const CommonOptions& common, const std::string& regime_name, double nu,
            std::vector<double> alphas, int n_particles, const BoundConstants& constants) {
  if (alphas.empty()) throw ConfigError("gap needs at least one --alpha");
  PtValueCache cache(solver_config(common));
  auto provider = cache.provider();
  const Regime regime = parse_regime(regime_name, nu);
  // warm the cache serially so the sweep tasks only read
  for (int k = 1; k <= n_particles; ++k) {
    provider(k, nu);
    provider(k, 0.0);
  }
  const double upper_unit = provider(n_particles, nu).value;

  std::vector<std::future<BoundCertificate>> tasks;
  for (double alpha : alphas)
    tasks.push_back(std::async(std::launch::async, [&, alpha] {
      return lower_bound_certificate(regime, nu, alpha, n_particles, constants, provider);
    }));

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto cert = tasks[i].get();
    const double a2 = alphas[i] * alphas[i];
    rows.push_back({alphas[i], upper_unit, cert.value / a2, upper_unit - cert.value / a2});
  }
  ordered_json config{{"command", "gap"},   {"regime", to_string(regime)},
                      {"nu", nu},           {"N", n_particles},
                      {"c1", constants.c1}, {"c2", constants.c2},
                      {"c3", constants.c3}, {"c4", constants.c4},
                      {"c5", constants.c5}, {"grid_n", common.grid_n},
                      {"rmax", common.rmax}};
  if (common.format == "json") {
    ordered_json payload = ordered_json::array();
    for (const auto& row : rows)
      payload.push_back({{"alpha", row[0]},
                         {"upper_over_alpha2", row[1]},
                         {"lower_over_alpha2", row[2]},
                         {"gap_over_alpha2", row[3]}});
    emit(common, render_json(config, payload));
  } else {
    emit(common, render_csv(config,
                            {"alpha", "upper_over_alpha2", "lower_over_alpha2",
                             "gap_over_alpha2"},
                            rows));
  }
  return 0;
}

int run_clusters(const CommonOptions& common, const std::string& input, double side,
                 double threshold) {
  const BoxConfiguration boxes = read_boxes_csv(input, side);
  const ClusterPartition part = partition(boxes, threshold);
  ordered_json config{{"command", "clusters"}, {"input", input}, {"side", side},
                      {"threshold", threshold}};
  emit(common, render_json(config, ordered_json::parse(partition_to_json(part))));
  return 0;
}

int run_paths_check(const CommonOptions& common, int n_pairs, int n_ensembles, double side,
                    double horizon, int n_steps, double alpha, double nu) {
  std::mt19937_64 rng(common.seed ? common.seed : 0x8badf00dull);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1p-53);
  };

  int pairs_checked = 0, pair_violations = 0;
  double worst_pair_margin = std::numeric_limits<double>::infinity();
  while (pairs_checked < n_pairs) {
    BoxConfiguration boxes = make_boxes({{uniform(-8, 8), uniform(-8, 8), uniform(-8, 8)},
                                         {uniform(-8, 8), uniform(-8, 8), uniform(-8, 8)}},
                                        side);
    if (box_distance(0, 1, boxes) <= 0.0) continue;
    const auto pi = sample_confined_bridge(boxes, 0, horizon, n_steps, rng());
    const auto pj = sample_confined_bridge(boxes, 1, horizon, n_steps, rng());
    const auto report = verify_path_distance_bounds(pi, pj, boxes);
    ++pairs_checked;
    if (!report.pass) ++pair_violations;
    worst_pair_margin = std::min({worst_pair_margin, report.observed_min - report.lower,
                                  report.upper - report.observed_max});
  }

  int ensembles_checked = 0, split_violations = 0, skipped = 0;
  double worst_split_margin = std::numeric_limits<double>::infinity();
  for (int e = 0; e < n_ensembles; ++e) {
    const int n = 3 + static_cast<int>(rng() % 4);
    std::vector<std::array<double, 3>> centers;
    for (int i = 0; i < n; ++i)
      centers.push_back({uniform(-10, 10), uniform(-10, 10), uniform(-10, 10)});
    const auto boxes = make_boxes(centers, side);
    const auto part = partition(boxes, 2.0 * side);
    std::vector<ConfinedPath> paths;
    for (int i = 0; i < n; ++i)
      paths.push_back(sample_confined_bridge(boxes, i, horizon, n_steps, rng()));
    const auto report = integrand_cluster_split_check(paths, part, boxes, alpha, nu);
    ++ensembles_checked;
    skipped += report.pairs_skipped;
    if (!report.pass) ++split_violations;
    worst_split_margin = std::min(worst_split_margin, report.margin);
  }

  ordered_json config{{"command", "paths-check"}, {"pairs", n_pairs},
                      {"ensembles", n_ensembles}, {"side", side},
                      {"horizon", horizon},       {"steps", n_steps},
                      {"alpha", alpha},           {"nu", nu},
                      {"seed", common.seed}};
  ordered_json payload{{"pairs_checked", pairs_checked},
                       {"pair_violations", pair_violations},
                       {"worst_pair_margin", worst_pair_margin},
                       {"ensembles_checked", ensembles_checked},
                       {"split_violations", split_violations},
                       {"worst_split_margin", worst_split_margin},
                       {"pairs_skipped", skipped},
                       {"tolerance", 1e-6 * horizon}};
  emit(common, render_json(config, payload));
  return (pair_violations == 0 && split_violations == 0) ? 0 : 2;
}

int run_binding(const CommonOptions& common, int n_particles, double nu, int k) {
  PtValueCache cache(solver_config(common));
  std::vector<int> ks;
  if (k > 0)
    ks.push_back(k);
  else
    for (int i = 1; i < n_particles; ++i) ks.push_back(i);

  ordered_json rows = ordered_json::array();
  std::vector<std::vector<double>> csv_rows;
  for (int kk : ks) {
    const auto report = binding_check(n_particles, nu, kk, cache.provider());
    rows.push_back({{"k", kk},
                    {"E_N", report.whole.value},
                    {"E_k", report.left.value},
                    {"E_N_minus_k", report.right.value},
                    {"margin", report.margin},
                    {"strictly_bound", report.strictly_bound},
                    {"caveat", report.caveat}});
    csv_rows.push_back({static_cast<double>(kk), report.whole.value, report.left.value,
                        report.right.value, report.margin,
                        static_cast<double>(report.strictly_bound)});
  }
  ordered_json config{{"command", "binding"}, {"N", n_particles}, {"nu", nu},
                      {"grid_n", common.grid_n}, {"rmax", common.rmax}};
  if (common.format == "csv")
    emit(common,
         render_csv(config, {"k", "E_N", "E_k", "E_N_minus_k", "margin", "strictly_bound"},
                    csv_rows));
  else
    emit(common, render_json(config, rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-polaron energy bounds toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; flags take precedence");

  CommonOptions common;
  double alpha = 1.0, nu = 0.0;
  int n_particles = 1, k = 0;
  BoundConstants constants;
  std::string regime_name = "auto", orbital_out, input;
  std::vector<double> alphas;
  double side = 1.0, threshold = 1.0, horizon = 1.0;
  int n_pairs = 1000, n_ensembles = 100, n_steps = 100;

  auto* pekar = app.add_subcommand("pekar-min", "single-particle ground state upper bound");
  add_common(pekar, common);
  pekar->add_option("--alpha", alpha, "coupling strength");
  pekar->add_option("--orbital-out", orbital_out, "binary orbital snapshot path");

  auto* hartree = app.add_subcommand("hartree-min", "N-particle product upper bound");
  add_common(hartree, common);
  hartree->add_option("--N", n_particles, "particle count");
  hartree->add_option("--nu", nu, "repulsion ratio U/alpha");

  auto* cert = app.add_subcommand("certificate", "lower-bound certificate JSON");
  add_common(cert, common);
  cert->add_option("--regime", regime_name, "strong, general, or auto")
      ->check(CLI::IsMember({"strong", "general", "auto"}));
  cert->add_option("--nu", nu, "repulsion ratio");
  cert->add_option("--alpha", alpha, "coupling strength");
  cert->add_option("--N", n_particles, "particle count");
  cert->add_option("--c1", constants.c1, "cutoff coefficient");
  cert->add_option("--c2", constants.c2, "box side coefficient");
  cert->add_option("--c3", constants.c3, "block side coefficient");
  cert->add_option("--c4", constants.c4, "margin coefficient");
  cert->add_option("--c5", constants.c5, "separation ratio (general)");
  cert->add_option("--epsilon", constants.epsilon, "extra admissibility floor");

  auto* gap = app.add_subcommand("gap", "upper/lower gap sweep over alpha");
  add_common(gap, common);
  gap->add_option("--regime", regime_name, "strong, general, or auto");
  gap->add_option("--nu", nu, "repulsion ratio");
  gap->add_option("--alpha", alphas, "coupling values (repeatable)")->expected(-1);
  gap->add_option("--N", n_particles, "particle count");
  gap->add_option("--c1", constants.c1, "cutoff coefficient");
  gap->add_option("--c2", constants.c2, "box side coefficient");
  gap->add_option("--c3", constants.c3, "block side coefficient");
  gap->add_option("--c4", constants.c4, "margin coefficient");
  gap->add_option("--c5", constants.c5, "separation ratio (general)");

  auto* clusters_cmd = app.add_subcommand("clusters", "partition a CSV of box centers");
  add_common(clusters_cmd, common);
  clusters_cmd->add_option("--input", input, "CSV of x,y,z centers")->required();
  clusters_cmd->add_option("--side", side, "box side length");
  clusters_cmd->add_option("--threshold", threshold, "clustering distance threshold");

  auto* paths = app.add_subcommand("paths-check", "confined-path inequality sweeps");
  add_common(paths, common);
  paths->add_option("--pairs", n_pairs, "distance-bound pairs to sample");
  paths->add_option("--ensembles", n_ensembles, "split-inequality ensembles");
  paths->add_option("--side", side, "box side length");
  paths->add_option("--horizon", horizon, "path time horizon");
  paths->add_option("--steps", n_steps, "time steps per path");
  paths->add_option("--alpha", alpha, "coupling strength");
  paths->add_option("--nu", nu, "repulsion ratio");

  auto* binding = app.add_subcommand("binding", "subadditivity / binding comparison");
  add_common(binding, common);
  binding->add_option("--N", n_particles, "particle count");
  binding->add_option("--nu", nu, "repulsion ratio");
  binding->add_option("--k", k, "split size (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (pekar->parsed()) return run_pekar_min(common, alpha, orbital_out);
    if (hartree->parsed()) return run_hartree_min(common, n_particles, nu);
    if (cert->parsed())
      return run_certificate(common, regime_name, nu, alpha, n_particles, constants);
    if (gap->parsed()) return run_gap(common, regime_name, nu, alphas, n_particles, constants);
    if (clusters_cmd->parsed()) return run_clusters(common, input, side, threshold);
    if (paths->parsed())
      return run_paths_check(common, n_pairs, n_ensembles, side, horizon, n_steps, alpha, nu);
    if (binding->parsed()) return run_binding(common, n_particles, nu, k);
  } catch (const AlphaTooSmallError& e) {
    std::cerr << "admissibility failure: " << e.what() << '\n';
    return 2;
  } catch (const HypothesisViolatedError& e) {
    std::cerr << "hypothesis failure: " << e.what() << '\n';
    return 2;
  } catch (const NuNotAboveTwoError& e) {
    std::cerr << "hypothesis failure: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
