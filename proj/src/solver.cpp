#include "polaron/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "polaron/energy.hpp"
#include "polaron/errors.hpp"

namespace polaron {

namespace {

constexpr double kPi = std::numbers::pi;
// Separation used for fully dissociated cluster candidates; cross terms are
// exact for disjoint spherical charges, so this only has to be large.
constexpr double kFarSeparation = 1e15;

std::string to_note(const SolverConfig& cfg) {
  return "log-radial grid n=" + std::to_string(cfg.radial_points) +
         ", rmax=" + std::to_string(cfg.r_max);
}

// ---------------------------------------------------------------------------
// Radial imaginary-time relaxation in u = r psi coordinates.
//
// Kinetic energy is the edge form sum (du/dr)^2 dr, whose gradient is the
// conservative three-point stencil; the nonlocal potential is treated
// explicitly and the stiff Laplacian implicitly (tridiagonal solve), so the
// step size is not limited by the finest grid spacing.

struct RadialWorkspace {
  std::vector<double> r;      // nodes
  std::vector<double> delta;  // node segments
  std::vector<double> w;      // 4 pi r^2 delta (volume quadrature)
  std::vector<double> gap;    // n+1 edge gaps incl. r=0 and outer ghost

  explicit RadialWorkspace(const RadialWaveFunction& grid) {
    r = grid.nodes;
    delta = radial_segments(r);
    w = grid.weights;
    const int n = static_cast<int>(r.size());
    gap.resize(n + 1);
    gap[0] = r[0];
    for (int k = 1; k < n; ++k) gap[k] = r[k] - r[k - 1];
    gap[n] = r[n - 1] - r[n - 2];
  }

  int size() const { return static_cast<int>(r.size()); }

  double norm(const std::vector<double>& u) const {
    double s = 0.0;
    for (int k = 0; k < size(); ++k) s += delta[k] * u[k] * u[k];
    return std::sqrt(4.0 * kPi * s);
  }

  void normalize(std::vector<double>& u) const {
    const double nrm = norm(u);
    if (nrm <= 0.0) throw ZeroNormError("orbital collapsed to zero");
    for (double& v : u) v /= nrm;
  }

  double edge_kinetic(const std::vector<double>& u) const {
    const int n = size();
    double s = u[0] * u[0] / gap[0];
    for (int k = 1; k < n; ++k) {
      const double du = u[k] - u[k - 1];
      s += du * du / gap[k];
    }
    s += u[n - 1] * u[n - 1] / gap[n];
    return 4.0 * kPi * s;
  }

  // (1/tau + L) u_new = (1/tau - W) u with L the conservative -u''.
  void implicit_step(std::vector<double>& u, const std::vector<double>& pot, double tau) const {
    const int n = size();
    std::vector<double> diag(n), rhs(n);
    for (int k = 0; k < n; ++k) {
      diag[k] = delta[k] / tau + 1.0 / gap[k] + 1.0 / gap[k + 1];
      rhs[k] = delta[k] * (1.0 / tau - pot[k]) * u[k];
    }
    // Thomas sweep with off-diagonals -1/gap
    std::vector<double> c(n);
    c[0] = -1.0 / gap[1] / diag[0];
    rhs[0] /= diag[0];
    for (int k = 1; k < n; ++k) {
      const double lower = -1.0 / gap[k];
      const double m = diag[k] - lower * c[k - 1];
      c[k] = (k + 1 < n ? -1.0 / gap[k + 1] : 0.0) / m;
      rhs[k] = (rhs[k] - lower * rhs[k - 1]) / m;
    }
    u[n - 1] = rhs[n - 1];
    for (int k = n - 2; k >= 0; --k) u[k] = rhs[k] - c[k] * u[k + 1];
  }

  // Newton-kernel potential of the density samples rho (node values).
  std::vector<double> shell_potential(const std::vector<double>& rho) const {
    const int n = size();
    std::vector<double> v(n);
    double inside = 0.0;
    for (int k = 0; k < n; ++k) {
      inside += w[k] * rho[k];
      v[k] = inside / r[k];
    }
    double outside = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      v[k] += outside;
      outside += w[k] * rho[k] / r[k];
    }
    return v;
  }
};

struct ScfResult {
  double energy = 0.0;
  std::vector<std::vector<double>> u;  // orbitals as u = r psi
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  std::string note;
};

// Co-centered product-state relaxation at alpha = 1, repulsion U = nu.
// Orbital i moves in (nu - 2) V_rho - nu V_i.
ScfResult radial_scf(int n_orbitals, double nu, const SolverConfig& cfg,
                     const RadialWaveFunction& grid) {
  const RadialWorkspace ws(grid);
  const int n = ws.size();

  const double attraction = n_orbitals - 0.5 * nu * (n_orbitals - 1);
  const double sigma = 1.5 * std::sqrt(kPi) / std::max(attraction, 0.25);
  std::vector<std::vector<double>> u(n_orbitals, std::vector<double>(n));
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < n_orbitals; ++i) {
    for (int k = 0; k < n; ++k)
      u[i][k] = ws.r[k] * std::exp(-ws.r[k] * ws.r[k] / (4.0 * sigma * sigma));
    if (cfg.seed != 0) {
      for (int k = 0; k < n; ++k) {
        const double eta = 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
        u[i][k] *= 1.0 + 1e-6 * eta;
      }
    }
    ws.normalize(u[i]);
  }

  std::vector<std::vector<double>> rho_i(n_orbitals, std::vector<double>(n));
  std::vector<double> rho(n);
  auto densities = [&](const std::vector<std::vector<double>>& orbs) {
    std::fill(rho.begin(), rho.end(), 0.0);
    for (int i = 0; i < n_orbitals; ++i)
      for (int k = 0; k < n; ++k) {
        const double psi = orbs[i][k] / ws.r[k];
        rho_i[i][k] = psi * psi;
        rho[k] += rho_i[i][k];
      }
  };
  auto total_energy = [&](const std::vector<std::vector<double>>& orbs,
                          const std::vector<double>& v_rho,
                          const std::vector<std::vector<double>>& v_i) {
    double e = 0.0;
    for (int i = 0; i < n_orbitals; ++i) e += ws.edge_kinetic(orbs[i]);
    double d_total = 0.0, d_self = 0.0;
    for (int k = 0; k < n; ++k) d_total += ws.w[k] * rho[k] * v_rho[k];
    for (int i = 0; i < n_orbitals; ++i)
      for (int k = 0; k < n; ++k) d_self += ws.w[k] * rho_i[i][k] * v_i[i][k];
    e += 0.5 * nu * (d_total - d_self);  // sum over unordered pairs
    e -= d_total;
    return e;
  };

  std::vector<std::vector<double>> v_i(n_orbitals);
  densities(u);
  std::vector<double> v_rho = ws.shell_potential(rho);
  for (int i = 0; i < n_orbitals; ++i) v_i[i] = ws.shell_potential(rho_i[i]);

  ScfResult out;
  double energy = total_energy(u, v_rho, v_i);
  out.trace.push_back(energy);

  const double tau0 = cfg.step > 0.0 ? cfg.step : 1e-3 * cfg.r_max * cfg.r_max;
  double tau = tau0;
  std::vector<double> pot(n);
  int small_changes = 0;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    auto candidate = u;
    for (int i = 0; i < n_orbitals; ++i) {
      for (int k = 0; k < n; ++k) pot[k] = (nu - 2.0) * v_rho[k] - nu * v_i[i][k];
      ws.implicit_step(candidate[i], pot, tau);
      ws.normalize(candidate[i]);
    }
    densities(candidate);
    std::vector<double> v_rho_new = ws.shell_potential(rho);
    std::vector<std::vector<double>> v_i_new(n_orbitals);
    for (int i = 0; i < n_orbitals; ++i) v_i_new[i] = ws.shell_potential(rho_i[i]);
    const double e_new = total_energy(candidate, v_rho_new, v_i_new);
    ++out.iterations;

    if (e_new > energy + 1e-15 * std::abs(energy)) {
      // damp and retry from the previous state
      tau *= 0.5;
      densities(u);
      if (tau < tau0 * 1e-12) {
        out.note = "oscillation: step size exhausted";
        break;
      }
      continue;
    }
    u = std::move(candidate);
    v_rho = std::move(v_rho_new);
    v_i = std::move(v_i_new);
    const double change = std::abs(e_new - energy);
    energy = e_new;
    out.trace.push_back(energy);
    tau = std::min(tau * 1.05, 10.0 * tau0);
    if (change <= cfg.tolerance * std::max(std::abs(energy), 1e-30)) {
      if (++small_changes >= 3) {
        out.converged = true;
        break;
      }
    } else {
      small_changes = 0;
    }
  }
  out.energy = energy;
  out.u = std::move(u);
  return out;
}

RadialWaveFunction to_orbital(const RadialWaveFunction& grid, const std::vector<double>& u) {
  RadialWaveFunction psi = grid;
  for (int k = 0; k < psi.size(); ++k) psi.values[k] = u[k] / psi.nodes[k];
  return normalize(psi);
}

RadialWaveFunction solver_grid(const SolverConfig& cfg) {
  return make_radial_grid(cfg.radial_points, cfg.r_min_fraction * cfg.r_max, cfg.r_max);
}

// ---------------------------------------------------------------------------
// Cartesian descent in a sine basis: zero boundary values rule out the
// delocalized lattice mode that a periodic wrap would admit, and the
// forward-difference kinetic form diagonalizes exactly (symbol
// sum_a (2 - 2 cos(pi (k_a+1)/(n+1)))/h^2).  For the localized minimizer the
// boundary condition is immaterial.  Attraction is explicit via the
// free-space Poisson solve.

class CartesianFlow {
 public:
  CartesianFlow(int n, double h) : n_(n), h_(h), total_(std::size_t(n) * n * n) {
    buf_.assign(total_, 0.0);
    fwd_ = fftw_plan_r2r_3d(n, n, n, buf_.data(), buf_.data(), FFTW_RODFT00, FFTW_RODFT00,
                            FFTW_RODFT00, FFTW_ESTIMATE);
    symbol_.resize(total_);
    const double inv_h2 = 1.0 / (h * h);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++idx) {
          const double ci = std::cos(kPi * (i + 1) / (n + 1));
          const double cj = std::cos(kPi * (j + 1) / (n + 1));
          const double ck = std::cos(kPi * (k + 1) / (n + 1));
          symbol_[idx] = (6.0 - 2.0 * (ci + cj + ck)) * inv_h2;
        }
  }

  ~CartesianFlow() { fftw_destroy_plan(fwd_); }

  CartesianFlow(const CartesianFlow&) = delete;
  CartesianFlow& operator=(const CartesianFlow&) = delete;

  // v <- (1/tau + L)^{-1} (v/tau - W v)
  void implicit_step(std::vector<double>& v, const std::vector<double>& pot, double tau) {
    for (std::size_t i = 0; i < total_; ++i) buf_[i] = v[i] * (1.0 / tau - pot[i]);
    fftw_execute(fwd_);
    const double norm = 1.0 / std::pow(2.0 * (n_ + 1), 3);
    for (std::size_t k = 0; k < total_; ++k) buf_[k] *= norm / (1.0 / tau + symbol_[k]);
    fftw_execute(fwd_);  // RODFT00 is its own inverse up to the norm factor
    v = buf_;
  }

  // edge differences with zero ghost values outside the box
  double edge_kinetic(const std::vector<double>& v) const {
    const int n = n_;
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      const std::size_t stride = a == 0 ? std::size_t(n) * n : (a == 1 ? n : 1);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const int c = a == 0 ? i : (a == 1 ? j : k);
            const std::size_t idx = (std::size_t(i) * n + j) * n + k;
            const double next = c + 1 < n ? v[idx + stride] : 0.0;
            const double d = next - v[idx];
            s += d * d;
            if (c == 0) s += v[idx] * v[idx];
          }
    }
    return s * h_;  // (d/h)^2 * h^3
  }

 private:
  int n_;
  double h_;
  std::size_t total_;
  std::vector<double> buf_;
  std::vector<double> symbol_;
  fftw_plan fwd_;
};

}  // namespace

std::string to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::UpperVariational: return "upper_variational";
    case EstimateKind::LowerCertificate: return "lower_certificate";
    case EstimateKind::ReferenceOracle: return "reference_oracle";
  }
  return "unknown";
}

PekarSolve minimize_pekar(double alpha, const SolverConfig& config) {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  const RadialWaveFunction grid = solver_grid(config);
  ScfResult scf = radial_scf(1, 0.0, config, grid);

  PekarSolve out;
  RadialWaveFunction psi = to_orbital(grid, scf.u[0]);
  out.estimate.value = pt_energy(std::vector<RadialWaveFunction>{psi}, 1.0, 0.0);
  out.estimate.kind = EstimateKind::UpperVariational;
  out.estimate.n_particles = 1;
  out.estimate.nu = 0.0;
  out.estimate.alpha = alpha;
  out.estimate.iterations = scf.iterations;
  out.estimate.converged = scf.converged;
  out.estimate.note = "imaginary-time descent, " + to_note(config);
  if (!scf.note.empty()) out.estimate.note += "; " + scf.note;
  out.energy_trace = std::move(scf.trace);
  if (alpha != 1.0) {
    // exact coupling rescale: psi_a(x) = a^{3/2} psi(a x)
    psi = scale_wavefunction(psi, alpha);
    const double a2 = alpha * alpha;
    out.estimate.value *= a2;
    for (double& e : out.energy_trace) e *= a2;
  }
  out.estimate.grid_hash = grid_hash(psi);
  out.orbital = std::move(psi);
  return out;
}

HartreeSolve minimize_hartree(int n_particles, double nu, const SolverConfig& config) {
  if (n_particles < 1) throw Error("need at least one particle");
  if (nu < 0.0) throw Error("nu must be nonnegative");
  const RadialWaveFunction grid = solver_grid(config);

  std::vector<ScfResult> coherent(n_particles + 1);
  std::vector<std::vector<RadialWaveFunction>> coherent_orbitals(n_particles + 1);
  for (int m = 1; m <= n_particles; ++m) {
    coherent[m] = radial_scf(m, nu, config, grid);
    for (const auto& u : coherent[m].u)
      coherent_orbitals[m].push_back(to_orbital(grid, u));
    // report the quadrature energy of the relaxed product, as minimize_pekar does
    coherent[m].energy = pt_energy(coherent_orbitals[m], 1.0, nu);
  }

  // Best grouping into mutually remote clusters; the tiny cross term keeps
  // the choice honest without affecting it numerically.
  std::vector<double> best(n_particles + 1, 0.0);
  std::vector<int> split(n_particles + 1, 0);  // 0 = keep whole
  for (int m = 1; m <= n_particles; ++m) {
    best[m] = coherent[m].energy;
    split[m] = 0;
    for (int k = 1; k <= m / 2; ++k) {
      const double cross = (nu - 2.0) * k * (m - k) / kFarSeparation;
      const double candidate = best[k] + best[m - k] + cross;
      if (candidate < best[m]) {
        best[m] = candidate;
        split[m] = k;
      }
    }
  }

  std::vector<int> parts;
  {
    int m = n_particles;
    while (split[m] != 0) {
      parts.push_back(split[m]);
      m -= split[m];
    }
    parts.push_back(m);
    std::sort(parts.begin(), parts.end());
  }

  HartreeSolve out;
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  for (std::size_t a = 0; a < parts.size(); ++a) {
    const ScfResult& scf = coherent[parts[a]];
    value += scf.energy;
    converged = converged && scf.converged;
    iterations += scf.iterations;
    const double cx = static_cast<double>(a) * kFarSeparation;
    for (const auto& phi : coherent_orbitals[parts[a]]) {
      out.orbitals.push_back(phi);
      out.centers.push_back({cx, 0.0, 0.0});
    }
  }
  // exact pair interaction of disjoint spherical clusters on a line
  for (std::size_t a = 0; a < parts.size(); ++a)
    for (std::size_t b = a + 1; b < parts.size(); ++b)
      value += (nu - 2.0) * parts[a] * parts[b] /
               (static_cast<double>(b - a) * kFarSeparation);

  out.cluster_sizes = parts;
  out.estimate.value = value;
  out.estimate.kind = EstimateKind::UpperVariational;
  out.estimate.n_particles = n_particles;
  out.estimate.nu = nu;
  out.estimate.alpha = 1.0;
  out.estimate.iterations = iterations;
  out.estimate.converged = converged;
  out.estimate.grid_hash = grid_hash(out.orbitals.front());
  {
    std::string structure;
    for (std::size_t a = 0; a < parts.size(); ++a)
      structure += (a ? "+" : "") + std::to_string(parts[a]);
    out.estimate.note = "product ansatz, clusters " + structure + ", " + to_note(config);
    if (parts.size() > 1) out.estimate.note += ", separated";
  }
  out.energy_trace = coherent[n_particles].trace;
  return out;
}

CartesianPekarSolve minimize_pekar_cartesian(double alpha, const CartesianSolverConfig& config) {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  const int n = config.points;
  const double h = config.extent / n;
  const std::size_t total = std::size_t(n) * n * n;

  CartesianWaveFunction state =
      gaussian_cartesian(config.extent, n, 1.5 * std::sqrt(kPi), config.guess_center);
  std::vector<double> v = state.values;
  const double cell = h * h * h;
  auto renorm = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double y : x) s += y * y;
    s = std::sqrt(s * cell);
    if (s <= 0.0) throw ZeroNormError("orbital collapsed to zero");
    for (double& y : x) y /= s;
  };
  renorm(v);

  CartesianFlow flow(n, h);
  auto attraction = [&](const std::vector<double>& x, std::vector<double>& rho,
                        std::vector<double>& pot) {
    for (std::size_t i = 0; i < total; ++i) rho[i] = x[i] * x[i];
    Density d;
    d.kind = GridKind::Cartesian;
    d.extent = config.extent;
    d.points = n;
    d.values = rho;
    d.particle_count = 1.0;
    pot = coulomb_potential(d);
    double pair = 0.0;
    for (std::size_t i = 0; i < total; ++i) pair += rho[i] * pot[i];
    return pair * cell;
  };

  std::vector<double> rho(total), pot(total);
  double pair = attraction(v, rho, pot);
  double energy = flow.edge_kinetic(v) - pair;

  CartesianPekarSolve out;
  out.energy_trace.push_back(energy);
  const double tau0 = config.step > 0.0 ? config.step : 5e-3 * config.extent * config.extent;
  double tau = tau0;
  std::vector<double> w(total);
  int small_changes = 0;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    auto candidate = v;
    for (std::size_t i = 0; i < total; ++i) w[i] = -2.0 * pot[i];
    flow.implicit_step(candidate, w, tau);
    renorm(candidate);
    std::vector<double> rho_new(total), pot_new(total);
    const double pair_new = attraction(candidate, rho_new, pot_new);
    const double e_new = flow.edge_kinetic(candidate) - pair_new;
    ++out.estimate.iterations;
    if (e_new > energy + 1e-15 * std::abs(energy)) {
      tau *= 0.5;
      if (tau < tau0 * 1e-12) break;
      continue;
    }
    v = std::move(candidate);
    pot = std::move(pot_new);
    const double change = std::abs(e_new - energy);
    energy = e_new;
    out.energy_trace.push_back(energy);
    tau = std::min(tau * 1.1, 50.0 * tau0);
    if (change <= config.tolerance * std::max(std::abs(energy), 1e-30)) {
      if (++small_changes >= 3) {
        out.estimate.converged = true;
        break;
      }
    } else {
      small_changes = 0;
    }
  }
  out.estimate.converged = out.estimate.converged && small_changes >= 3;

  state.values = std::move(v);
  state = normalize(state);
  out.estimate.value = pt_energy(std::vector<CartesianWaveFunction>{state}, 1.0, 0.0);
  out.estimate.kind = EstimateKind::UpperVariational;
  out.estimate.n_particles = 1;
  out.estimate.nu = 0.0;
  out.estimate.alpha = alpha;
  out.estimate.note = "cartesian spectral descent, n=" + std::to_string(n) +
                      ", extent=" + std::to_string(config.extent);
  if (alpha != 1.0) {
    state = scale_wavefunction(state, alpha);
    const double a2 = alpha * alpha;
    out.estimate.value *= a2;
    for (double& e : out.energy_trace) e *= a2;
  }
  out.estimate.grid_hash = grid_hash(state);
  out.orbital = std::move(state);
  return out;
}

EnergyEstimate pt_energy_scaled(double nu, double alpha, int n_particles,
                                const PtProvider& provider) {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  EnergyEstimate est;
  try {
    est = provider(n_particles, nu);
  } catch (const std::exception& e) {
    throw ProviderFailureError(std::string("provider failed: ") + e.what());
  }
  est.value *= alpha * alpha;
  est.alpha = alpha;
  est.note += " (coupling rescaled)";
  return est;
}

BindingReport binding_check(int n_particles, double nu, int k, const PtProvider& provider) {
  if (n_particles < 2 || k < 1 || k >= n_particles)
    throw InvalidKError("binding check needs 1 <= k < N with N >= 2");
  BindingReport report;
  try {
    report.whole = provider(n_particles, nu);
    report.left = provider(k, nu);
    report.right = provider(n_particles - k, nu);
  } catch (const std::exception& e) {
    throw ProviderFailureError(std::string("provider failed: ") + e.what());
  }
  report.margin = report.left.value + report.right.value - report.whole.value;
  report.strictly_bound = report.margin > 0.0;
  report.caveat =
      "all three energies are variational upper bounds; a positive margin "
      "suggests binding but cannot certify it";
  if (report.whole.kind != report.left.kind || report.whole.kind != report.right.kind)
    report.caveat += "; estimate kinds differ, verdict not meaningful";
  return report;
}

EnergyEstimate PtValueCache::estimate(int n_particles, double nu) {
  const RadialWaveFunction probe = solver_grid(config_);
  const auto key = std::make_tuple(n_particles, std::bit_cast<std::uint64_t>(nu),
                                   grid_hash(probe));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  EnergyEstimate est = minimize_hartree(n_particles, nu, config_).estimate;
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(key, est).first->second;
}

PtProvider PtValueCache::provider() {
  return [this](int n, double nu) { return estimate(n, nu); };
}

}  // namespace polaron
