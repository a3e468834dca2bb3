#include "polaron/energy.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

constexpr double kPi = std::numbers::pi;

// First derivative at x1 from three points; exact through quadratics.
double deriv3(double x0, double f0, double x1, double f1, double x2, double f2) {
  return f0 * (x1 - x2) / ((x0 - x1) * (x0 - x2)) +
         f1 * (2.0 * x1 - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
         f2 * (x1 - x0) / ((x2 - x0) * (x2 - x1));
}

double deriv3_right(double x0, double f0, double x1, double f1, double x2, double f2) {
  return f0 * (x2 - x1) / ((x0 - x1) * (x0 - x2)) + f1 * (x2 - x0) / ((x1 - x0) * (x1 - x2)) +
         f2 * (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

double equivalent_sphere_constant() {
  // average of 1/|x| over the ball with the volume of a unit cell
  return 1.5 * std::cbrt(4.0 * kPi / 3.0);
}

double kinetic_energy(const RadialWaveFunction& psi) {
  const int n = psi.size();
  if (n < 4) throw GridTooCoarseError("kinetic energy needs at least 4 radial nodes");
  const auto& r = psi.nodes;
  const auto delta = radial_segments(r);
  // Work with u = r psi and r psi' = u' - u/r; exact for constant psi.
  std::vector<double> u(n);
  for (int k = 0; k < n; ++k) u[k] = r[k] * psi.values[k];
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    double du;
    if (k == 0) {
      du = deriv3(0.0, 0.0, r[0], u[0], r[1], u[1]);
    } else if (k + 1 < n) {
      du = deriv3(r[k - 1], u[k - 1], r[k], u[k], r[k + 1], u[k + 1]);
    } else {
      du = deriv3_right(r[n - 3], u[n - 3], r[n - 2], u[n - 2], r[n - 1], u[n - 1]);
    }
    const double rpsi_prime = du - u[k] / r[k];
    sum += delta[k] * rpsi_prime * rpsi_prime;
  }
  return 4.0 * kPi * sum;
}

double kinetic_energy(const CartesianWaveFunction& psi) {
  const int n = psi.points;
  if (n < 4) throw GridTooCoarseError("kinetic energy needs at least 4 points per axis");
  const int dims = 3 * psi.particles;
  const double h = psi.spacing();
  const std::size_t total = psi.values.size();
  std::vector<std::size_t> stride(dims);
  stride[dims - 1] = 1;
  for (int a = dims - 2; a >= 0; --a) stride[a] = stride[a + 1] * n;
  // differences centered at cell faces, periodic wrap
  double sum = 0.0;
  for (int a = 0; a < dims; ++a) {
    const std::size_t s = stride[a];
    for (std::size_t idx = 0; idx < total; ++idx) {
      const int c = static_cast<int>((idx / s) % n);
      const std::size_t plus = (c + 1 < n) ? idx + s : idx - s * (n - 1);
      const double g = (psi.values[plus] - psi.values[idx]) / h;
      sum += g * g;
    }
  }
  double cell = 1.0;
  for (int a = 0; a < dims; ++a) cell *= h;
  return sum * cell;
}

namespace {

// ---------------------------------------------------------------------------
// Free-space Coulomb on cartesian grids: zero-padded spectral convolution
// with the 1/|x| kernel; plans and the transformed kernel are cached per
// grid size (unit spacing, rescaled on use).

class SpectralPoisson {
 public:
  explicit SpectralPoisson(int n) : n_(n), m_(2 * n) {
    const std::size_t real_total = static_cast<std::size_t>(m_) * m_ * m_;
    const std::size_t cplx_total = static_cast<std::size_t>(m_) * m_ * (m_ / 2 + 1);
    real_.assign(real_total, 0.0);
    cplx_.assign(cplx_total, std::complex<double>(0.0, 0.0));
    fwd_ = fftw_plan_dft_r2c_3d(m_, m_, m_, real_.data(),
                                reinterpret_cast<fftw_complex*>(cplx_.data()), FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_3d(m_, m_, m_, reinterpret_cast<fftw_complex*>(cplx_.data()),
                                real_.data(), FFTW_ESTIMATE);
    // kernel at unit spacing: 1/|delta| with the zero cell replaced by the
    // equivalent-sphere average
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        for (int k = 0; k < m_; ++k) {
          const double dx = (i <= m_ / 2) ? i : i - m_;
          const double dy = (j <= m_ / 2) ? j : j - m_;
          const double dz = (k <= m_ / 2) ? k : k - m_;
          const double rr = dx * dx + dy * dy + dz * dz;
          real_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k] =
              rr > 0.0 ? 1.0 / std::sqrt(rr) : equivalent_sphere_constant();
        }
    fftw_execute(fwd_);
    kernel_hat_.resize(cplx_total);
    for (std::size_t k = 0; k < cplx_total; ++k) kernel_hat_[k] = cplx_[k].real();
  }

  ~SpectralPoisson() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  SpectralPoisson(const SpectralPoisson&) = delete;
  SpectralPoisson& operator=(const SpectralPoisson&) = delete;

  // D(rho1, rho2) for densities on the n^3 grid with spacing h.
  double pair_energy(const std::vector<double>& rho1, const std::vector<double>& rho2, double h) {
    std::lock_guard<std::mutex> lock(mutex_);
    load(rho1);
    fftw_execute(fwd_);
    std::vector<std::complex<double>> hat1;
    const bool same = (&rho1 == &rho2);
    if (!same) {
      hat1.assign(cplx_.begin(), cplx_.end());
      load(rho2);
      fftw_execute(fwd_);
    }
    const auto& a = same ? cplx_ : hat1;
    const auto& b = cplx_;
    const int nz = m_ / 2 + 1;
    double sum = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        for (int k = 0; k < nz; ++k, ++idx) {
          const double w = (k == 0 || k == m_ / 2) ? 1.0 : 2.0;  // r2c half-spectrum
          const double dot = a[idx].real() * b[idx].real() + a[idx].imag() * b[idx].imag();
          sum += w * kernel_hat_[idx] * dot;
        }
    const double mm = static_cast<double>(m_) * m_ * m_;
    return sum * std::pow(h, 5) / mm;
  }

  // V = (1/|x|) * rho on the n^3 grid with spacing h.
  std::vector<double> potential(const std::vector<double>& rho, double h) {
    std::lock_guard<std::mutex> lock(mutex_);
    load(rho);
    fftw_execute(fwd_);
    for (std::size_t k = 0; k < cplx_.size(); ++k) cplx_[k] *= kernel_hat_[k];
    fftw_execute(bwd_);
    const double mm = static_cast<double>(m_) * m_ * m_;
    const double scale = h * h / mm;
    std::vector<double> out(static_cast<std::size_t>(n_) * n_ * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          out[(static_cast<std::size_t>(i) * n_ + j) * n_ + k] =
              real_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k] * scale;
    return out;
  }

 private:
  void load(const std::vector<double>& rho) {
    std::fill(real_.begin(), real_.end(), 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        std::memcpy(&real_[(static_cast<std::size_t>(i) * m_ + j) * m_],
                    &rho[(static_cast<std::size_t>(i) * n_ + j) * n_], sizeof(double) * n_);
  }

  int n_, m_;
  std::vector<double> real_;
  std::vector<std::complex<double>> cplx_;
  std::vector<double> kernel_hat_;
  fftw_plan fwd_, bwd_;
  std::mutex mutex_;
};

SpectralPoisson& spectral_poisson(int n) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<SpectralPoisson>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SpectralPoisson>(n);
  return *slot;
}

double coulomb_radial(const Density& rho1, const Density& rho2) {
  const int n = static_cast<int>(rho1.values.size());
  const auto& r = rho1.nodes;
  const auto& w = rho1.weights;
  // kernel min(1/r_k, 1/r_l) depends only on the larger node, so the double
  // sum collapses onto prefix sums; term order is symmetric in rho1 <-> rho2
  double s1 = 0.0, s2 = 0.0, total = 0.0;
  for (int l = 0; l < n; ++l) {
    const double a = w[l] * rho1.values[l];
    const double b = w[l] * rho2.values[l];
    const double bracket = a * b + (a * s2 + b * s1);
    total += bracket / r[l];
    s1 += a;
    s2 += b;
  }
  return total;
}

}  // namespace

double coulomb_interaction(const Density& rho1, const Density& rho2) {
  if (!same_grid(rho1, rho2)) throw GridMismatchError("coulomb_interaction: different grids");
  if (rho1.kind == GridKind::Radial) return coulomb_radial(rho1, rho2);
  const double h = rho1.extent / rho1.points;
  return spectral_poisson(rho1.points).pair_energy(rho1.values, rho2.values, h);
}

std::vector<double> coulomb_potential(const Density& rho) {
  if (rho.kind == GridKind::Cartesian) {
    const double h = rho.extent / rho.points;
    return spectral_poisson(rho.points).potential(rho.values, h);
  }
  const int n = static_cast<int>(rho.values.size());
  std::vector<double> v(n);
  // charge inside r_k acts as 1/r_k, shells outside as 1/r_l
  double inside = 0.0;
  for (int k = 0; k < n; ++k) {
    inside += rho.weights[k] * rho.values[k];
    v[k] = inside / rho.nodes[k];
  }
  double outside = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    v[k] += outside;
    outside += rho.weights[k] * rho.values[k] / rho.nodes[k];
  }
  return v;
}

namespace {

template <class Wf>
double pt_energy_product(const std::vector<Wf>& orbitals, double alpha, double repulsion_u) {
  if (orbitals.empty()) throw Error("pt_energy of zero orbitals");
  for (const auto& phi : orbitals)
    if (std::abs(norm(phi) - 1.0) > 1e-6) throw Error("pt_energy expects normalized orbitals");
  double e = 0.0;
  for (const auto& phi : orbitals) e += kinetic_energy(phi);
  const int n = static_cast<int>(orbitals.size());
  if (repulsion_u != 0.0 && n > 1) {
    std::vector<Density> single;
    single.reserve(n);
    for (const auto& phi : orbitals) single.push_back(density(std::vector<Wf>{phi}));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        e += repulsion_u * coulomb_interaction(single[i], single[j]);
  }
  if (alpha != 0.0) {
    const Density rho = density(orbitals);
    e -= alpha * coulomb_interaction(rho, rho);
  }
  return e;
}

}  // namespace

double pt_energy(const std::vector<RadialWaveFunction>& orbitals, double alpha,
                 double repulsion_u) {
  return pt_energy_product(orbitals, alpha, repulsion_u);
}

double pt_energy(const std::vector<CartesianWaveFunction>& orbitals, double alpha,
                 double repulsion_u) {
  return pt_energy_product(orbitals, alpha, repulsion_u);
}

double pt_energy(const CartesianWaveFunction& pair_state, double alpha, double repulsion_u) {
  if (pair_state.particles != 2) throw Error("pair pt_energy expects a two-particle state");
  if (std::abs(norm(pair_state) - 1.0) > 1e-6) throw Error("pt_energy expects a normalized state");
  const int n = pair_state.points;
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  const double h = pair_state.spacing();
  double e = kinetic_energy(pair_state);
  if (repulsion_u != 0.0) {
    // 1/|x1 - x2| tabulated over displacement indices, diagonal regularized
    const int span = 2 * n - 1;
    std::vector<double> kernel(static_cast<std::size_t>(span) * span * span);
    for (int i = 0; i < span; ++i)
      for (int j = 0; j < span; ++j)
        for (int k = 0; k < span; ++k) {
          const double dx = (i - (n - 1)) * h;
          const double dy = (j - (n - 1)) * h;
          const double dz = (k - (n - 1)) * h;
          const double rr = dx * dx + dy * dy + dz * dz;
          kernel[(static_cast<std::size_t>(i) * span + j) * span + k] =
              rr > 0.0 ? 1.0 / std::sqrt(rr) : equivalent_sphere_constant() / h;
        }
    double rep = 0.0;
    for (std::size_t i = 0; i < n3; ++i) {
      const int x1 = static_cast<int>(i / (n * n));
      const int y1 = static_cast<int>((i / n) % n);
      const int z1 = static_cast<int>(i % n);
      const double* row = pair_state.values.data() + i * n3;
      for (std::size_t j = 0; j < n3; ++j) {
        const int x2 = static_cast<int>(j / (n * n));
        const int y2 = static_cast<int>((j / n) % n);
        const int z2 = static_cast<int>(j % n);
        const std::size_t kidx =
            (static_cast<std::size_t>(x1 - x2 + n - 1) * span + (y1 - y2 + n - 1)) * span +
            (z1 - z2 + n - 1);
        rep += row[j] * row[j] * kernel[kidx];
      }
    }
    double cell6 = 1.0;
    for (int a = 0; a < 6; ++a) cell6 *= h;
    e += repulsion_u * rep * cell6;
  }
  if (alpha != 0.0) {
    const Density rho = density(pair_state);
    e -= alpha * coulomb_interaction(rho, rho);
  }
  return e;
}

RadialWaveFunction scale_wavefunction(const RadialWaveFunction& psi, double lambda) {
  if (!(lambda > 0.0)) throw InvalidScaleError("scale factor must be positive");
  if (lambda == 1.0) return psi;
  RadialWaveFunction out = psi;
  const double amp = std::pow(lambda, 1.5);
  const double vol = lambda * lambda * lambda;
  for (int k = 0; k < out.size(); ++k) {
    out.nodes[k] /= lambda;
    out.values[k] *= amp;
    out.weights[k] /= vol;
  }
  return out;
}

CartesianWaveFunction scale_wavefunction(const CartesianWaveFunction& psi, double lambda) {
  if (!(lambda > 0.0)) throw InvalidScaleError("scale factor must be positive");
  if (lambda == 1.0) return psi;
  CartesianWaveFunction out = psi;
  out.extent /= lambda;
  const double amp = std::pow(lambda, 1.5 * psi.particles);
  for (double& v : out.values) v *= amp;
  return out;
}

}  // namespace polaron
