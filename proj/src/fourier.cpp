#include "wkg/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <stdexcept>

namespace wkg {

namespace {
std::map<std::pair<std::int64_t, double>, std::unique_ptr<SpectralBox3d>>& box_cache() {
  static std::map<std::pair<std::int64_t, double>, std::unique_ptr<SpectralBox3d>> c;
  return c;
}
std::map<std::pair<std::int64_t, double>, std::unique_ptr<RadialLine>>& line_cache() {
  static std::map<std::pair<std::int64_t, double>, std::unique_ptr<RadialLine>> c;
  return c;
}
}  // namespace

SpectralBox3d::SpectralBox3d(const GridSpec& grid) : grid_(grid) {
  if (grid.kind() != GridKind::PeriodicBox3d)
    throw std::invalid_argument("SpectralBox3d: needs a periodic 3d box grid");
  const int n = static_cast<int>(grid.points_per_axis());
  k_even_.resize(static_cast<std::size_t>(n));
  k_odd_.resize(static_cast<std::size_t>(n));
  const double dk = M_PI / grid.extent();
  for (int m = 0; m < n; ++m) {
    const int ms = (m <= n / 2) ? m : m - n;
    k_even_[static_cast<std::size_t>(m)] = dk * static_cast<double>(ms);
    k_odd_[static_cast<std::size_t>(m)] = (m == n / 2) ? 0.0 : dk * static_cast<double>(ms);
  }
  CBuf scratch(static_cast<std::size_t>(nodes()));
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  plan_fwd_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SpectralBox3d::~SpectralBox3d() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralBox3d::forward(CBuf& buf) const {
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
}

void SpectralBox3d::backward(CBuf& buf) const {
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
}

SpectralBox3d::CBuf SpectralBox3d::to_spectrum(const ScalarField& f) const {
  CBuf buf(static_cast<std::size_t>(nodes()));
  for (std::int64_t i = 0; i < nodes(); ++i)
    buf[static_cast<std::size_t>(i)] = Complex(f[i], 0.0);
  forward(buf);
  return buf;
}

SpectralBox3d::CBuf SpectralBox3d::to_spectrum_component(const SpinorField& f, int comp) const {
  CBuf buf(static_cast<std::size_t>(nodes()));
  for (std::int64_t i = 0; i < nodes(); ++i)
    buf[static_cast<std::size_t>(i)] = f[i][static_cast<std::size_t>(comp)];
  forward(buf);
  return buf;
}

ScalarField SpectralBox3d::to_field_real(const CBuf& spec, double t) const {
  CBuf buf = spec;
  backward(buf);
  ScalarField out(grid_, t);
  const double inv = 1.0 / static_cast<double>(nodes());
  for (std::int64_t i = 0; i < nodes(); ++i) out[i] = buf[static_cast<std::size_t>(i)].real() * inv;
  return out;
}

void SpectralBox3d::for_each_mode(
    const std::function<void(std::int64_t, double, double, double)>& fn) const {
  const std::int64_t nn = n();
  std::int64_t idx = 0;
  for (std::int64_t kz = 0; kz < nn; ++kz)
    for (std::int64_t ky = 0; ky < nn; ++ky)
      for (std::int64_t kx = 0; kx < nn; ++kx, ++idx) fn(idx, k_even(kx), k_even(ky), k_even(kz));
}

void SpectralBox3d::for_each_mode_odd(
    const std::function<void(std::int64_t, double, double, double)>& fn) const {
  const std::int64_t nn = n();
  std::int64_t idx = 0;
  for (std::int64_t kz = 0; kz < nn; ++kz)
    for (std::int64_t ky = 0; ky < nn; ++ky)
      for (std::int64_t kx = 0; kx < nn; ++kx, ++idx) fn(idx, k_odd(kx), k_odd(ky), k_odd(kz));
}

ScalarField SpectralBox3d::derivative(const ScalarField& f, int axis) const {
  CBuf spec = to_spectrum(f);
  const std::int64_t nn = n();
  std::int64_t idx = 0;
  for (std::int64_t kz = 0; kz < nn; ++kz)
    for (std::int64_t ky = 0; ky < nn; ++ky)
      for (std::int64_t kx = 0; kx < nn; ++kx, ++idx) {
        const double k = axis == 1 ? k_odd(kx) : axis == 2 ? k_odd(ky) : k_odd(kz);
        spec[static_cast<std::size_t>(idx)] *= Complex(0.0, k);
      }
  return to_field_real(spec, f.time());
}

ScalarField SpectralBox3d::laplacian(const ScalarField& f) const {
  CBuf spec = to_spectrum(f);
  const std::int64_t nn = n();
  std::int64_t idx = 0;
  for (std::int64_t kz = 0; kz < nn; ++kz)
    for (std::int64_t ky = 0; ky < nn; ++ky)
      for (std::int64_t kx = 0; kx < nn; ++kx, ++idx) {
        const double k2 = k_even(kx) * k_even(kx) + k_even(ky) * k_even(ky) + k_even(kz) * k_even(kz);
        spec[static_cast<std::size_t>(idx)] *= -k2;
      }
  return to_field_real(spec, f.time());
}

Vec3Field SpectralBox3d::derivative(const Vec3Field& f, int axis) const {
  Vec3Field out(grid_, f.time());
  for (int c = 0; c < 3; ++c) {
    ScalarField comp(grid_, f.time());
    for (std::int64_t i = 0; i < nodes(); ++i) comp[i] = f[i][static_cast<std::size_t>(c)];
    const ScalarField d = derivative(comp, axis);
    for (std::int64_t i = 0; i < nodes(); ++i) out[i][static_cast<std::size_t>(c)] = d[i];
  }
  return out;
}

SpinorField SpectralBox3d::derivative(const SpinorField& f, int axis) const {
  SpinorField out(grid_, f.time());
  const std::int64_t nn = n();
  for (int c = 0; c < 4; ++c) {
    CBuf spec = to_spectrum_component(f, c);
    std::int64_t idx = 0;
    for (std::int64_t kz = 0; kz < nn; ++kz)
      for (std::int64_t ky = 0; ky < nn; ++ky)
        for (std::int64_t kx = 0; kx < nn; ++kx, ++idx) {
          const double k = axis == 1 ? k_odd(kx) : axis == 2 ? k_odd(ky) : k_odd(kz);
          spec[static_cast<std::size_t>(idx)] *= Complex(0.0, k);
        }
    backward(spec);
    const double inv = 1.0 / static_cast<double>(nodes());
    for (std::int64_t i = 0; i < nodes(); ++i)
      out[i][static_cast<std::size_t>(c)] = spec[static_cast<std::size_t>(i)] * inv;
  }
  return out;
}

void SpectralBox3d::dealias(CBuf& spec) const {
  const std::int64_t nn = n();
  const std::int64_t cut = nn / 3;
  auto keep = [&](std::int64_t m) {
    const std::int64_t ms = (m <= nn / 2) ? m : m - nn;
    return std::abs(ms) <= cut;
  };
  std::int64_t idx = 0;
  for (std::int64_t kz = 0; kz < nn; ++kz)
    for (std::int64_t ky = 0; ky < nn; ++ky)
      for (std::int64_t kx = 0; kx < nn; ++kx, ++idx)
        if (!keep(kx) || !keep(ky) || !keep(kz)) spec[static_cast<std::size_t>(idx)] = Complex(0.0, 0.0);
}

void SpectralBox3d::dealias_inplace(ScalarField& f) const {
  CBuf spec = to_spectrum(f);
  dealias(spec);
  const ScalarField g = to_field_real(spec, f.time());
  for (std::int64_t i = 0; i < nodes(); ++i) f[i] = g[i];
}

void SpectralBox3d::dealias_inplace(Vec3Field& f) const {
  for (int c = 0; c < 3; ++c) {
    ScalarField comp(grid_, f.time());
    for (std::int64_t i = 0; i < nodes(); ++i) comp[i] = f[i][static_cast<std::size_t>(c)];
    dealias_inplace(comp);
    for (std::int64_t i = 0; i < nodes(); ++i) f[i][static_cast<std::size_t>(c)] = comp[i];
  }
}

void SpectralBox3d::dealias_inplace(SpinorField& f) const {
  for (int c = 0; c < 4; ++c) {
    CBuf spec = to_spectrum_component(f, c);
    dealias(spec);
    backward(spec);
    const double inv = 1.0 / static_cast<double>(nodes());
    for (std::int64_t i = 0; i < nodes(); ++i)
      f[i][static_cast<std::size_t>(c)] = spec[static_cast<std::size_t>(i)] * inv;
  }
}

SpectralBox3d& SpectralBox3d::shared(const GridSpec& grid) {
  auto key = std::make_pair(grid.points_per_axis(), grid.extent());
  auto& cache = box_cache();
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<SpectralBox3d>(grid)).first;
  return *it->second;
}

// ---------------------------------------------------------------- radial

RadialLine::RadialLine(const GridSpec& grid) : grid_(grid) {
  if (grid.kind() != GridKind::RadialLine1d)
    throw std::invalid_argument("RadialLine: needs a radial grid");
  const int n = static_cast<int>(grid.points_per_axis());
  RBuf scratch(static_cast<std::size_t>(n));
  plan_fwd_ = fftw_plan_r2r_1d(n, scratch.data(), scratch.data(), FFTW_RODFT10,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_r2r_1d(n, scratch.data(), scratch.data(), FFTW_RODFT01,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
}

RadialLine::~RadialLine() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void RadialLine::forward(RBuf& buf) const {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_fwd_), buf.data(), buf.data());
}

void RadialLine::backward(RBuf& buf) const {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_bwd_), buf.data(), buf.data());
}

RadialLine::RBuf RadialLine::second_derivative_odd(const RBuf& w) const {
  RBuf spec = w;
  forward(spec);
  for (std::int64_t m = 0; m < n(); ++m) {
    const double k = kappa(m);
    spec[static_cast<std::size_t>(m)] *= -k * k;
  }
  backward(spec);
  const double inv = 1.0 / (2.0 * static_cast<double>(n()));
  for (auto& v : spec) v *= inv;
  return spec;
}

ScalarField RadialLine::laplacian(const ScalarField& f) const {
  RBuf w(static_cast<std::size_t>(n()));
  for (std::int64_t j = 0; j < n(); ++j)
    w[static_cast<std::size_t>(j)] = grid_.radius_of(j) * f[j];
  const RBuf d2 = second_derivative_odd(w);
  ScalarField out(grid_, f.time());
  for (std::int64_t j = 0; j < n(); ++j)
    out[j] = d2[static_cast<std::size_t>(j)] / grid_.radius_of(j);
  return out;
}

void RadialLine::dealias(RBuf& spec) const {
  const std::int64_t cut = (2 * n()) / 3;
  for (std::int64_t m = cut; m < n(); ++m) spec[static_cast<std::size_t>(m)] = 0.0;
}

RadialLine& RadialLine::shared(const GridSpec& grid) {
  auto key = std::make_pair(grid.points_per_axis(), grid.extent());
  auto& cache = line_cache();
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<RadialLine>(grid)).first;
  return *it->second;
}

// ------------------------------------------------------------- stencils

namespace {
inline double ghosted(const std::vector<double>& f, std::int64_t j, RadialParity parity) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  if (j >= 0 && j < n) return f[static_cast<std::size_t>(j)];
  if (j < 0) {
    // node -1-j' mirrors node j' through r = 0
    const std::int64_t m = -1 - j;
    const double v = f[static_cast<std::size_t>(m)];
    return parity == RadialParity::Even ? v : -v;
  }
  return 0.0;  // beyond the outer edge: decaying data
}
}  // namespace

std::vector<double> radial_d1(const std::vector<double>& f, double h, RadialParity parity) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  std::vector<double> out(f.size());
  for (std::int64_t j = 0; j < n; ++j)
    out[static_cast<std::size_t>(j)] =
        (ghosted(f, j - 2, parity) - 8.0 * ghosted(f, j - 1, parity) +
         8.0 * ghosted(f, j + 1, parity) - ghosted(f, j + 2, parity)) /
        (12.0 * h);
  return out;
}

std::vector<double> radial_d2(const std::vector<double>& f, double h, RadialParity parity) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  std::vector<double> out(f.size());
  for (std::int64_t j = 0; j < n; ++j)
    out[static_cast<std::size_t>(j)] =
        (-ghosted(f, j - 2, parity) + 16.0 * ghosted(f, j - 1, parity) - 30.0 * ghosted(f, j, parity) +
         16.0 * ghosted(f, j + 1, parity) - ghosted(f, j + 2, parity)) /
        (12.0 * h * h);
  return out;
}

}  // namespace wkg
