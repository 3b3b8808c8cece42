#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "wkg/field.hpp"
#include "wkg/grid.hpp"

namespace wkg {

/// FFT workhorse for the periodic box [-L, L)^3. Plans are created once
/// per (n, L) with FFTW_ESTIMATE (deterministic across runs) and executed
/// on caller buffers. Transforms are unnormalized; to_field divides by n^3.
///
/// Wavenumbers: k_m = (pi / L) * m with m in [-n/2, n/2). The Nyquist mode
/// is kept in |k| (even multipliers) and zeroed in first derivatives and in
/// the Dirac symbol (odd multipliers), the usual convention on real data.
class SpectralBox3d {
public:
  using CBuf = std::vector<Complex>;

  explicit SpectralBox3d(const GridSpec& grid);
  ~SpectralBox3d();
  SpectralBox3d(const SpectralBox3d&) = delete;
  SpectralBox3d& operator=(const SpectralBox3d&) = delete;

  const GridSpec& grid() const { return grid_; }
  std::int64_t n() const { return grid_.points_per_axis(); }
  std::int64_t nodes() const { return grid_.node_count(); }

  /// Signed wavenumber for even multipliers (Nyquist = +pi/h).
  double k_even(std::int64_t m) const { return k_even_[static_cast<std::size_t>(m)]; }
  /// Signed wavenumber for odd multipliers (Nyquist zeroed).
  double k_odd(std::int64_t m) const { return k_odd_[static_cast<std::size_t>(m)]; }

  void forward(CBuf& buf) const;   // in place, unnormalized
  void backward(CBuf& buf) const;  // in place, unnormalized

  CBuf to_spectrum(const ScalarField& f) const;
  CBuf to_spectrum_component(const SpinorField& f, int comp) const;
  ScalarField to_field_real(const CBuf& spec, double t) const;

  ScalarField derivative(const ScalarField& f, int axis) const;  // axis in 1..3
  ScalarField laplacian(const ScalarField& f) const;
  Vec3Field derivative(const Vec3Field& f, int axis) const;
  SpinorField derivative(const SpinorField& f, int axis) const;
  ScalarField laplacian_scalar_of(const ScalarField& f) const { return laplacian(f); }

  /// 2/3-rule truncation: zero modes with |m| > n/3 on any axis.
  void dealias(CBuf& spec) const;
  void dealias_inplace(ScalarField& f) const;
  void dealias_inplace(Vec3Field& f) const;
  void dealias_inplace(SpinorField& f) const;

  /// Loop helper: calls fn(flat_index, kx, ky, kz) over all modes with the
  /// even-k table (use for |k|-type multipliers).
  void for_each_mode(const std::function<void(std::int64_t, double, double, double)>& fn) const;
  /// Same with the odd-k table (first-derivative-type multipliers).
  void for_each_mode_odd(const std::function<void(std::int64_t, double, double, double)>& fn) const;

  /// Process-wide engine cache; engines are stateless after construction.
  static SpectralBox3d& shared(const GridSpec& grid);

private:
  GridSpec grid_;
  std::vector<double> k_even_, k_odd_;
  void* plan_fwd_ = nullptr;  // fftw_plan
  void* plan_bwd_ = nullptr;
};

/// Sine-spectral engine for the radial half-line with cell-centered nodes
/// r_j = (j+1/2) h. The w = r u unknowns are odd around r = 0 and vanish at
/// the outer edge, which is exactly the DST-II basis sin(kappa_m r),
/// kappa_m = pi (m+1) / R. Mode-wise rotations give the exact free wave and
/// Klein-Gordon groups of the 3d radial reduction.
class RadialLine {
public:
  using RBuf = std::vector<double>;

  explicit RadialLine(const GridSpec& grid);
  ~RadialLine();
  RadialLine(const RadialLine&) = delete;
  RadialLine& operator=(const RadialLine&) = delete;

  const GridSpec& grid() const { return grid_; }
  std::int64_t n() const { return grid_.points_per_axis(); }
  double kappa(std::int64_t m) const {
    return M_PI * static_cast<double>(m + 1) / grid_.extent();
  }

  void forward(RBuf& buf) const;   // DST-II, unnormalized
  void backward(RBuf& buf) const;  // DST-III; forward∘backward = 2n id

  /// d^2/dr^2 acting on an odd-extension (w-type) sequence, spectral.
  RBuf second_derivative_odd(const RBuf& w) const;

  /// 3d Laplacian of an even radial scalar: (1/r) d^2/dr^2 (r f).
  ScalarField laplacian(const ScalarField& f) const;

  void dealias(RBuf& spec) const;

  static RadialLine& shared(const GridSpec& grid);

private:
  GridSpec grid_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

/// Fourth-order centered stencils on the radial line. Ghost nodes below
/// r=0 come from parity (even for physical scalars, odd for w = r u);
/// beyond the outer edge the field is taken as zero (decaying data).
enum class RadialParity { Even, Odd };

std::vector<double> radial_d1(const std::vector<double>& f, double h, RadialParity parity);
std::vector<double> radial_d2(const std::vector<double>& f, double h, RadialParity parity);

}  // namespace wkg
