#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wkg/grid.hpp"

namespace wkg::oracle {

/// Refinement ladder for convergence checks: levels strictly decreasing
/// in (h, dt), tolerances per named check.
struct OracleConfig {
  std::vector<std::pair<double, double>> levels;  // (h, dt)
  std::map<std::string, double> tolerances;

  void validate() const;
};

/// Richardson-extrapolated central difference with error estimate.
/// order 1 or 2, along coordinate `direction` (0 = t treated as x0).
struct FdResult {
  double value = 0.0;
  double error_estimate = 0.0;
};
FdResult fd_derivative(const std::function<double(const std::array<double, 4>&)>& f,
                       const std::array<double, 4>& point, int order, int direction,
                       double h0 = 0.25);

/// Mixed second derivative d/di d/dj by nested differences.
FdResult fd_mixed_derivative(const std::function<double(const std::array<double, 4>&)>& f,
                             const std::array<double, 4>& point, int di, int dj,
                             double h0 = 0.25);

/// Classical RK4 on a flat state vector.
void rk4_step(std::vector<double>& y, double t, double dt,
              const std::function<std::vector<double>(double, const std::vector<double>&)>& rhs);

/// Exact-arithmetic 4x4 complex matrices for the gamma-identity checks;
/// deliberately separate from the production matrix types.
using OMat = std::array<std::array<std::complex<double>, 4>, 4>;
OMat omat_zero();
OMat omat_identity();
OMat omat_mul(const OMat& a, const OMat& b);
OMat omat_add(const OMat& a, const OMat& b);
OMat omat_scale(std::complex<double> s, const OMat& a);
OMat omat_adjoint(const OMat& a);
double omat_max_abs(const OMat& a);
/// The standard Dirac representation, built here from scratch.
std::array<OMat, 4> standard_gammas();

/// Tensor Gauss-Legendre quadrature of f over the box [-L, L]^3.
double box_quadrature(const std::function<double(double, double, double)>& f, double half_width,
                      int points_per_axis = 48);

/// Adaptive Simpson on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

// ------------------------------------------------------------------ MOL

/// Slow reference trajectories on small periodic boxes: RK4 in time with
/// 4th-order centered stencils in space, sharing nothing with the
/// spectral integrators. Fields are flat vectors over the box's nodes.
struct RefKgzState {
  std::array<std::vector<double>, 3> E, Et;
  std::vector<double> n0, n0t, n1, n1t;
  double t = 0.0;
};

struct RefDkgState {
  std::array<std::vector<std::complex<double>>, 4> psi;
  std::vector<double> V0, V0t, V1, V1t;
  double t = 0.0;
};

RefKgzState ref_kgz_step(const RefKgzState& s, const GridSpec& g, double dt);
RefDkgState ref_dkg_step(const RefDkgState& s, const GridSpec& g, double dt);

}  // namespace wkg::oracle
