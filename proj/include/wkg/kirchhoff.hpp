#pragma once

#include <cstdint>
#include <functional>

#include "wkg/field.hpp"

namespace wkg {

/// Cauchy data for the free 3d wave equation.
struct WaveData {
  ScalarField u0;
  ScalarField u1;
  double t0 = 0.0;
};

/// Closed-form Cauchy data; the expanded three-term spherical-mean formula
/// needs the gradient of u0 in closed form.
struct ClosedFormWave {
  std::function<double(const Vec3&)> u0;
  std::function<Vec3(const Vec3&)> grad_u0;
  std::function<double(const Vec3&)> u1;
  double t0 = 0.0;
};

/// Value of the free wave at (t, x) by spherical means,
///   u = (1/4pi) S[u0] + (t-t0)/4pi S[grad u0 . xi] + (t-t0)/4pi S[u1],
/// with S[f] integrating f(x + (t-t0) xi) over the unit sphere. Quadrature
/// is product Gauss-Legendre in cos(theta) x uniform in azimuth.
double kirchhoff_eval(const ClosedFormWave& data, double t, const Vec3& x, int n_theta = 64,
                      int n_phi = 128);

/// Same, with the error estimated against one refinement of the rule.
/// Throws if the estimate exceeds tol.
double kirchhoff_eval_checked(const ClosedFormWave& data, double t, const Vec3& x, double tol,
                              int n_theta = 64, int n_phi = 128);

struct PositivityVerdict {
  bool certified = false;
  std::int64_t witness_node = -1;  // first node violating u0 >= 0 or u1 >= |grad u0|
};

/// Certified iff u0 >= 0 and u1 >= |grad u0| at every node; the gradient
/// comes from the grid's high-order derivative (spectral on the box,
/// 4th-order stencils on the radial line). Certified data keep the
/// spherical-mean solution nonnegative for all t >= t0.
PositivityVerdict positivity_certificate(const WaveData& data);

}  // namespace wkg
