#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "wkg/field.hpp"

namespace wkg {

using Mat4c = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;

inline Vec4c to_eigen(const Spinor4& s) {
  Vec4c v;
  for (int i = 0; i < 4; ++i) v(i) = s[static_cast<std::size_t>(i)];
  return v;
}
inline Spinor4 from_eigen(const Vec4c& v) {
  return {v(0), v(1), v(2), v(3)};
}

/// Direction omega = x/r with |omega| = 1.
struct UnitDirection {
  Vec3 omega;
  explicit UnitDirection(const Vec3& w) : omega(w) {
    const double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (std::abs(n - 1.0) > 1e-12)
      throw std::invalid_argument("UnitDirection: |omega| must be 1");
  }
  static UnitDirection normalized(const Vec3& w) {
    const double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (n == 0.0) throw std::invalid_argument("UnitDirection: zero vector");
    return UnitDirection({w[0] / n, w[1] / n, w[2] / n});
  }
};

/// Dirac matrices with the mostly-plus metric eta = diag(-1,1,1,1):
///     {gamma^mu, gamma^nu} = -2 eta_{mu nu} I4,
///     (gamma^mu)^* = -eta_{mu nu} gamma^nu,
/// so gamma^0 is self-adjoint with (gamma^0)^2 = I and the spatial
/// gamma^a are anti-self-adjoint with (gamma^a)^2 = -I.
///
/// The shipped representation is the Dirac (standard) one,
///     gamma^0 = diag(1,1,-1,-1),  gamma^a = [[0, sigma_a], [-sigma_a, 0]].
/// Only the relations above matter downstream; the tests re-verify every
/// identity after conjugating by a random unitary.
class GammaSet {
public:
  static GammaSet standard() {
    GammaSet g;
    const Complex I(0.0, 1.0);
    g.gamma_[0] = Mat4c::Zero();
    g.gamma_[0](0, 0) = 1;
    g.gamma_[0](1, 1) = 1;
    g.gamma_[0](2, 2) = -1;
    g.gamma_[0](3, 3) = -1;

    Eigen::Matrix2cd s1, s2, s3;
    s1 << 0, 1, 1, 0;
    s2 << 0, -I, I, 0;
    s3 << 1, 0, 0, -1;
    const std::array<Eigen::Matrix2cd, 3> sigma = {s1, s2, s3};
    for (int a = 0; a < 3; ++a) {
      Mat4c m = Mat4c::Zero();
      m.block<2, 2>(0, 2) = sigma[static_cast<std::size_t>(a)];
      m.block<2, 2>(2, 0) = -sigma[static_cast<std::size_t>(a)];
      g.gamma_[static_cast<std::size_t>(a) + 1] = m;
    }
    return g;
  }

  /// gamma^mu -> U gamma^mu U^*; preserves all the relations.
  GammaSet conjugated(const Mat4c& unitary) const {
    GammaSet g;
    for (int mu = 0; mu < 4; ++mu)
      g.gamma_[static_cast<std::size_t>(mu)] =
          unitary * gamma_[static_cast<std::size_t>(mu)] * unitary.adjoint();
    return g;
  }

  const Mat4c& gamma(int mu) const { return gamma_[static_cast<std::size_t>(mu)]; }
  void set_gamma(int mu, const Mat4c& m) { gamma_[static_cast<std::size_t>(mu)] = m; }

  static double eta(int mu, int nu) {
    if (mu != nu) return 0.0;
    return mu == 0 ? -1.0 : 1.0;
  }

  /// gamma^0 gamma^a (self-adjoint; the building block of the Dirac symbol
  /// and of the [.]_{+-} projections).
  Mat4c gamma0_gamma(int a) const { return gamma_[0] * gamma_[static_cast<std::size_t>(a)]; }

  /// Max entrywise violation of the anticommutator relations plus the max
  /// violation of the adjoint relations.
  double clifford_residual() const {
    double anti = 0.0, adj = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        const Mat4c r = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu) +
                        2.0 * eta(mu, nu) * Mat4c::Identity();
        anti = std::fmax(anti, r.cwiseAbs().maxCoeff());
      }
      Mat4c radj = gamma(mu).adjoint();
      for (int nu = 0; nu < 4; ++nu) radj += eta(mu, nu) * gamma(nu);
      adj = std::fmax(adj, radj.cwiseAbs().maxCoeff());
    }
    return anti + adj;
  }

  /// A(omega) = omega_a gamma^0 gamma^a. Self-adjoint with A^2 = I, so
  /// (I -+ A)/2 are complementary orthogonal projectors scaled by 2:
  /// P = I - A satisfies P^2 = 2P.
  Mat4c omega_matrix(const UnitDirection& w) const {
    Mat4c m = Mat4c::Zero();
    for (int a = 0; a < 3; ++a)
      m += w.omega[static_cast<std::size_t>(a)] * gamma0_gamma(a + 1);
    return m;
  }

  /// ([phi]_+, [phi]_-) = (phi + A phi, phi - A phi); their sum is 2 phi.
  std::pair<Spinor4, Spinor4> project_pm(const Spinor4& phi, const UnitDirection& w) const {
    const Mat4c a = omega_matrix(w);
    const Vec4c v = to_eigen(phi);
    const Vec4c av = a * v;
    return {from_eigen(v + av), from_eigen(v - av)};
  }

  /// | Phi1^* g0 Phi2 - (1/4)([Phi1]_-^* g0 [Phi2]_- + [Phi1]_-^* g0 [Phi2]_+
  ///   + [Phi1]_+^* g0 [Phi2]_-) |  — the hidden-structure decomposition of
  /// the Dirac bilinear; identically zero in exact arithmetic.
  double bilinear_decomposition_residual(const Spinor4& phi1, const Spinor4& phi2,
                                         const UnitDirection& w) const {
    const auto [p1p, p1m] = project_pm(phi1, w);
    const auto [p2p, p2m] = project_pm(phi2, w);
    const Mat4c& g0 = gamma_[0];
    const Complex lhs = to_eigen(phi1).dot(g0 * to_eigen(phi2));
    const Complex rhs = 0.25 * (to_eigen(p1m).dot(g0 * to_eigen(p2m)) +
                                to_eigen(p1m).dot(g0 * to_eigen(p2p)) +
                                to_eigen(p1p).dot(g0 * to_eigen(p2m)));
    return std::abs(lhs - rhs);
  }

  /// Dirac symbol D(k) = gamma^0 gamma^a k_a; self-adjoint with
  /// D(k)^2 = |k|^2 I, so exp(-i t D(k)) = cos(t|k|) I - i sin(t|k|)/|k| D(k).
  Mat4c dirac_symbol(const Vec3& k) const {
    Mat4c m = Mat4c::Zero();
    for (int a = 0; a < 3; ++a) m += k[static_cast<std::size_t>(a)] * gamma0_gamma(a + 1);
    return m;
  }

private:
  std::array<Mat4c, 4> gamma_;
};

/// psi^* gamma^0 psi, real by self-adjointness of gamma^0.
inline double dirac_density(const GammaSet& g, const Spinor4& psi) {
  return to_eigen(psi).dot(g.gamma(0) * to_eigen(psi)).real();
}

}  // namespace wkg
