#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "wkg/gamma.hpp"
#include "wkg/oracles.hpp"

using namespace wkg;

namespace {

std::mt19937_64 rng(42);

Spinor4 random_spinor() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Spinor4 s;
  for (int c = 0; c < 4; ++c) s[static_cast<std::size_t>(c)] = Complex(u(rng), u(rng));
  return s;
}

UnitDirection random_direction() {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vec3 v = {n(rng), n(rng), n(rng)};
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (r > 0.1) return UnitDirection({v[0] / r, v[1] / r, v[2] / r});
  }
}

Mat4c random_unitary() {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4c a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(n(rng), n(rng));
  const Eigen::HouseholderQR<Mat4c> qr(a);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("clifford relations hold exactly in the shipped representation") {
  const GammaSet g = GammaSet::standard();
  CHECK(g.clifford_residual() <= 1e-15);

  // cross-check each anticommutator against the independent matrix oracle
  const auto og = wkg::oracle::standard_gammas();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      auto anti = wkg::oracle::omat_add(wkg::oracle::omat_mul(og[static_cast<std::size_t>(mu)], og[static_cast<std::size_t>(nu)]),
                                        wkg::oracle::omat_mul(og[static_cast<std::size_t>(nu)], og[static_cast<std::size_t>(mu)]));
      auto target = wkg::oracle::omat_scale(-2.0 * GammaSet::eta(mu, nu), wkg::oracle::omat_identity());
      auto diff = wkg::oracle::omat_add(anti, wkg::oracle::omat_scale(-1.0, target));
      CHECK(wkg::oracle::omat_max_abs(diff) == 0.0);
    }
}

TEST_CASE("zeroed gamma1 gives residual 2") {
  GammaSet g = GammaSet::standard();
  g.set_gamma(1, Mat4c::Zero());
  CHECK(g.clifford_residual() == doctest::Approx(2.0));
}

TEST_CASE("relations survive unitary conjugation") {
  const GammaSet g = GammaSet::standard().conjugated(random_unitary());
  CHECK(g.clifford_residual() <= 1e-13);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
    worst = std::fmax(worst,
                      g.bilinear_decomposition_residual(random_spinor(), random_spinor(),
                                                        random_direction()));
  CHECK(worst <= 1e-13);
}

TEST_CASE("projections") {
  const GammaSet g = GammaSet::standard();
  SUBCASE("[phi]+ + [phi]- = 2 phi exactly") {
    for (int i = 0; i < 100; ++i) {
      const Spinor4 phi = random_spinor();
      const auto [p, m] = g.project_pm(phi, random_direction());
      for (int c = 0; c < 4; ++c)
        CHECK(std::abs(p[static_cast<std::size_t>(c)] + m[static_cast<std::size_t>(c)] -
                       2.0 * phi[static_cast<std::size_t>(c)]) <= 1e-15);
    }
  }
  SUBCASE("P = I - A satisfies P^2 = 2P; complementary operator too; product is 0") {
    for (int i = 0; i < 1000; ++i) {
      const UnitDirection w = random_direction();
      const Mat4c a = g.omega_matrix(w);
      const Mat4c p = Mat4c::Identity() - a;
      const Mat4c q = Mat4c::Identity() + a;
      CHECK((p * p - 2.0 * p).cwiseAbs().maxCoeff() <= 1e-13);
      CHECK((q * q - 2.0 * q).cwiseAbs().maxCoeff() <= 1e-13);
      CHECK((p * q).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
  SUBCASE("omega = e3, eigenvector of g0 g3 with eigenvalue +1 has [phi]- = 0") {
    const UnitDirection w({0.0, 0.0, 1.0});
    const Mat4c m = g.gamma0_gamma(3);
    const Eigen::ComplexEigenSolver<Mat4c> es(m);
    // pick the +1 eigenvector
    for (int k = 0; k < 4; ++k) {
      if (std::abs(es.eigenvalues()(k) - Complex(1.0, 0.0)) < 1e-12) {
        const Spinor4 phi = from_eigen(es.eigenvectors().col(k));
        const auto [p, mi] = g.project_pm(phi, w);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(mi[static_cast<std::size_t>(c)]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("bilinear decomposition identity") {
  const GammaSet g = GammaSet::standard();
  SUBCASE("zero inputs") {
    const Spinor4 z{};
    CHECK(g.bilinear_decomposition_residual(z, z, UnitDirection({1, 0, 0})) == 0.0);
  }
  SUBCASE("10^4 random samples") {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i)
      worst = std::fmax(worst, g.bilinear_decomposition_residual(random_spinor(), random_spinor(),
                                                                 random_direction()));
    CHECK(worst <= 1e-13);
  }
  SUBCASE("[Phi2]- = 0 reduces the identity to the single plus-minus term") {
    // project a random spinor onto the plus eigenspace: [phi]_- of [phi]_+ is 0
    for (int i = 0; i < 100; ++i) {
      const UnitDirection w = random_direction();
      const Spinor4 raw = random_spinor();
      const auto [plus, minus] = g.project_pm(raw, w);
      (void)minus;
      const Spinor4 phi2 = plus;  // (I + A) raw, annihilated by (I - A)
      const Spinor4 phi1 = random_spinor();
      const auto [p1p, p1m] = g.project_pm(phi1, w);
      (void)p1p;
      const Complex lhs = to_eigen(phi1).dot(g.gamma(0) * to_eigen(phi2));
      const auto [p2p, p2m] = g.project_pm(phi2, w);
      (void)p2m;
      const Complex rhs = 0.25 * to_eigen(p1m).dot(g.gamma(0) * to_eigen(p2p));
      CHECK(std::abs(lhs - rhs) <= 1e-13);
    }
  }
}

TEST_CASE("dirac symbol") {
  const GammaSet g = GammaSet::standard();
  SUBCASE("k = 0") { CHECK(g.dirac_symbol({0, 0, 0}).cwiseAbs().maxCoeff() == 0.0); }
  SUBCASE("unit k has eigenvalues +-1 with multiplicity 2") {
    const UnitDirection w = random_direction();
    const Mat4c d = g.dirac_symbol(w.omega);
    Eigen::ComplexEigenSolver<Mat4c> es(d);
    int plus = 0, minus = 0;
    for (int k = 0; k < 4; ++k) {
      const Complex ev = es.eigenvalues()(k);
      CHECK(std::abs(ev.imag()) <= 1e-13);
      if (ev.real() > 0.0) {
        ++plus;
        CHECK(ev.real() == doctest::Approx(1.0).epsilon(1e-12));
      } else {
        ++minus;
        CHECK(ev.real() == doctest::Approx(-1.0).epsilon(1e-12));
      }
    }
    CHECK(plus == 2);
    CHECK(minus == 2);
  }
  SUBCASE("D(k)^2 = |k|^2 I for 1000 random k; D self-adjoint") {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
      const Vec3 k = {u(rng), u(rng), u(rng)};
      const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      const Mat4c d = g.dirac_symbol(k);
      CHECK((d * d - k2 * Mat4c::Identity()).cwiseAbs().maxCoeff() <= 1e-14 * std::fmax(1.0, k2));
      CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("psi* g0 psi is real") {
  const GammaSet g = GammaSet::standard();
  for (int i = 0; i < 1000; ++i) {
    const Spinor4 psi = random_spinor();
    const Complex z = to_eigen(psi).dot(g.gamma(0) * to_eigen(psi));
    CHECK(std::abs(z.imag()) <= 1e-14);
    CHECK(dirac_density(g, psi) == doctest::Approx(z.real()));
  }
}
