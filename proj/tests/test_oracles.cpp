#include <doctest.h>

#include <cmath>

#include "wkg/oracles.hpp"

using namespace wkg::oracle;

TEST_CASE("oracle config validation") {
  OracleConfig ok{{{0.2, 0.1}, {0.1, 0.05}}, {{"a", 1e-6}}};
  CHECK_NOTHROW(ok.validate());
  OracleConfig bad{{{0.1, 0.1}, {0.2, 0.05}}, {}};
  CHECK_THROWS(bad.validate());
  OracleConfig badtol{{{0.2, 0.1}, {0.1, 0.05}}, {{"a", -1.0}}};
  CHECK_THROWS(badtol.validate());
}

TEST_CASE("fd derivative") {
  SUBCASE("x^2 at 1") {
    auto f = [](const std::array<double, 4>& q) { return q[1] * q[1]; };
    const auto r = fd_derivative(f, {0, 1, 0, 0}, 1, 1);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("sin at 0") {
    auto f = [](const std::array<double, 4>& q) { return std::sin(q[1]); };
    const auto r = fd_derivative(f, {0, 0, 0, 0}, 1, 1);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("mixed derivative of exp(x y) at (1,1) is 2e") {
    auto f = [](const std::array<double, 4>& q) { return std::exp(q[1] * q[2]); };
    const auto r = fd_mixed_derivative(f, {0, 1, 1, 0}, 1, 2);
    CHECK(r.value == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-8));
  }
  SUBCASE("second derivative") {
    auto f = [](const std::array<double, 4>& q) { return std::cos(2.0 * q[3]); };
    const auto r = fd_derivative(f, {0, 0, 0, 0.3}, 2, 3);
    CHECK(r.value == doctest::Approx(-4.0 * std::cos(0.6)).epsilon(1e-8));
  }
}

TEST_CASE("matrix oracle gamma identities") {
  const auto g = standard_gammas();
  SUBCASE("{g0, g0} = 2 I") {
    const OMat anti = omat_add(omat_mul(g[0], g[0]), omat_mul(g[0], g[0]));
    const OMat diff = omat_add(anti, omat_scale(-2.0, omat_identity()));
    CHECK(omat_max_abs(diff) == 0.0);
  }
  SUBCASE("g0 g^a g0 + g^a = 0") {
    for (int a = 1; a <= 3; ++a) {
      const OMat m = omat_add(omat_mul(omat_mul(g[0], g[static_cast<std::size_t>(a)]), g[0]),
                              g[static_cast<std::size_t>(a)]);
      CHECK(omat_max_abs(m) == 0.0);
    }
  }
  SUBCASE("P^2 = 2P for random unit omega") {
    const double w[3] = {0.48, -0.64, 0.6};  // unit up to rounding
    OMat a = omat_zero();
    for (int i = 0; i < 3; ++i)
      a = omat_add(a, omat_scale(w[i], omat_mul(g[0], g[static_cast<std::size_t>(i) + 1])));
    const OMat p = omat_add(omat_identity(), omat_scale(-1.0, a));
    const OMat diff = omat_add(omat_mul(p, p), omat_scale(-2.0, p));
    CHECK(omat_max_abs(diff) <= 1e-15);
  }
}

TEST_CASE("quadrature oracles") {
  // int exp(-2 r^2) over the box = (pi/2)^{3/2}; 96 nodes per axis keep
  // the narrow bump in the spectral-convergence regime
  const double q = box_quadrature(
      [](double x, double y, double z) { return std::exp(-2.0 * (x * x + y * y + z * z)); }, 8.0,
      96);
  CHECK(q == doctest::Approx(std::pow(M_PI / 2.0, 1.5)).epsilon(1e-9));
  const double s = adaptive_simpson([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
  CHECK(s == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("reference integrator: free kg mode dispersion") {
  const wkg::GridSpec g = wkg::GridSpec::box3d(M_PI, 16);  // h = pi/8
  const double k = 2.0;                                     // lattice mode: k = (pi/L) m = m
  RefDkgState s;
  const std::int64_t nn = g.node_count();
  for (int c = 0; c < 4; ++c) s.psi[static_cast<std::size_t>(c)].assign(static_cast<std::size_t>(nn), {0, 0});
  s.V0.assign(static_cast<std::size_t>(nn), 0.0);
  s.V0t.assign(static_cast<std::size_t>(nn), 0.0);
  s.V1.assign(static_cast<std::size_t>(nn), 0.0);
  s.V1t.assign(static_cast<std::size_t>(nn), 0.0);
  for (std::int64_t i = 0; i < nn; ++i) {
    const auto p = g.point_of(i);
    s.V0[static_cast<std::size_t>(i)] = 0.01 * std::cos(k * p[0]);
  }
  const double dt = 0.05;
  const int steps = 20;  // t = 1
  RefDkgState cur = s;
  for (int j = 0; j < steps; ++j) cur = ref_dkg_step(cur, g, dt);
  const double om = std::sqrt(1.0 + k * k);
  double worst = 0.0;
  for (std::int64_t i = 0; i < nn; ++i) {
    const auto p = g.point_of(i);
    worst = std::fmax(worst, std::abs(cur.V0[static_cast<std::size_t>(i)] -
                                      0.01 * std::cos(om * 1.0) * std::cos(k * p[0])));
  }
  // dominant error: FD4 dispersion  delta omega ~ h^4 k^6 / (90 * 2 omega),
  // a phase error of ~4e-3 at t=1 on the 0.01 amplitude
  const double phase = std::pow(g.spacing(), 4) * std::pow(k, 6) / (90.0 * 2.0 * om);
  CHECK(worst <= 2.0 * 0.01 * phase);
}

TEST_CASE("reference integrator zero data stays zero") {
  const wkg::GridSpec g = wkg::GridSpec::box3d(4.0, 16);
  RefKgzState s;
  const std::size_t nn = static_cast<std::size_t>(g.node_count());
  for (int c = 0; c < 3; ++c) {
    s.E[static_cast<std::size_t>(c)].assign(nn, 0.0);
    s.Et[static_cast<std::size_t>(c)].assign(nn, 0.0);
  }
  s.n0.assign(nn, 0.0);
  s.n0t.assign(nn, 0.0);
  s.n1.assign(nn, 0.0);
  s.n1t.assign(nn, 0.0);
  RefKgzState cur = s;
  for (int j = 0; j < 10; ++j) cur = ref_kgz_step(cur, g, 0.1);
  for (std::size_t i = 0; i < nn; ++i) {
    CHECK(cur.E[0][i] == 0.0);
    CHECK(cur.n1[i] == 0.0);
  }
  CHECK(cur.t == doctest::Approx(1.0));
}

TEST_CASE("cfl guard") {
  const wkg::GridSpec g = wkg::GridSpec::box3d(4.0, 16);  // h = 0.5
  RefKgzState s;
  const std::size_t nn = static_cast<std::size_t>(g.node_count());
  for (int c = 0; c < 3; ++c) {
    s.E[static_cast<std::size_t>(c)].assign(nn, 0.0);
    s.Et[static_cast<std::size_t>(c)].assign(nn, 0.0);
  }
  s.n0.assign(nn, 0.0);
  s.n0t.assign(nn, 0.0);
  s.n1.assign(nn, 0.0);
  s.n1t.assign(nn, 0.0);
  CHECK_THROWS(ref_kgz_step(s, g, 0.3));
}
