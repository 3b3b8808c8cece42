#include <doctest.h>

#include <random>

#include "wkg/field.hpp"
#include "wkg/norms.hpp"
#include "wkg/oracles.hpp"
#include "wkg/weights.hpp"

using namespace wkg;

TEST_CASE("grid invariants") {
  const GridSpec box = GridSpec::box3d(8.0, 32);
  CHECK(box.spacing() == doctest::Approx(0.5));
  CHECK(box.node_count() == 32 * 32 * 32);

  const GridSpec rad = GridSpec::radial(10.0, 100);
  CHECK(rad.spacing() == doctest::Approx(0.1));
  // half-offset nodes, none at r = 0
  CHECK(rad.radius_of(0) == doctest::Approx(0.05));
  CHECK(rad.radius_of(99) == doctest::Approx(9.95));

  CHECK_NOTHROW(GridSpec::box3d(8.0, 96));  // 2^5 * 3 is fine
  CHECK_THROWS(GridSpec::box3d(8.0, 40));   // factor 5 is not
  CHECK_THROWS(GridSpec::box3d(-1.0, 32));
}

TEST_CASE("sampling basics") {
  const GridSpec g = GridSpec::box3d(4.0, 16);
  const ScalarField one = sample<double>(g, 0.0, [](const Vec3&) { return 1.0; });
  for (std::int64_t i = 0; i < one.size(); ++i) CHECK(one[i] == 1.0);

  // decaying odd function sums to zero on the origin-centered grid up to
  // rounding (the unpaired x = -L plane carries only the Gaussian tail)
  const GridSpec g6 = GridSpec::box3d(6.0, 16);
  const ScalarField odd = sample<double>(g6, 0.0, [](const Vec3& p) {
    return p[0] * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
  });
  double s = 0.0;
  for (std::int64_t i = 0; i < odd.size(); ++i) s += odd[i];
  CHECK(std::abs(s) < 1e-10);

  CHECK_THROWS_AS(sample<double>(g, 0.0,
                                 [](const Vec3& p) {
                                   return p[0] == 0.0 && p[1] == 0.0 && p[2] == 0.0
                                              ? std::numeric_limits<double>::infinity()
                                              : 1.0;
                                 }),
                  std::domain_error);
}

TEST_CASE("gaussian l2 norm against the quadrature oracle") {
  const GridSpec g = GridSpec::box3d(8.0, 32);
  const ScalarField f =
      sample<double>(g, 0.0, [](const Vec3& p) {
        return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
      });
  // || exp(-|x|^2) ||_{L^2}^2 = int exp(-2|x|^2) = (pi/2)^{3/2}
  const double oracle = wkg::oracle::box_quadrature(
      [](double x, double y, double z) { return std::exp(-2.0 * (x * x + y * y + z * z)); }, 8.0);
  CHECK(l2_norm(f) == doctest::Approx(std::sqrt(oracle)).epsilon(1e-6));
  // the closed form of the same integral
  CHECK(l2_norm(f) == doctest::Approx(std::pow(M_PI, 0.75) / std::pow(2.0, 0.75)).epsilon(1e-6));
}

TEST_CASE("norm homogeneity and triangle inequality on random fields") {
  const GridSpec g = GridSpec::box3d(2.0, 8);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField a(g, 0.0), b(g, 0.0);
  for (std::int64_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  const double c = -3.7;
  ScalarField ca = a;
  ca *= c;
  CHECK(l2_norm(ca) == doctest::Approx(std::abs(c) * l2_norm(a)).epsilon(1e-14));
  ScalarField apb = a;
  apb += b;
  CHECK(l2_norm(apb) <= l2_norm(a) + l2_norm(b) + 1e-14);
}

TEST_CASE("weighted norms") {
  const GridSpec g = GridSpec::box3d(4.0, 16);
  const ScalarField zero(g, 0.0);
  CHECK(l2_norm(zero) == 0.0);

  const ScalarField one = sample<double>(g, 0.0, [](const Vec3&) { return 1.0; });
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(8.0 * 8.0 * 8.0)).epsilon(1e-12));

  // <t-r>-weighted norm of a bump supported at r = t is close to plain
  const double t = 2.0;
  const ScalarField bump = sample<double>(g, t, [t](const Vec3& p) {
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return std::exp(-40.0 * (r - t) * (r - t));
  });
  const double plain = l2_norm(bump);
  const double weighted = l2_norm(bump, WeightProfile::bracket_t_minus_r(), t);
  CHECK(weighted == doctest::Approx(plain).epsilon(0.05));
}

TEST_CASE("sup_shell") {
  const GridSpec g = GridSpec::box3d(4.0, 16);
  const ScalarField c = sample<double>(g, 0.0, [](const Vec3&) { return 2.5; });
  const auto shells = sup_shell(c);
  CHECK(shells.global_sup == 2.5);
  // every populated shell sees the constant
  for (std::size_t k = 0; k + 1 < shells.sup.size(); ++k)
    if (shells.sup[k] > 0.0) CHECK(shells.sup[k] == 2.5);

  // field = 1/<r>: shell sup within one spacing of the profile
  const ScalarField f = sample<double>(g, 0.0, [](const Vec3& p) {
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return 1.0 / jbracket(r);
  });
  const auto sh = sup_shell(f);
  for (std::size_t k = 0; k < 8; ++k) {
    const double lo = 1.0 / jbracket(std::fmax(0.0, sh.radius[k] - g.spacing()));
    const double hi = 1.0 / jbracket(sh.radius[k] + g.spacing());
    CHECK(sh.sup[k] <= lo + 1e-12);
    CHECK(sh.sup[k] >= hi - 1e-12);
  }

  // random field: global sup equals the exhaustive scan
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField r(g, 0.0);
  double m = 0.0;
  for (std::int64_t i = 0; i < r.size(); ++i) {
    r[i] = u(rng);
    m = std::fmax(m, std::abs(r[i]));
  }
  CHECK(sup_shell(r).global_sup == m);
}

TEST_CASE("chi cutoff profile") {
  // 10^4 uniform probes on [0, 3]
  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = 3.0 * i / 10000.0;
    const double v = chi_cutoff(x);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (x <= 1.0) CHECK(v == 0.0);
    if (x >= 2.0) CHECK(v == 1.0);
    CHECK(chi_cutoff_prime(x) >= 0.0);
    CHECK(v >= prev - 1e-15);  // nondecreasing
    prev = v;
  }
}

TEST_CASE("ghost weight table") {
  const auto& tab = GhostWeightTable::shared(0.05);
  // q' is the closed form; the table matches its integral via the
  // adaptive-Simpson oracle on a few intervals
  for (double a : {-5.0, -1.0, 0.0, 2.0}) {
    const double b = a + 3.0;
    const double inc = wkg::oracle::adaptive_simpson(
        [&](double s) { return std::pow(1.0 + s * s, -0.55); }, a, b, 1e-12);
    CHECK(tab.q(b) - tab.q(a) == doctest::Approx(inc).epsilon(1e-9));
  }
  // the delta = 0.05 tail is slow: q(-M) ~ M^{-0.1}/0.1
  CHECK(tab.q(-1e9) == doctest::Approx(std::pow(1e9, -0.1) / 0.1).epsilon(1e-2));
  CHECK(tab.q(0.0) > 0.0);
  CHECK(tab.q_prime(0.0) == doctest::Approx(1.0));
  // monotone
  double prev = -1.0;
  for (double r = -100.0; r <= 100.0; r += 0.5) {
    const double v = tab.q(r);
    CHECK(v >= prev);
    prev = v;
  }
}
