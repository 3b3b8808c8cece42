#include <doctest.h>

#include <cmath>
#include <random>

#include "wkg/energies.hpp"
#include "wkg/norms.hpp"
#include "wkg/propagators.hpp"

using namespace wkg;

namespace {

const GridSpec kGrid = GridSpec::box3d(8.0, 32);

ScalarPair random_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField a(kGrid, 0.0), b(kGrid, 0.0);
  for (std::int64_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  return ScalarPair(std::move(a), std::move(b));
}

double pair_distance(const ScalarPair& x, const ScalarPair& y) {
  ScalarField du = x.u;
  du -= y.u;
  ScalarField dv = x.ut;
  dv -= y.ut;
  return l2_norm(du) + l2_norm(dv);
}

}  // namespace

TEST_CASE("single Fourier mode follows the Klein-Gordon dispersion") {
  const double k = M_PI / kGrid.extent() * 3.0;  // a lattice mode
  const ScalarField u0 =
      sample<double>(kGrid, 0.0, [&](const Vec3& p) { return std::cos(k * p[0]); });
  const ScalarField u1(kGrid, 0.0);
  const double dt = 0.37;
  const ScalarPair out = propagate_kg(ScalarPair(u0, u1), dt);
  const double omega = std::sqrt(1.0 + k * k);
  for (std::int64_t i = 0; i < out.u.size(); ++i) {
    const auto p = kGrid.point_of(i);
    CHECK(out.u[i] ==
          doctest::Approx(std::cos(dt * omega) * std::cos(k * p[0])).epsilon(1e-12));
  }
}

TEST_CASE("dirac propagator") {
  const GammaSet g = GammaSet::standard();
  SUBCASE("constant spinor is unchanged (k = 0 mode)") {
    SpinorField psi(kGrid, 0.0);
    const Spinor4 c = {Complex(0.3, 0.1), Complex(-0.2, 0), Complex(0, 0.7), Complex(1, -1)};
    for (std::int64_t i = 0; i < psi.size(); ++i) psi[i] = c;
    const SpinorField out = propagate_dirac(psi, 0.8, g);
    for (std::int64_t i = 0; i < out.size(); i += 101)
      for (int cc = 0; cc < 4; ++cc)
        CHECK(std::abs(out[i][static_cast<std::size_t>(cc)] - c[static_cast<std::size_t>(cc)]) <=
              1e-12);
  }
  SUBCASE("L2 norm is conserved for arbitrary data") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpinorField psi(kGrid, 0.0);
    for (std::int64_t i = 0; i < psi.size(); ++i)
      for (int cc = 0; cc < 4; ++cc)
        psi[i][static_cast<std::size_t>(cc)] = Complex(u(rng), u(rng));
    const double n0 = l2_norm(psi);
    const SpinorField out = propagate_dirac(psi, 1.7, g);
    CHECK(l2_norm(out) == doctest::Approx(n0).epsilon(1e-12));
  }
  SUBCASE("massive symbol keeps unitarity") {
    SpinorField psi = sample<Spinor4>(kGrid, 0.0, [](const Vec3& p) {
      const double b = std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
      return Spinor4{Complex(b, 0), Complex(0, b), Complex(0.5 * b, 0), Complex(0, 0)};
    });
    const double n0 = l2_norm(psi);
    const SpinorField out = propagate_dirac(psi, 2.3, g, 1.0);
    CHECK(l2_norm(out) == doctest::Approx(n0).epsilon(1e-12));
  }
}

TEST_CASE("group property and time reversal") {
  const ScalarPair s = random_pair(17);
  SUBCASE("wave: S(a) S(b) = S(a+b)") {
    const ScalarPair ab = propagate_wave(propagate_wave(s, 0.4), 0.9);
    const ScalarPair sum = propagate_wave(s, 1.3);
    CHECK(pair_distance(ab, sum) <= 1e-11 * (l2_norm(s.u) + l2_norm(s.ut)));
  }
  SUBCASE("kg: S(t) S(-t) = id") {
    const ScalarPair back = propagate_kg(propagate_kg(s, 1.1), -1.1);
    CHECK(pair_distance(back, s) <= 1e-11 * (l2_norm(s.u) + l2_norm(s.ut)));
  }
  SUBCASE("radial wave group property") {
    const GridSpec rg = GridSpec::radial(20.0, 256);
    const ScalarField u0 = sample<double>(rg, 0.0, [](const Vec3& p) {
      return std::exp(-(p[0] - 5.0) * (p[0] - 5.0));
    });
    const ScalarField u1(rg, 0.0);
    const ScalarPair s0(u0, u1);
    const ScalarPair ab = propagate_wave_radial(propagate_wave_radial(s0, 0.7), 1.3);
    const ScalarPair sum = propagate_wave_radial(s0, 2.0);
    CHECK(pair_distance(ab, sum) <= 1e-11 * l2_norm(u0));
  }
}

TEST_CASE("energy conservation along the exact flows") {
  // compact Gaussian data, t in [0, 10]
  const ScalarField u0 = sample<double>(kGrid, 0.0, [](const Vec3& p) {
    return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
  });
  const ScalarField u1 = sample<double>(kGrid, 0.0, [](const Vec3& p) {
    return 0.5 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 3.0);
  });
  const ScalarPair s0(u0, u1);
  SUBCASE("wave natural energy") {
    const double e0 = natural_energy(s0);
    for (double t : {2.5, 10.0}) {
      const ScalarPair st = propagate_wave(s0, t);
      CHECK(std::abs(natural_energy(st) - e0) / e0 <= 1e-10);
    }
  }
  SUBCASE("kg natural + mass energy") {
    auto kg_energy = [](const ScalarPair& s) {
      const double n = natural_energy(s);
      const double m = l2_norm(s.u);
      return n + m * m;
    };
    const double e0 = kg_energy(s0);
    for (double t : {2.5, 10.0}) {
      const ScalarPair st = propagate_kg(s0, t);
      CHECK(std::abs(kg_energy(st) - e0) / e0 <= 1e-10);
    }
  }
  SUBCASE("radial kg natural + mass energy") {
    const GridSpec rg = GridSpec::radial(30.0, 256);
    const ScalarField r0 = sample<double>(rg, 0.0, [](const Vec3& p) {
      return std::exp(-p[0] * p[0] / 4.0);
    });
    const ScalarPair s(r0, ScalarField(rg, 0.0));
    auto kg_energy = [](const ScalarPair& q) {
      const double n = natural_energy(q);
      const double m = l2_norm(q.u);
      return n + m * m;
    };
    const double e0 = kg_energy(s);
    const ScalarPair st = propagate_kg_radial(s, 10.0);
    // the radial gradient is measured with 4th-order stencils, so the
    // functional itself carries an O(h^4) evaluation error
    CHECK(std::abs(kg_energy(st) - e0) / e0 <= 1e-4);
    const double h = rg.spacing();
    const GridSpec rg2 = GridSpec::radial(30.0, 512);
    const ScalarField r2 = sample<double>(rg2, 0.0, [](const Vec3& p) {
      return std::exp(-p[0] * p[0] / 4.0);
    });
    const ScalarPair s2(r2, ScalarField(rg2, 0.0));
    const ScalarPair st2 = propagate_kg_radial(s2, 10.0);
    const double drift1 = std::abs(kg_energy(st) - e0) / e0;
    const double drift2 = std::abs(kg_energy(st2) - kg_energy(s2)) / kg_energy(s2);
    (void)h;
    CHECK(drift2 <= drift1 / 8.0 + 1e-14);  // shrinks at >= 3rd order
  }
}

TEST_CASE("propagate dispatcher") {
  const ScalarPair s = random_pair(5);
  CHECK_NOTHROW(propagate(PropagatorKind::WaveSW, s, 0.1));
  CHECK_NOTHROW(propagate(PropagatorKind::KleinGordonSKG, s, 0.1));
  CHECK_THROWS(propagate(PropagatorKind::DiracExpD, s, 0.1));
}
