#include <doctest.h>

#include <cmath>
#include <random>

#include "wkg/diagnostics.hpp"
#include "wkg/norms.hpp"

using namespace wkg;

namespace {

ManufacturedScalar moving_bump() {
  // smooth bump drifting outward: exp(-(|x| - 0.6 t)^2-ish shape built from
  // jet-friendly pieces (no |x|; use a product of axis Gaussians with a
  // t-dependent center along x1)
  return {"moving bump", [](const std::array<Jet, 4>& X) {
            const Jet dx = X[1] - 0.6 * X[0];
            const Jet r2 = dx * dx + X[2] * X[2] + X[3] * X[3];
            return jet_exp(-0.4 * r2) * (1.0 + 0.2 * jet_sin(X[0]));
          }};
}

ManufacturedScalar second_bump() {
  return {"tilted bump", [](const std::array<Jet, 4>& X) {
            const Jet dx = X[1] + 0.3 * X[0];
            const Jet dy = X[2] - 0.2 * X[0];
            const Jet r2 = dx * dx + dy * dy + X[3] * X[3];
            return jet_exp(-0.5 * r2) * (0.7 + 0.1 * jet_cos(2.0 * X[0]));
          }};
}

}  // namespace

TEST_CASE("decay fit") {
  SUBCASE("pure power law recovers the exponent to 1e-9") {
    std::vector<std::pair<double, double>> series;
    for (double t = 2.0; t <= 40.0; t += 0.5) series.emplace_back(t, 3.7 * std::pow(t, -1.5));
    const DecayFit fit = decay_fit(series, "power", 2.0, 40.0);
    CHECK(std::abs(fit.exponent + 1.5) <= 1e-9);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("oscillating prefactor stays within 0.03 of the rate") {
    std::vector<std::pair<double, double>> series;
    for (double t = 2.0; t <= 40.0; t += 0.25)
      series.emplace_back(t, std::pow(t, -1.5) * (1.0 + 0.05 * std::sin(t)));
    const DecayFit fit = decay_fit(series, "osc", 2.0, 40.0);
    CHECK(std::abs(fit.exponent + 1.5) <= 0.03);
  }
  SUBCASE("rejects non-positive series and empty windows") {
    std::vector<std::pair<double, double>> bad = {{1.0, 1.0}, {2.0, -0.5}};
    CHECK_THROWS(decay_fit(bad, "bad", 0.5, 3.0));
    std::vector<std::pair<double, double>> ok = {{1.0, 1.0}, {2.0, 0.5}};
    CHECK_THROWS(decay_fit(ok, "window", 5.0, 9.0));
  }
}

TEST_CASE("scattering residuals") {
  const GridSpec g = GridSpec::box3d(12.0, 32);
  const ScalarField u0 = sample<double>(g, 0.0, [](const Vec3& p) {
    return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
  });
  SUBCASE("free trajectory gives zero residual") {
    const ScalarPair s0(u0, ScalarField(g, 0.0));
    std::vector<ScalarPair> traj;
    for (double t : {1.0, 2.0, 4.0}) traj.push_back(propagate_kg(s0, t));
    for (double d : scattering_residual(PropagatorKind::KleinGordonSKG, traj))
      CHECK(d <= 1e-11 * l2_norm(u0));
  }
  SUBCASE("time-shift invariance") {
    const ScalarPair s0(u0, ScalarField(g, 0.0));
    // pull-back distance depends only on the pair of states, and the free
    // group is autonomous: shifting both times changes nothing
    ScalarPair a = propagate_kg(s0, 1.0);
    ScalarPair b = propagate_kg(s0, 3.0);
    const double d0 = pullback_distance(PropagatorKind::KleinGordonSKG, a, b);
    CHECK(d0 <= 1e-11);
  }
  SUBCASE("source truncated in time freezes the pullback") {
    // wave with a source acting only during [0, 1]: d(t1, t2) ~ 0 for
    // t1, t2 > 1
    ScalarPair s(ScalarField(g, 0.0), ScalarField(g, 0.0));
    const double dt = 0.05;
    std::vector<ScalarPair> snaps;
    for (double t = 0.0; t < 4.0 - 1e-9; t += dt) {
      // Strang-style: half kick, drift, half kick with the bump source
      auto kick = [&](double tau, double tc) {
        if (tc < 1.0) {
          for (std::int64_t i = 0; i < s.ut.size(); ++i) s.ut[i] += tau * u0[i];
        }
      };
      kick(0.5 * dt, t);
      s = propagate_wave(s, dt);
      kick(0.5 * dt, t + dt);
      const double tnew = t + dt;
      if (std::abs(tnew - 2.0) < 1e-9 || std::abs(tnew - 3.0) < 1e-9 ||
          std::abs(tnew - 4.0) < 1e-9) {
        ScalarPair c = s;
        c.set_time(tnew);
        snaps.push_back(std::move(c));
      }
    }
    const auto d = scattering_residual(PropagatorKind::WaveSW, snaps);
    REQUIRE(d.size() == 2);
    CHECK(d[0] <= 1e-10);
    CHECK(d[1] <= 1e-10);
  }
}

TEST_CASE("free kg sup-field decays at t^{-3/2}") {
  // radial reduction of the 3d Klein-Gordon flow; sup over nodes of |u|
  const GridSpec g = GridSpec::radial(120.0, 2400);
  const ScalarPair s0(sample<double>(g, 0.0,
                                     [](const Vec3& p) {
                                       return std::exp(-p[0] * p[0] / 2.25);
                                     }),
                      ScalarField(g, 0.0));
  std::vector<std::pair<double, double>> series;
  for (double t = 5.0; t <= 40.0 + 1e-9; t += 1.0) {
    const ScalarPair st = propagate_kg_radial(s0, t);
    series.emplace_back(t, sup_norm(st.u));
  }
  const DecayFit fit = decay_fit(series, "sup|u|", 5.0, 40.0);
  INFO("exponent ", fit.exponent);
  CHECK(std::abs(fit.exponent + 1.5) <= 0.15);
}

TEST_CASE("vf norm levels match a direct composition") {
  const GridSpec g = GridSpec::box3d(8.0, 16);
  auto f = [](double t, const Vec3& p) {
    return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 3.0) * std::cos(t);
  };
  const auto master = make_bracket(f, g, 0.5, 0.03, 4);
  const auto lv = vf_norm_levels(master, gamma_fields(), 2);
  CHECK(lv[0] == doctest::Approx(l2_norm(master.center())).epsilon(1e-12));
  // level 1 = sum over the ten fields of ||Gamma_k u||
  double direct = 0.0;
  for (auto id : gamma_fields()) direct += l2_norm(apply_vf(id, master));
  CHECK(lv[1] == doctest::Approx(direct).epsilon(1e-10));
  CHECK(lv[2] > 0.0);
}

TEST_CASE("inequality margins") {
  MarginConfig cfg;
  cfg.grid = GridSpec::box3d(8.0, 32);
  cfg.t = 2.0;
  cfg.probes = 500;
  const ManufacturedScalar u = moving_bump();
  const ManufacturedScalar v = second_bump();

  SUBCASE("pointwise lemmas give finite constants") {
    for (auto name : {InequalityName::PartialDecay, InequalityName::HessianExtra,
                      InequalityName::KgWeighted}) {
      const auto rep = inequality_margin(name, u, cfg);
      INFO(inequality_name(name), " C=", rep.empirical_constant);
      CHECK(std::isfinite(rep.empirical_constant));
      CHECK(rep.empirical_constant > 0.0);
      CHECK(rep.probes_used > 0);
    }
  }
  SUBCASE("norm-based lemmas: gaussian at t=0 has ratio below 1") {
    MarginConfig c0 = cfg;
    c0.t = 0.0;
    ManufacturedScalar gauss{"gauss", [](const std::array<Jet, 4>& X) {
                               const Jet r2 = X[1] * X[1] + X[2] * X[2] + X[3] * X[3];
                               return jet_exp(-1.0 * r2);
                             }};
    const auto rep = inequality_margin(InequalityName::KlainermanSobolev, gauss, c0);
    CHECK(rep.empirical_constant < 1.0);
    CHECK(gauss.eval(0.0, {0, 0, 0}) == doctest::Approx(1.0));  // |u(0,0)| = 1
  }
  SUBCASE("null direction annihilates Q0") {
    // f = g = sin(x1 - t): Q0 = 0 identically
    ManufacturedScalar nullf{"null", [](const std::array<Jet, 4>& X) {
                               return jet_sin(X[1] - X[0]);
                             }};
    const auto rep = inequality_margin(InequalityName::Q0Bound, nullf, cfg, &nullf);
    CHECK(rep.lhs_max <= 1e-12);
  }
  SUBCASE("q0 lemmas with two generic subjects") {
    for (auto name : {InequalityName::Q0Bound, InequalityName::Q0Interior}) {
      const auto rep = inequality_margin(name, u, cfg, &v);
      CHECK(std::isfinite(rep.empirical_constant));
      CHECK(rep.empirical_constant > 0.0);
    }
  }
  SUBCASE("scale invariance of the empirical constant") {
    const auto r1 = inequality_margin(InequalityName::PartialDecay, u, cfg);
    ManufacturedScalar cu{"scaled", [fn = u.fn](const std::array<Jet, 4>& X) {
                            return fn(X) * 37.5;
                          }};
    const auto r2 = inequality_margin(InequalityName::PartialDecay, cu, cfg);
    CHECK(r1.empirical_constant == doctest::Approx(r2.empirical_constant).epsilon(1e-12));
  }
  SUBCASE("stability under refinement (<= 2x change)") {
    for (auto name : {InequalityName::KlainermanSobolev, InequalityName::GlobalSobolev}) {
      MarginConfig fine = cfg;
      fine.grid = GridSpec::box3d(8.0, 64);
      const double c1 = inequality_margin(name, u, cfg).empirical_constant;
      const double c2 = inequality_margin(name, u, fine).empirical_constant;
      INFO(inequality_name(name), " ", c1, " -> ", c2);
      CHECK(c2 <= 2.0 * c1);
      CHECK(c1 <= 2.0 * c2);
    }
  }
}

TEST_CASE("dirac decay margin") {
  const GammaSet g = GammaSet::standard();
  ManufacturedSpinor phi{"spinor bump", [](const std::array<CJet, 4>& X) {
                           const CJet r2 = X[1] * X[1] + X[2] * X[2] + X[3] * X[3];
                           const CJet b = cjet_exp(r2 * Complex(-0.4, 0.0) +
                                                   X[0] * Complex(0.0, 1.2));
                           return std::array<CJet, 4>{b, b * Complex(0.5, 0.1),
                                                      b * Complex(0.0, -0.3),
                                                      b * Complex(0.2, 0.0)};
                         }};
  MarginConfig cfg;
  cfg.t = 2.0;
  cfg.probes = 400;
  const auto rep = inequality_margin_dirac(phi, g, cfg);
  CHECK(std::isfinite(rep.empirical_constant));
  CHECK(rep.empirical_constant > 0.0);
}

TEST_CASE("homogeneous wave L2 bound") {
  MarginConfig cfg;
  cfg.grid = GridSpec::box3d(12.0, 32);
  cfg.t = 4.0;
  ClosedFormWave d;
  d.u0 = [](const Vec3& p) { return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0); };
  d.grad_u0 = [](const Vec3& p) {
    const double e = std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
    return Vec3{-p[0] * e, -p[1] * e, -p[2] * e};
  };
  d.u1 = [](const Vec3& p) { return 0.5 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 3.0); };
  const auto rep = inequality_margin_homo_l2(d, cfg);
  CHECK(rep.empirical_constant > 0.0);
  CHECK(rep.empirical_constant < 2.0);  // the lemma holds with a modest constant
}

TEST_CASE("sobolev constant estimator") {
  const GridSpec g = GridSpec::box3d(8.0, 32);
  const auto trials = shipped_trial_family(20);
  REQUIRE(trials.size() == 20);
  SUBCASE("single trial gives a strictly positive bound") {
    const std::vector<WaveTrial> one(trials.begin(), trials.begin() + 1);
    const auto est = sobolev_constant_estimate(one, g, {0.0, 1.0});
    CHECK(est.lower_bound > 0.0);
  }
  SUBCASE("enlarging the family never decreases the estimate") {
    const std::vector<WaveTrial> five(trials.begin(), trials.begin() + 5);
    const std::vector<WaveTrial> ten(trials.begin(), trials.begin() + 10);
    const auto e5 = sobolev_constant_estimate(five, g, {0.0, 1.0});
    const auto e10 = sobolev_constant_estimate(ten, g, {0.0, 1.0});
    CHECK(e10.lower_bound >= e5.lower_bound - 1e-15);
  }
}
