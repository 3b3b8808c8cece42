// The acceptance suite: one function per criterion, each wiring the
// production modules against the tolerances the project ships with.
// Everything is deterministic; runs 6 and 7 consume the shipped presets
// so the command-line runner reproduces them verbatim.

#include "wkg/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wkg/diagnostics.hpp"
#include "wkg/energies.hpp"
#include "wkg/experiment.hpp"
#include "wkg/kirchhoff.hpp"
#include "wkg/norms.hpp"
#include "wkg/oracles.hpp"
#include "wkg/systems.hpp"

namespace wkg {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ------------------------------------------------------------ criterion 1

CriterionResult criterion_algebra() {
  const GammaSet g = GammaSet::standard();
  const double clifford = g.clifford_residual();

  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  auto rand_spinor = [&] {
    Spinor4 s;
    for (int c = 0; c < 4; ++c) s[static_cast<std::size_t>(c)] = Complex(u(rng), u(rng));
    return s;
  };
  auto rand_dir = [&] {
    for (;;) {
      const Vec3 v = {n(rng), n(rng), n(rng)};
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (r > 0.1) return UnitDirection({v[0] / r, v[1] / r, v[2] / r});
    }
  };
  double bilinear = 0.0;
  for (int i = 0; i < 10000; ++i)
    bilinear = std::fmax(bilinear,
                         g.bilinear_decomposition_residual(rand_spinor(), rand_spinor(), rand_dir()));
  double projector = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Mat4c p = Mat4c::Identity() - g.omega_matrix(rand_dir());
    projector = std::fmax(projector, (p * p - 2.0 * p).cwiseAbs().maxCoeff());
  }
  CriterionResult r{1, "algebraic identity suite", false, "", 0.0};
  r.pass = clifford <= 1e-15 && bilinear <= 1e-13 && projector <= 1e-13;
  r.detail = "clifford=" + fmt(clifford) + " bilinear(1e4)=" + fmt(bilinear) +
             " projector=" + fmt(projector);
  return r;
}

// ------------------------------------------------------------ criterion 2

CriterionResult criterion_commutators() {
  struct Subject {
    std::string name;
    std::function<double(double, const Vec3&)> f;
  };
  const std::vector<Subject> subjects = {
      {"trig", [](double t, const Vec3& p) { return std::sin(p[0]) * std::cos(2.0 * t); }},
      {"bump",
       [](double t, const Vec3& p) {
         return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 6.0) *
                std::cos(2.0 * t + 0.3 * p[1]);
       }},
      {"cubic",
       [](double t, const Vec3& p) {
         return t * t * p[0] - p[1] * p[1] * p[2] / 3.0 + 0.5 * t * p[2];
       }},
  };
  const std::vector<VectorFieldId> fields = {VectorFieldId::L1, VectorFieldId::Omega12,
                                             VectorFieldId::L0};
  // the box must dwarf the 8h interior margin at the coarsest level
  const double L = 4.0 * M_PI;
  bool pass = true;
  std::ostringstream detail;
  for (const auto& s : subjects) {
    for (auto id : fields) {
      // two refinements: (24, dt) -> (48, dt/2) -> (96, dt/4)
      const auto r1 = commutator_residual(id, s.f, GridSpec::box3d(L, 24), 0.3, 0.1);
      const auto r2 = commutator_residual(id, s.f, GridSpec::box3d(L, 48), 0.3, 0.05);
      const bool ok = r1.order >= 3.5 && r2.order >= 3.5;
      pass = pass && ok;
      detail << s.name << "/" << vf_name(id) << " orders " << fmt(r1.order) << ","
             << fmt(r2.order) << (r2.at_rounding_floor ? "(floor)" : "") << "  ";
    }
  }
  return {2, "commutator suite", pass, detail.str(), 0.0};
}

// ------------------------------------------------------------ criterion 3

CriterionResult criterion_kirchhoff() {
  // certified pair: gaussian u0, u1 = |grad u0| + margin
  auto u0f = [](const Vec3& p) {
    return 0.8 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
  };
  auto gradf = [&](const Vec3& p) {
    const double e = u0f(p);
    return Vec3{-p[0] * e, -p[1] * e, -p[2] * e};
  };
  ClosedFormWave cert;
  cert.u0 = u0f;
  cert.grad_u0 = gradf;
  cert.u1 = [&](const Vec3& p) {
    const Vec3 g = gradf(p);
    return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]) + 0.05;
  };

  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  double min_value = std::numeric_limits<double>::infinity();
  for (double t : {1.0, 5.0, 10.0}) {
    for (int i = 0; i < 10000; ++i) {
      const Vec3 x = {u(rng), u(rng), u(rng)};
      min_value = std::fmin(min_value, kirchhoff_eval(cert, t, x, 32, 64));
    }
  }

  // spectral agreement on smooth compact data, 64^3, t <= 8
  const GridSpec grid = GridSpec::box3d(16.0, 64);
  ClosedFormWave smooth;
  smooth.u0 = [](const Vec3& p) {
    return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
  };
  smooth.grad_u0 = [](const Vec3& p) {
    const double e = std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0);
    return Vec3{-p[0] * e, -p[1] * e, -p[2] * e};
  };
  smooth.u1 = [](const Vec3& p) {
    return 0.4 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 3.0);
  };
  const ScalarPair s0(sample<double>(grid, 0.0, smooth.u0), sample<double>(grid, 0.0, smooth.u1));
  double agree = 0.0;
  for (double t : {4.0, 8.0}) {
    const ScalarPair st = propagate_wave(s0, t);
    for (std::int64_t i = 0; i < st.u.size(); i += 157) {
      const auto p = grid.point_of(i);
      agree = std::fmax(agree, std::abs(st.u[i] - kirchhoff_eval(smooth, t, p)));
    }
  }

  CriterionResult r{3, "kirchhoff / positivity", false, "", 0.0};
  r.pass = min_value >= -1e-10 && agree <= 1e-6;
  r.detail = "min over 3x1e4 probes=" + fmt(min_value) + " kirchhoff-vs-spectral Linf=" + fmt(agree);
  return r;
}

// ------------------------------------------------------------ criterion 4

CriterionResult criterion_conservation() {
  const GridSpec grid = GridSpec::box3d(16.0, 48);
  auto bump = [](double amp, double w2, double off) {
    return [amp, w2, off](const Vec3& p) {
      const double dx = p[0] - off;
      return amp * std::exp(-(dx * dx + p[1] * p[1] + p[2] * p[2]) / w2);
    };
  };
  const ScalarPair s0(sample<double>(grid, 0.0, bump(1.0, 2.5, 5.0)),
                      sample<double>(grid, 0.0, bump(0.4, 3.0, 5.0)));

  double wave_drift = 0.0, kg_drift = 0.0, dirac_drift = 0.0;
  {
    const double e0 = natural_energy(s0);
    auto kg_energy = [](const ScalarPair& s) {
      const double m = l2_norm(s.u);
      return natural_energy(s) + m * m;
    };
    const double k0 = kg_energy(s0);
    for (double t : {2.5, 5.0, 10.0}) {
      wave_drift = std::fmax(wave_drift, std::abs(natural_energy(propagate_wave(s0, t)) - e0) / e0);
      kg_drift = std::fmax(kg_drift, std::abs(kg_energy(propagate_kg(s0, t)) - k0) / k0);
    }
    const GammaSet g = GammaSet::standard();
    SpinorField psi0 = sample<Spinor4>(grid, 0.0, [&](const Vec3& p) {
      const double b = bump(1.0, 2.5, 5.0)(p);
      return Spinor4{Complex(b, 0.1 * b), Complex(0.4 * b, 0), Complex(0, -0.2 * b),
                     Complex(0.1 * b, 0)};
    });
    const double q0 = l2_norm(psi0);
    for (double t : {5.0, 10.0})
      dirac_drift =
          std::fmax(dirac_drift, std::abs(l2_norm(propagate_dirac(psi0, t, g)) - q0) / q0);
  }

  // Ghost identity along the exact Klein-Gordon flow, trapezoid in time.
  // Measured on the radial grid: the weight e^{q(|x|-t)} carries an |x|
  // kink at the origin that floors any 3d-lattice Riemann sum near 1e-5
  // once the wave washes over the origin, while the radial quadrature
  // (midpoint in r against 4 pi r^2 dr) sees a smooth integrand and leaves
  // the pure time-quadrature error. The 3d drift is reported alongside.
  const GridSpec rgrid = GridSpec::radial(40.0, 4096);
  const ScalarPair rad0(sample<double>(rgrid, 0.0,
                                       [](const Vec3& p) {
                                         return std::exp(-p[0] * p[0] / 2.5);
                                       }),
                        sample<double>(rgrid, 0.0, [](const Vec3& p) {
                          return 0.4 * std::exp(-p[0] * p[0] / 3.0);
                        }));
  auto ghost_drift = [&](double ds) {
    KgGhostTracker tr(0.05);
    for (double t = 0.0; t <= 10.0 + 1e-9; t += ds) tr.push(propagate_kg_radial(rad0, t));
    return tr.identity_drift_rel();
  };
  const double g_fine = ghost_drift(0.0025);
  const double g_coarse = ghost_drift(0.005);
  const double order = std::log2(g_coarse / g_fine);
  // informational 3d-box figure at the same ds (kink-floored)
  double g_box;
  {
    KgGhostTracker tr(0.05);
    for (double t = 0.0; t <= 10.0 + 1e-9; t += 0.05) tr.push(propagate_kg(s0, t));
    g_box = tr.identity_drift_rel();
  }

  CriterionResult r{4, "linear conservation + ghost identity", false, "", 0.0};
  r.pass = wave_drift <= 1e-10 && kg_drift <= 1e-10 && dirac_drift <= 1e-10 && g_fine <= 1e-6 &&
           order >= 1.8;
  r.detail = "wave=" + fmt(wave_drift) + " kg=" + fmt(kg_drift) + " dirac=" + fmt(dirac_drift) +
             " ghost(ds=.0025)=" + fmt(g_fine) + " ghost(ds=.005)=" + fmt(g_coarse) +
             " order=" + fmt(order) + " [3d-box info: " + fmt(g_box) + "]";
  return r;
}

// ------------------------------------------------------------ criterion 5

CriterionResult criterion_transforms() {
  const GammaSet g = GammaSet::standard();
  std::vector<std::map<std::string, double>> res;
  for (std::int64_t n : {16, 32, 64}) {
    const GridSpec grid = GridSpec::box3d(16.0, n);
    const double dt = grid.spacing() / 4.0;
    SpinorField psi0 = sample<Spinor4>(grid, 0.0, [&](const Vec3& p) {
      const double b =
          0.05 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 9.0);
      return Spinor4{Complex(b, 0.2 * b), Complex(0.5 * b, 0), Complex(0, -0.3 * b),
                     Complex(0.1 * b, 0)};
    });
    ScalarField v0 = sample<double>(grid, 0.0, [&](const Vec3& p) {
      return 0.4 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 9.0);
    });
    DKGState s = DKGState::make(std::move(psi0), std::move(v0), ScalarField(grid, 0.0), g);
    IntegratorConfig cfg{dt, Scheme::StrangSplitting, true, 0.0};
    while (s.t < 4.0 - 1e-9) s = dkg_step(s, cfg, g);
    std::vector<DKGState> bracket;
    for (int k = 0; k < 5; ++k) {
      bracket.push_back(s);
      s = dkg_step(s, cfg, g);
    }
    res.push_back(transform_residuals(bracket, g));
  }
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [name, c0] : res[0]) {
    const double c1 = res[1].at(name);
    const double c2 = res[2].at(name);
    const double o1 = std::log2(c0 / c1);
    const double o2 = std::log2(c1 / c2);
    pass = pass && o1 >= 1.8 && o2 >= 1.8;
    detail << name << " orders " << fmt(o1) << "," << fmt(o2) << "  ";
  }
  return {5, "transformation identities (dkg)", pass, detail.str(), 0.0};
}

// ----------------------------------------------------- criteria 6 and 7

CriterionResult criterion_run(int idx, const std::string& preset) {
  ExperimentConfig cfg = ExperimentConfig::parse_file(preset);
  const RunResult rr = run_experiment(cfg);
  bool pass = rr.exit_code == 0;
  std::ostringstream detail;
  for (const auto& [k, ok] : rr.verdicts) detail << k << "=" << (ok ? "pass" : "FAIL") << "  ";
  for (const auto& [k, v] : rr.metrics) detail << k << "=" << fmt(v) << "  ";
  detail << "(artifacts in " << cfg.out_dir << ")";
  return {idx,
          idx == 6 ? "kgz decay at desk scale (radial)" : "dkg decay at desk scale (96^3)",
          pass, detail.str(), 0.0};
}

// ------------------------------------------------------------ criterion 8

CriterionResult criterion_scattering(const std::string& preset_dir) {
  // the dyadic pull-back distances are produced inside runs 6 and 7; here
  // they are re-read from the emitted summaries
  bool pass = true;
  std::ostringstream detail;
  for (const std::string name : {"kgz-small", "dkg-small"}) {
    const ExperimentConfig cfg = ExperimentConfig::parse_file(preset_dir + "/" + name + ".cfg");
    const std::string path = cfg.out_dir + "/summary.json";
    std::ifstream is(path);
    if (!is) {
      pass = false;
      detail << name << ": missing " << path << " (run criteria 6/7 first)  ";
      continue;
    }
    nlohmann::json summary;
    is >> summary;
    for (const std::string key : {"scattering_primary", "scattering_secondary"}) {
      const bool ok = summary.contains("verdicts") && summary["verdicts"].contains(key) &&
                      summary["verdicts"][key].get<bool>();
      pass = pass && ok;
      detail << name << "/" << key << "=" << (ok ? "decreasing" : "FAIL");
      if (summary.contains("scattering")) {
        const std::string skey = key == "scattering_primary" ? "primary" : "secondary";
        if (summary["scattering"].contains(skey)) {
          detail << " d=[";
          for (const auto& v : summary["scattering"][skey]) detail << fmt(v.get<double>()) << " ";
          detail << "]";
        }
      }
      detail << "  ";
    }
  }
  return {8, "scattering pull-back cauchy decay", pass, detail.str(), 0.0};
}

// ------------------------------------------------------------ criterion 9

CriterionResult criterion_hypothesis() {
  const double spot = eq16_bound_value(1.0, 2.0);
  const bool spot_ok = spot == 1.0 / 3508536.0;

  const GridSpec grid = GridSpec::box3d(10.0, 24);
  KgzClosedFormData d;
  d.n0 = GaussianSum({{0.3, {0.5, 0.0, 0.0}, 2.0}});
  d.n1 = GaussianSum({{0.1, {0.0, 0.5, 0.0}, 2.5}});
  d.E0[0] = GaussianSum({{0.02, {0.0, 0.0, 0.0}, 2.0}});
  d.E1[1] = GaussianSum({{0.01, {0.0, 0.0, 0.0}, 2.0}});
  const auto probe = hypothesis_check_kgz(d, grid, 2.0, 5.0, 10, 1.0);
  const double rescale = 0.5 * std::fmin(2.0 / probe.find("eq13-wave")->measured,
                                         5.0 / probe.find("eq13-kg")->measured);
  d.n0.scale(rescale);
  d.n1.scale(rescale);
  d.E0[0].scale(rescale);
  d.E1[1].scale(rescale);
  const auto base = hypothesis_check_kgz(d, grid, 2.0, 5.0, 10, 1.0);

  std::mt19937_64 rng(901);
  std::uniform_real_distribution<double> c(0.05, 0.95);
  bool monotone = base.find("eq13-wave")->pass && base.find("eq13-kg")->pass;
  double linmax = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double s = c(rng);
    KgzClosedFormData ds = d;
    ds.n0.scale(s);
    ds.n1.scale(s);
    ds.E0[0].scale(s);
    ds.E1[1].scale(s);
    const auto rep = hypothesis_check_kgz(ds, grid, 2.0, 5.0, 10, 1.0);
    monotone = monotone && rep.find("eq13-wave")->pass && rep.find("eq13-kg")->pass;
    linmax = std::fmax(linmax, std::abs(rep.find("eq13-wave")->measured -
                                        s * base.find("eq13-wave")->measured) /
                                   base.find("eq13-wave")->measured);
  }
  CriterionResult r{9, "hypothesis checker", false, "", 0.0};
  r.pass = spot_ok && monotone && linmax <= 1e-10;
  r.detail = std::string("spot 1/(71^2*174*4)=") + (spot_ok ? "exact" : "WRONG") +
             " monotone-20=" + (monotone ? "pass" : "FAIL") + " linearity=" + fmt(linmax);
  return r;
}

// ----------------------------------------------------------- criterion 10

CriterionResult criterion_sobolev() {
  const auto trials = shipped_trial_family(20);
  const std::vector<double> times = {0.0, 1.0, 2.0};
  const auto coarse = sobolev_constant_estimate(trials, GridSpec::box3d(8.0, 24), times);
  const auto fine = sobolev_constant_estimate(trials, GridSpec::box3d(8.0, 48), times);
  const std::vector<WaveTrial> small(trials.begin(), trials.begin() + 5);
  const auto sub = sobolev_constant_estimate(small, GridSpec::box3d(8.0, 24), times);
  const double change = std::abs(fine.lower_bound - coarse.lower_bound) / coarse.lower_bound;
  CriterionResult r{10, "klainerman-sobolev constant estimator", false, "", 0.0};
  r.pass = coarse.lower_bound > 0.0 && sub.lower_bound <= coarse.lower_bound + 1e-15 &&
           change <= 0.05;
  r.detail = "C_KS >= " + fmt(fine.lower_bound) + " (maximizer: " + fine.maximizer +
             "), refinement change=" + fmt(change) + ", 5-trial bound=" + fmt(sub.lower_bound);
  return r;
}

// ----------------------------------------------------------- criterion 11

CriterionResult criterion_crosscheck() {
  auto disagreement = [&](std::int64_t n, double dt) {
    const GridSpec grid = GridSpec::box3d(12.0, n);
    auto make = [&] {
      Vec3Field E0(grid, 0.0), E1(grid, 0.0);
      for (std::int64_t i = 0; i < E0.size(); ++i) {
        const auto p = grid.point_of(i);
        E0[i][0] = 0.05 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 4.0);
      }
      ScalarField n0 = sample<double>(grid, 0.0, [](const Vec3& p) {
        return 0.5 * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 4.0);
      });
      return KGZState::make(std::move(E0), std::move(E1), std::move(n0), ScalarField(grid, 0.0));
    };
    KGZState a = make(), b = make();
    IntegratorConfig ca{dt, Scheme::StrangSplitting, true, 0.0};
    IntegratorConfig cb{dt, Scheme::Rk4MethodOfLines, true, 0.0};
    while (a.t < 2.0 - 1e-9) {
      a = kgz_step(a, ca);
      b = kgz_step(b, cb);
    }
    double linf = 0.0;
    for (std::int64_t i = 0; i < a.E.size(); ++i) {
      for (int c = 0; c < 3; ++c)
        linf = std::fmax(linf, std::abs(a.E[i][static_cast<std::size_t>(c)] -
                                        b.E[i][static_cast<std::size_t>(c)]));
      linf = std::fmax(linf, std::abs(a.n1[i] - b.n1[i]));
    }
    return linf;
  };
  const double h1 = 0.5, dt1 = 0.125;
  const double d1 = disagreement(48, dt1);
  const double d2 = disagreement(96, 0.5 * dt1);
  const double scale = 0.55;  // max |data| across fields
  const double bound1 = 5.0 * (h1 * h1 + dt1 * dt1) * scale;
  const double order = std::log2(d1 / d2);
  CriterionResult r{11, "strang vs rk4-mol cross-check", false, "", 0.0};
  r.pass = d1 <= bound1 && order >= 1.8;
  r.detail = "Linf(48^3)=" + fmt(d1) + " bound=" + fmt(bound1) + " Linf(96^3)=" + fmt(d2) +
             " joint order=" + fmt(order);
  return r;
}

}  // namespace

CriterionResult run_criterion(int k, const std::string& preset_dir) {
  const auto start = Clock::now();
  CriterionResult r;
  switch (k) {
    case 1: r = criterion_algebra(); break;
    case 2: r = criterion_commutators(); break;
    case 3: r = criterion_kirchhoff(); break;
    case 4: r = criterion_conservation(); break;
    case 5: r = criterion_transforms(); break;
    case 6: r = criterion_run(6, preset_dir + "/kgz-small.cfg"); break;
    case 7: r = criterion_run(7, preset_dir + "/dkg-small.cfg"); break;
    case 8: r = criterion_scattering(preset_dir); break;
    case 9: r = criterion_hypothesis(); break;
    case 10: r = criterion_sobolev(); break;
    case 11: r = criterion_crosscheck(); break;
    default: throw std::invalid_argument("run_criterion: k must be 1..11");
  }
  r.seconds = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() / 1000.0;
  return r;
}

std::vector<CriterionResult> run_all_criteria(const std::string& preset_dir,
                                              const std::vector<int>& subset) {
  std::vector<int> ks = subset;
  if (ks.empty())
    for (int k = 1; k <= 11; ++k) ks.push_back(k);
  std::vector<CriterionResult> out;
  for (int k : ks) out.push_back(run_criterion(k, preset_dir));
  return out;
}

}  // namespace wkg
