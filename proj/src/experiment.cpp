#include "wkg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wkg/diagnostics.hpp"
#include "wkg/energies.hpp"
#include "wkg/field_io.hpp"
#include "wkg/norms.hpp"

namespace wkg {

namespace {

using json = nlohmann::json;

double to_double(const std::string& k, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(k, "not a number: '" + v + "'");
  }
}

std::int64_t to_int(const std::string& k, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(k, "not an integer: '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& k, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(k, item));
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("(file)", "cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("(line)", "missing '=': " + line);
    auto trim = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      const auto e2 = s.find_last_not_of(" \t");
      return b2 == std::string::npos ? std::string() : s.substr(b2, e2 - b2 + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return parse(kv);
}

ExperimentConfig ExperimentConfig::parse(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  double grid_extent = 8.0;
  std::int64_t grid_points = 32;
  GridKind grid_kind = GridKind::PeriodicBox3d;
  for (const auto& [k, v] : kv) {
    if (k == "system.kind") {
      if (v == "kgz") c.system = System::Kgz;
      else if (v == "dkg") c.system = System::Dkg;
      else if (v == "linear-only") c.system = System::LinearOnly;
      else throw ConfigError(k, "expected kgz | dkg | linear-only");
    } else if (k == "grid.kind") {
      if (v == "box3d") grid_kind = GridKind::PeriodicBox3d;
      else if (v == "radial") grid_kind = GridKind::RadialLine1d;
      else throw ConfigError(k, "expected box3d | radial");
    } else if (k == "grid.extent") {
      grid_extent = to_double(k, v);
    } else if (k == "grid.points") {
      grid_points = to_int(k, v);
    } else if (k == "integrator.dt") {
      c.integrator.dt = to_double(k, v);
    } else if (k == "integrator.scheme") {
      if (v == "strang") c.integrator.scheme = Scheme::StrangSplitting;
      else if (v == "rk4") c.integrator.scheme = Scheme::Rk4MethodOfLines;
      else throw ConfigError(k, "expected strang | rk4");
    } else if (k == "integrator.dealias") {
      c.integrator.dealias = to_int(k, v) != 0;
    } else if (k == "integrator.dirac_mass") {
      c.integrator.dirac_mass = to_double(k, v);
    } else if (k == "data.family") {
      c.family = v;
    } else if (k == "data.eps_scale") {
      c.eps_scale = to_double(k, v);
    } else if (k == "data.k0_scale") {
      c.k0_scale = to_double(k, v);
    } else if (k == "data.width") {
      c.width = to_double(k, v);
    } else if (k == "data.center") {
      const auto l = to_list(k, v);
      if (l.size() != 3) throw ConfigError(k, "expected three comma-separated reals");
      c.center = {l[0], l[1], l[2]};
    } else if (k == "data.margin") {
      c.margin = to_double(k, v);
    } else if (k == "data.smooth") {
      c.smooth_certified = to_int(k, v) != 0;
    } else if (k == "data.mode") {
      const auto l = to_list(k, v);
      if (l.size() != 3) throw ConfigError(k, "expected three comma-separated integers");
      c.mode = {static_cast<int>(l[0]), static_cast<int>(l[1]), static_cast<int>(l[2])};
    } else if (k == "data.file_prefix") {
      c.file_prefix = v;
    } else if (k == "run.t_final") {
      c.t_final = to_double(k, v);
    } else if (k == "run.sample_dt") {
      c.sample_dt = to_double(k, v);
    } else if (k == "run.checkpoint_times") {
      c.checkpoint_times = to_list(k, v);
    } else if (k == "diag.scattering_times") {
      c.scattering_times = to_list(k, v);
    } else if (k == "diag.fit_window") {
      const auto l = to_list(k, v);
      if (l.size() != 2) throw ConfigError(k, "expected t_min,t_max");
      c.fit_tmin = l[0];
      c.fit_tmax = l[1];
    } else if (k == "diag.ratio_max") {
      c.ratio_max = to_double(k, v);
    } else if (k == "diag.delta") {
      c.delta = to_double(k, v);
    } else if (k == "out.dir") {
      c.out_dir = v;
    } else if (k == "seed") {
      c.seed = static_cast<std::uint64_t>(to_int(k, v));
    } else if (k == "threads") {
      c.threads = static_cast<int>(to_int(k, v));
    } else if (k == "hyp.K0") {
      c.hyp_K0 = to_double(k, v);
    } else if (k == "hyp.epsilon") {
      c.hyp_epsilon = to_double(k, v);
    } else if (k == "hyp.N") {
      c.hyp_N = static_cast<int>(to_int(k, v));
    } else if (k == "hyp.C_KS") {
      c.hyp_CKS = to_double(k, v);
    } else {
      throw ConfigError(k, "unknown key");
    }
  }
  try {
    c.grid = GridSpec(grid_kind, grid_extent, grid_points);
  } catch (const std::exception& e) {
    throw ConfigError("grid", e.what());
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (integrator.dt <= 0.0) throw ConfigError("integrator.dt", "must be positive");
  if (integrator.scheme == Scheme::Rk4MethodOfLines && integrator.dt > 0.5 * grid.spacing())
    throw ConfigError("integrator.dt", "rk4-mol needs dt <= 0.5 h");
  if (eps_scale < 0.0) throw ConfigError("data.eps_scale", "must be nonnegative");
  if (k0_scale < 0.0) throw ConfigError("data.k0_scale", "must be nonnegative");
  if (width <= 0.0) throw ConfigError("data.width", "must be positive");
  if (t_final < 0.0) throw ConfigError("run.t_final", "must be nonnegative");
  if (sample_dt <= 0.0) throw ConfigError("run.sample_dt", "must be positive");
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
  if (fit_tmax > 0.0) {
    if (fit_tmin <= 0.0 || fit_tmin >= fit_tmax)
      throw ConfigError("diag.fit_window", "needs 0 < t_min < t_max");
    // wrap-around guard: the window must fit the uncontaminated region
    const double reach = fit_tmax + 2.0 * width;
    if (grid.kind() == GridKind::PeriodicBox3d && reach > 2.0 * grid.extent())
      throw ConfigError("diag.fit_window", "window exceeds the uncontaminated region");
    if (grid.kind() == GridKind::RadialLine1d && reach > grid.extent())
      throw ConfigError("diag.fit_window", "window exceeds the uncontaminated region");
  }
  if (family != "gaussian-bump" && family != "certified-positive-pair" &&
      family != "plane-mode" && family != "from-file")
    throw ConfigError("data.family", "unknown family " + family);
  if (family == "plane-mode" && grid.kind() != GridKind::PeriodicBox3d)
    throw ConfigError("data.family", "plane-mode needs the 3d box");
  if (grid.kind() == GridKind::RadialLine1d &&
      (center[0] != 0.0 || center[1] != 0.0 || center[2] != 0.0))
    throw ConfigError("data.center", "radial data must be centered at the origin");
  if (system == System::Dkg && grid.kind() != GridKind::PeriodicBox3d)
    throw ConfigError("system.kind", "dkg runs on the 3d box");
}

std::map<std::string, std::string> ExperimentConfig::to_kv() const {
  std::map<std::string, std::string> kv;
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  kv["system.kind"] = system == System::Kgz ? "kgz" : system == System::Dkg ? "dkg" : "linear-only";
  kv["grid.kind"] = grid.kind() == GridKind::PeriodicBox3d ? "box3d" : "radial";
  kv["grid.extent"] = num(grid.extent());
  kv["grid.points"] = std::to_string(grid.points_per_axis());
  kv["integrator.dt"] = num(integrator.dt);
  kv["integrator.scheme"] = integrator.scheme == Scheme::StrangSplitting ? "strang" : "rk4";
  kv["integrator.dealias"] = integrator.dealias ? "1" : "0";
  kv["integrator.dirac_mass"] = num(integrator.dirac_mass);
  kv["data.family"] = family;
  kv["data.eps_scale"] = num(eps_scale);
  kv["data.k0_scale"] = num(k0_scale);
  kv["data.width"] = num(width);
  kv["data.center"] = num(center[0]) + "," + num(center[1]) + "," + num(center[2]);
  kv["data.margin"] = num(margin);
  kv["data.smooth"] = smooth_certified ? "1" : "0";
  kv["run.t_final"] = num(t_final);
  kv["run.sample_dt"] = num(sample_dt);
  kv["diag.ratio_max"] = num(ratio_max);
  kv["diag.delta"] = num(delta);
  kv["seed"] = std::to_string(seed);
  kv["threads"] = std::to_string(threads);
  return kv;
}

std::uint64_t ExperimentConfig::config_hash() const {
  // FNV-1a over the canonical key=value rendering
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& [k, v] : to_kv()) {
    for (const std::string* s : {&k, &v}) {
      for (char c : *s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
      }
      h ^= 0x3dull;
      h *= 1099511628211ull;
    }
  }
  return h;
}

// ----------------------------------------------------------- data families

namespace {

GaussianSum one_bump(double amp, const Vec3& c, double w) {
  return GaussianSum({GaussianBump{amp, c, w}});
}

ScalarField sample_sum(const GaussianSum& f, const GridSpec& g, double t = 0.0) {
  return sample<double>(g, t, [&](const Vec3& p) { return f.eval(p); });
}

}  // namespace

KgzData make_kgz_data(const ExperimentConfig& cfg) {
  const GridSpec& g = cfg.grid;
  KgzClosedFormData cf;
  Vec3Field E0(g, 0.0), E1(g, 0.0);
  // (n0_data, n1_data) are the wave Cauchy pair; the decomposition field
  // n^1 always starts from (0, 0)
  ScalarField n0_data(g, 0.0), n1_data(g, 0.0);

  if (cfg.family == "gaussian-bump" || cfg.family == "certified-positive-pair") {
    cf.E0[0] = one_bump(cfg.eps_scale, cfg.center, cfg.width);
    cf.n0 = one_bump(cfg.k0_scale, cfg.center, cfg.width);
    if (cfg.family == "certified-positive-pair") {
      if (cfg.smooth_certified) {
        // Gaussian dominating |grad n0|: sup_r (2A/w) r/w e^{-r^2/w^2 + r^2/(2w^2)}
        // is attained at r = w with value (2A/w) e^{-1/2}
        const double B = (1.0 + cfg.margin) * 2.0 * cfg.k0_scale / cfg.width *
                         std::exp(-0.5);
        cf.n1 = one_bump(B, cfg.center, std::sqrt(2.0) * cfg.width);
      }
      // the literal variant n1 = |grad n0| + margin has no Gaussian closed
      // form; sampled below, cf.n1 stays empty
    }
    const ScalarField e0c = sample_sum(cf.E0[0], g);
    for (std::int64_t i = 0; i < E0.size(); ++i) E0[i][0] = e0c[i];
    n0_data = sample_sum(cf.n0, g);
    if (cfg.family == "certified-positive-pair") {
      if (cfg.smooth_certified) {
        n1_data = sample_sum(cf.n1, g);
      } else {
        n1_data = sample<double>(g, 0.0, [&](const Vec3& p) {
          const Vec3 gr = cf.n0.gradient(p);
          return std::sqrt(gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2]) + cfg.margin;
        });
      }
    }
  } else if (cfg.family == "plane-mode") {
    const double kx = M_PI / g.extent();
    const Vec3 k = {kx * cfg.mode[0], kx * cfg.mode[1], kx * cfg.mode[2]};
    E0 = sample<Vec3>(g, 0.0, [&](const Vec3& p) {
      return Vec3{cfg.eps_scale * std::cos(k[0] * p[0] + k[1] * p[1] + k[2] * p[2]), 0.0, 0.0};
    });
    n0_data = sample<double>(g, 0.0, [&](const Vec3&) { return cfg.k0_scale; });
  } else if (cfg.family == "from-file") {
    E0 = load_vec3_field(cfg.file_prefix + "_E.bin");
    E1 = load_vec3_field(cfg.file_prefix + "_Et.bin");
    n0_data = load_scalar_field(cfg.file_prefix + "_n0.bin");
    n1_data = load_scalar_field(cfg.file_prefix + "_n0t.bin");
    if (E0.grid() != g) throw ConfigError("data.file_prefix", "checkpoint grid mismatch");
  }
  return {std::move(cf), KGZState::make(std::move(E0), std::move(E1), std::move(n0_data),
                                        std::move(n1_data))};
}

DkgData make_dkg_data(const ExperimentConfig& cfg) {
  const GridSpec& g = cfg.grid;
  const GammaSet gam = GammaSet::standard();
  DkgClosedFormData cf;
  SpinorField psi0(g, 0.0);
  ScalarField v0(g, 0.0), v1(g, 0.0);

  if (cfg.family == "gaussian-bump" || cfg.family == "certified-positive-pair") {
    // fixed generic spinor direction, (re, im) pairs per component
    const double re[4] = {1.0, 0.55, 0.3, 0.15};
    const double im[4] = {0.2, -0.4, 0.25, -0.1};
    for (int c = 0; c < 4; ++c) {
      cf.psi0[static_cast<std::size_t>(2 * c)] =
          one_bump(cfg.eps_scale * re[c], cfg.center, cfg.width);
      cf.psi0[static_cast<std::size_t>(2 * c + 1)] =
          one_bump(cfg.eps_scale * im[c], cfg.center, cfg.width);
    }
    cf.v0 = one_bump(cfg.k0_scale, cfg.center, cfg.width);
    psi0 = sample<Spinor4>(g, 0.0, [&](const Vec3& p) {
      const double b = std::exp(-((p[0] - cfg.center[0]) * (p[0] - cfg.center[0]) +
                                  (p[1] - cfg.center[1]) * (p[1] - cfg.center[1]) +
                                  (p[2] - cfg.center[2]) * (p[2] - cfg.center[2])) /
                                (cfg.width * cfg.width));
      Spinor4 s;
      for (int c = 0; c < 4; ++c)
        s[static_cast<std::size_t>(c)] = cfg.eps_scale * b * Complex(re[c], im[c]);
      return s;
    });
    v0 = sample_sum(cf.v0, g);
  } else if (cfg.family == "plane-mode") {
    const double kx = M_PI / g.extent();
    const Vec3 k = {kx * cfg.mode[0], kx * cfg.mode[1], kx * cfg.mode[2]};
    psi0 = sample<Spinor4>(g, 0.0, [&](const Vec3& p) {
      const Complex ph = std::polar(cfg.eps_scale, k[0] * p[0] + k[1] * p[1] + k[2] * p[2]);
      return Spinor4{ph, 0.5 * ph, Complex(0.0), Complex(0.0)};
    });
    v0 = sample<double>(g, 0.0, [&](const Vec3&) { return cfg.k0_scale; });
  } else if (cfg.family == "from-file") {
    psi0 = load_spinor_field(cfg.file_prefix + "_psi.bin");
    v0 = load_scalar_field(cfg.file_prefix + "_V0.bin");
    v1 = load_scalar_field(cfg.file_prefix + "_V0t.bin");
    if (psi0.grid() != g) throw ConfigError("data.file_prefix", "checkpoint grid mismatch");
  }
  return {std::move(cf), DKGState::make(std::move(psi0), std::move(v0), std::move(v1), gam)};
}

// ------------------------------------------------------------------- run

namespace {

struct SeriesWriter {
  std::ofstream os;
  explicit SeriesWriter(const std::string& path) : os(path) {
    os.precision(17);
    os << "t,value\n";
  }
  void push(double t, double v) { os << t << ',' << v << '\n'; }
};

double wsup_kg_weight(double t, double r) { return std::pow(jbracket(t + r), 1.5); }
double wsup_wave_weight(double t, double r) { return jbracket(t + r) * std::sqrt(jbracket(t - r)); }
double wsup_dirac_weight(double t, double r) { return jbracket(t + r); }

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const auto wall_start = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);

  RunResult result;
  json summary;
  summary["schema_version"] = 1;
  {
    std::ostringstream os;
    os << std::hex << cfg.config_hash();
    summary["config_hash"] = os.str();
  }

  std::ofstream energy_csv(cfg.out_dir + "/energy.csv");
  energy_csv.precision(17);
  energy_csv << EnergyReport::csv_header() << '\n';

  const GammaSet gam = GammaSet::standard();
  std::vector<std::pair<double, double>> series_a, series_b;  // weighted sups
  std::vector<double> scat_a, scat_b;                         // pull-back distances
  double blowup_time = -1.0;

  auto near = [&](double t, const std::vector<double>& list) {
    for (double v : list)
      if (std::abs(t - v) < 0.5 * cfg.integrator.dt) return true;
    return false;
  };

  // per-system campaign loop
  try {
    if (cfg.system == ExperimentConfig::System::Kgz) {
      KGZState s = make_kgz_data(cfg).state;
      KgGhostTracker ghost(cfg.delta);
      MatterWeightedTracker matter(cfg.delta);
      std::optional<ScalarPair> prev_pull_E;
      std::optional<ScalarPair> prev_pull_n1;
      double next_sample = 0.0;
      const std::int64_t steps = static_cast<std::int64_t>(std::llround(cfg.t_final / cfg.integrator.dt));
      for (std::int64_t step = 0; step <= steps; ++step) {
        if (s.t >= next_sample - 1e-9) {
          next_sample += cfg.sample_dt;
          EnergyReport row;
          row.t = s.t;
          row.delta = cfg.delta;
          row.natural = natural_energy(s.E, s.Et);
          row.conformal = conformal_energy(ScalarPair(reconstruct_n(s), reconstruct_nt(s)));
          // ghost tracker follows the first component of E
          ScalarField e0(s.E.grid(), s.t), e0t(s.E.grid(), s.t);
          for (std::int64_t i = 0; i < s.E.size(); ++i) {
            e0[i] = s.E[i][0];
            e0t[i] = s.Et[i][0];
          }
          ghost.push(ScalarPair(e0, e0t));
          row.ghost_kg = ghost.entry();
          matter.push(s.E, s.Et, s.n0, s.n0t);
          row.matter_weighted = matter.value();
          row.min_n0 = matter.min_n0();
          row.min_sign2 = matter.min_sign2();
          row.exterior_chi = exterior_energy(s.E, s.Et, s.t);
          energy_csv << row.csv_row() << '\n';

          const ScalarField n = reconstruct_n(s);
          series_a.emplace_back(s.t, weighted_sup(s.E, s.t, wsup_kg_weight));
          series_b.emplace_back(s.t, weighted_sup(n, s.t, wsup_wave_weight));
        }
        if (near(s.t, cfg.scattering_times)) {
          ScalarField e0(s.E.grid(), s.t), e0t(s.E.grid(), s.t);
          for (std::int64_t i = 0; i < s.E.size(); ++i) {
            e0[i] = s.E[i][0];
            e0t[i] = s.Et[i][0];
          }
          ScalarPair pe(std::move(e0), std::move(e0t));
          ScalarPair pn(s.n1, s.n1t);
          if (prev_pull_E) scat_a.push_back(pullback_distance(PropagatorKind::KleinGordonSKG, *prev_pull_E, pe));
          if (prev_pull_n1) scat_b.push_back(pullback_distance(PropagatorKind::WaveSW, *prev_pull_n1, pn));
          prev_pull_E = std::move(pe);
          prev_pull_n1 = std::move(pn);
        }
        if (near(s.t, cfg.checkpoint_times)) {
          const std::string prefix = cfg.out_dir + "/checkpoint_t" + std::to_string(s.t);
          save_field(prefix + "_E.bin", s.E);
          save_field(prefix + "_Et.bin", s.Et);
          save_field(prefix + "_n0.bin", s.n0);
          save_field(prefix + "_n0t.bin", s.n0t);
          save_field(prefix + "_n1.bin", s.n1);
          save_field(prefix + "_n1t.bin", s.n1t);
          write_manifest(prefix + ".manifest",
                         {{"system", "kgz"},
                          {"t", std::to_string(s.t)},
                          {"dt", std::to_string(cfg.integrator.dt)},
                          {"scheme", cfg.integrator.scheme == Scheme::StrangSplitting ? "strang" : "rk4"},
                          {"grid", cfg.grid.describe()}});
        }
        if (step < steps) s = kgz_step(s, cfg.integrator);
      }
    } else if (cfg.system == ExperimentConfig::System::Dkg) {
      DKGState s = make_dkg_data(cfg).state;
      DiracGhostTracker ghost_d(cfg.delta, gam);
      KgGhostTracker ghost_v(cfg.delta);
      std::optional<SpinorField> prev_pull_psi;
      std::optional<ScalarPair> prev_pull_v1;
      double next_sample = 0.0;
      const std::int64_t steps = static_cast<std::int64_t>(std::llround(cfg.t_final / cfg.integrator.dt));
      for (std::int64_t step = 0; step <= steps; ++step) {
        if (s.t >= next_sample - 1e-9) {
          next_sample += cfg.sample_dt;
          EnergyReport row;
          row.t = s.t;
          row.delta = cfg.delta;
          const ScalarField v = reconstruct_v(s);
          const ScalarField vt = reconstruct_vt(s);
          row.natural = natural_energy(ScalarPair(v, vt));
          row.conformal = conformal_energy(ScalarPair(v, vt));
          ghost_v.push(ScalarPair(s.V1, s.V1t));
          row.ghost_kg = ghost_v.entry();
          ghost_d.push(s.psi);
          row.ghost_dirac = ghost_d.entry();
          row.exterior_chi = exterior_energy(s.psi, s.t);
          energy_csv << row.csv_row() << '\n';

          series_a.emplace_back(s.t, weighted_sup(v, s.t, wsup_kg_weight));
          series_b.emplace_back(s.t, weighted_sup(s.psi, s.t, wsup_dirac_weight));
        }
        if (near(s.t, cfg.scattering_times)) {
          SpinorField psi = s.psi;
          ScalarPair pv(s.V1, s.V1t);
          if (prev_pull_psi)
            scat_a.push_back(pullback_distance_dirac(*prev_pull_psi, psi, gam, cfg.integrator.dirac_mass));
          if (prev_pull_v1)
            scat_b.push_back(pullback_distance(PropagatorKind::KleinGordonSKG, *prev_pull_v1, pv));
          prev_pull_psi = std::move(psi);
          prev_pull_v1 = std::move(pv);
        }
        if (near(s.t, cfg.checkpoint_times)) {
          const std::string prefix = cfg.out_dir + "/checkpoint_t" + std::to_string(s.t);
          save_field(prefix + "_psi.bin", s.psi);
          save_field(prefix + "_V0.bin", s.V0);
          save_field(prefix + "_V0t.bin", s.V0t);
          save_field(prefix + "_V1.bin", s.V1);
          save_field(prefix + "_V1t.bin", s.V1t);
          save_field(prefix + "_Psi.bin", s.Psi);
          save_field(prefix + "_Psit.bin", s.Psit);
          write_manifest(prefix + ".manifest",
                         {{"system", "dkg"},
                          {"t", std::to_string(s.t)},
                          {"dt", std::to_string(cfg.integrator.dt)},
                          {"scheme", cfg.integrator.scheme == Scheme::StrangSplitting ? "strang" : "rk4"},
                          {"grid", cfg.grid.describe()}});
        }
        if (step < steps) s = dkg_step(s, cfg.integrator, gam);
      }
    } else {
      // linear-only: free evolution of the configured data, exact groups
      KGZState s = make_kgz_data(cfg).state;
      for (double t = 0.0; t <= cfg.t_final + 1e-9; t += cfg.sample_dt) {
        ScalarPair n0(s.n0, s.n0t);
        n0 = propagate(PropagatorKind::WaveSW, n0, t);
        EnergyReport row;
        row.t = t;
        row.delta = cfg.delta;
        row.natural = natural_energy(n0);
        energy_csv << row.csv_row() << '\n';
        series_a.emplace_back(std::fmax(t, 1e-6), sup_norm(n0.u));
        series_b.emplace_back(std::fmax(t, 1e-6), l2_norm(n0.u));
      }
    }
  } catch (const BlowUpError& e) {
    blowup_time = e.time;
  }

  // series artifacts
  {
    SeriesWriter wa(cfg.out_dir + "/series_primary.csv");
    for (const auto& [t, v] : series_a) wa.push(t, v);
    SeriesWriter wb(cfg.out_dir + "/series_secondary.csv");
    for (const auto& [t, v] : series_b) wb.push(t, v);
  }

  // verdicts
  if (blowup_time >= 0.0) {
    summary["blowup_time"] = blowup_time;
    result.exit_code = 3;
  } else {
    if (cfg.fit_tmax > 0.0 && cfg.system != ExperimentConfig::System::LinearOnly) {
      auto judge = [&](const std::vector<std::pair<double, double>>& series,
                       const std::string& name) {
        const DecayFit fit = decay_fit(series, name, cfg.fit_tmin, cfg.fit_tmax);
        summary["decay"][name] = {{"exponent", fit.exponent},
                                  {"r2", fit.r2},
                                  {"window", {fit.t_min, fit.t_max}},
                                  {"ratio_max_min", fit.ratio_max_min}};
        const bool ok = fit.ratio_max_min <= cfg.ratio_max;
        result.verdicts["bounded_" + name] = ok;
        result.metrics["ratio_" + name] = fit.ratio_max_min;
      };
      judge(series_a, "weighted_sup_primary");
      judge(series_b, "weighted_sup_secondary");
    }
    if (!cfg.scattering_times.empty()) {
      auto judge_scat = [&](const std::vector<double>& d, const std::string& name) {
        bool decreasing = d.size() >= 2;
        for (std::size_t i = 1; i < d.size(); ++i) decreasing = decreasing && d[i] < d[i - 1];
        result.verdicts["scattering_" + name] = decreasing;
        summary["scattering"][name] = d;
      };
      judge_scat(scat_a, "primary");
      judge_scat(scat_b, "secondary");
    }
    for (const auto& [k, ok] : result.verdicts)
      if (!ok) result.exit_code = 1;
  }

  for (const auto& [k, ok] : result.verdicts) summary["verdicts"][k] = ok;
  for (const auto& [k, v] : result.metrics) summary["metrics"][k] = v;
  {
    std::ofstream js(cfg.out_dir + "/summary.json");
    js << summary.dump(2) << '\n';
  }
  const auto wall_end = std::chrono::steady_clock::now();
  auto kv = cfg.to_kv();
  {
    std::ostringstream os;
    os << std::hex << cfg.config_hash();
    kv["config_hash"] = os.str();
  }
  kv["wall_seconds"] = std::to_string(
      std::chrono::duration_cast<std::chrono::milliseconds>(wall_end - wall_start).count() / 1000.0);
  kv["exit_code"] = std::to_string(result.exit_code);
  write_manifest(cfg.out_dir + "/manifest.txt", kv);
  return result;
}

}  // namespace wkg
