// Command-line front end: config-driven runs, data-condition checks,
// decay fits on stored series, and the algebraic/commutator identity
// suite. Exit codes: 0 all verdicts pass, 1 verdict failure, 2 bad
// config, 3 blow-up.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include <nlohmann/json.hpp>

#include "wkg/acceptance.hpp"
#include "wkg/diagnostics.hpp"
#include "wkg/experiment.hpp"
#include "wkg/hypothesis.hpp"

using namespace wkg;
using json = nlohmann::json;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
  int threads = 0;
};

ExperimentConfig load_config(const CommonFlags& f) {
  ExperimentConfig cfg = ExperimentConfig::parse_file(f.config);
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (f.threads > 0) {
    cfg.threads = f.threads;
  } else if (const char* env = std::getenv("WKG_THREADS")) {
    cfg.threads = std::max(1, std::atoi(env));
  }
  return cfg;
}

int cmd_run(const CommonFlags& f) {
  const ExperimentConfig cfg = load_config(f);
  const RunResult r = run_experiment(cfg);
  for (const auto& [k, ok] : r.verdicts)
    std::cout << (ok ? "PASS " : "FAIL ") << k << '\n';
  return r.exit_code;
}

int cmd_check_data(const CommonFlags& f) {
  const ExperimentConfig cfg = load_config(f);
  HypothesisReport rep;
  if (cfg.system == ExperimentConfig::System::Dkg) {
    const DkgData d = make_dkg_data(cfg);
    rep = hypothesis_check_dkg(d.closed, cfg.grid, cfg.hyp_K0, cfg.hyp_epsilon, cfg.hyp_N,
                               cfg.hyp_CKS);
  } else {
    const KgzData d = make_kgz_data(cfg);
    rep = hypothesis_check_kgz(d.closed, cfg.grid, cfg.hyp_K0, cfg.hyp_epsilon, cfg.hyp_N,
                               cfg.hyp_CKS);
  }
  json out;
  out["schema_version"] = 1;
  out["K0"] = rep.K0;
  out["epsilon"] = rep.epsilon;
  out["N"] = rep.N;
  out["C_KS"] = rep.C_KS;
  out["eq16_bound"] = rep.eq16_bound;
  for (const auto& c : rep.conditions) {
    out["conditions"][c.name] = {
        {"measured", c.measured}, {"bound", c.bound}, {"margin", c.margin}, {"pass", c.pass}};
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured
              << "  bound=" << c.bound << '\n';
  }
  if (!f.out.empty()) {
    std::ofstream os(f.out + "/hypothesis.json");
    os << out.dump(2) << '\n';
  }
  return rep.all_pass() ? 0 : 1;
}

int cmd_fit(const std::string& csv_path, double tmin, double tmax) {
  std::ifstream is(csv_path);
  if (!is) {
    std::cerr << "fit: cannot open " << csv_path << '\n';
    return 2;
  }
  std::string line;
  std::getline(is, line);  // header
  std::vector<std::pair<double, double>> series;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    series.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  const DecayFit fit = decay_fit(series, csv_path, tmin, tmax);
  json out = {{"exponent", fit.exponent},
              {"r2", fit.r2},
              {"window", {fit.t_min, fit.t_max}},
              {"ratio_max_min", fit.ratio_max_min}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_identities() {
  int failures = 0;
  auto check = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  value=" << value << "  tol=" << tol
              << '\n';
    if (!ok) ++failures;
  };

  const GammaSet g = GammaSet::standard();
  check("clifford residual", g.clifford_residual(), 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Spinor4 a, b;
    for (int c = 0; c < 4; ++c) {
      a[static_cast<std::size_t>(c)] = Complex(u(rng), u(rng));
      b[static_cast<std::size_t>(c)] = Complex(u(rng), u(rng));
    }
    const UnitDirection w = UnitDirection::normalized({u(rng), u(rng), u(rng) + 2.0});
    worst = std::fmax(worst, g.bilinear_decomposition_residual(a, b, w));
  }
  check("bilinear decomposition residual (1000 samples)", worst, 1e-13);

  // keep the subject away from the kernel of Box so the residual has an
  // O(1) truncation signal instead of a rounding floor
  const GridSpec grid = GridSpec::box3d(2.0 * M_PI, 32);
  auto f = [](double t, const Vec3& x) { return std::sin(x[0]) * std::cos(2.0 * t); };
  const auto com = commutator_residual(VectorFieldId::L1, f, grid, 0.3, 0.05);
  std::cout << "  [-Box,L1] residuals " << com.coarse << " -> " << com.fine << '\n';
  check("[-Box, L1] convergence gap (order >= 3.5 means value <= 0)", 3.5 - com.order, 0.0);
  const auto com0 = commutator_residual(VectorFieldId::L0, f, grid, 0.3, 0.05);
  std::cout << "  [-Box,L0]+2Box residuals " << com0.coarse << " -> " << com0.fine << '\n';
  check("[-Box, L0] + 2 Box convergence gap", 3.5 - com0.order, 0.0);

  auto gfun = [](double t, const Vec3& x) { return std::sin(x[0] + x[1] + 2.0 * t); };
  const double leib_c = q0_leibniz_residual(VectorFieldId::L1, f, gfun, grid, 0.3, 0.05);
  const double leib_f = q0_leibniz_residual(VectorFieldId::L1, f, gfun,
                                            GridSpec::box3d(2.0 * M_PI, 64), 0.3, 0.025);
  std::cout << "  Q0 Leibniz residuals " << leib_c << " -> " << leib_f << '\n';
  check("Q0 Leibniz convergence gap (ratio >= 8)", 8.0 - leib_c / leib_f, 0.0);

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Klein-Gordon-Zakharov / Dirac-Klein-Gordon numerical laboratory"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* run = app.add_subcommand("run", "execute a configured campaign");
  run->add_option("--config", flags.config, "config file")->required();
  run->add_option("--out", flags.out, "output directory override");
  run->add_option("--seed", flags.seed, "seed override");
  run->add_option("--threads", flags.threads, "thread count (else WKG_THREADS)");

  auto* check = app.add_subcommand("check-data", "evaluate the theorem data conditions");
  check->add_option("--config", flags.config, "config file")->required();
  check->add_option("--out", flags.out, "output directory for hypothesis.json");
  check->add_option("--seed", flags.seed, "seed override");
  check->add_option("--threads", flags.threads, "thread count");

  std::string fit_csv;
  double fit_tmin = 1.0, fit_tmax = 10.0;
  auto* fit = app.add_subcommand("fit", "log-log decay fit of a stored series");
  fit->add_option("--series", fit_csv, "series CSV (t,value)")->required();
  fit->add_option("--tmin", fit_tmin, "window start");
  fit->add_option("--tmax", fit_tmax, "window end");

  auto* ident = app.add_subcommand("identities", "algebraic and commutator identity suite");

  std::string accept_presets = "presets";
  std::string accept_only;
  auto* accept = app.add_subcommand("accept", "run acceptance criteria (1..11)");
  accept->add_option("--presets", accept_presets, "preset directory");
  accept->add_option("--only", accept_only, "comma-separated criterion indices");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(flags);
    if (check->parsed()) return cmd_check_data(flags);
    if (fit->parsed()) return cmd_fit(fit_csv, fit_tmin, fit_tmax);
    if (ident->parsed()) return cmd_identities();
    if (accept->parsed()) {
      std::vector<int> subset;
      std::size_t pos = 0;
      while (pos < accept_only.size()) {
        subset.push_back(std::atoi(accept_only.c_str() + pos));
        const auto comma = accept_only.find(',', pos);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      int failures = 0;
      for (const auto& r : run_all_criteria(accept_presets, subset)) {
        std::printf("[%s] criterion %2d  %-42s (%.1f s)  %s\n", r.pass ? "PASS" : "FAIL",
                    r.index, r.name.c_str(), r.seconds, r.detail.c_str());
        if (!r.pass) ++failures;
      }
      return failures == 0 ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const BlowUpError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
