#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkg/hypothesis.hpp"
#include "wkg/systems.hpp"

namespace wkg {

struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(const std::string& k, const std::string& msg)
      : std::runtime_error("config key '" + k + "': " + msg), key(k) {}
};

/// Flat dotted-key configuration (key=value lines, '#' comments). The full
/// grammar is documented in docs/config.md.
struct ExperimentConfig {
  enum class System { Kgz, Dkg, LinearOnly };

  System system = System::LinearOnly;
  GridSpec grid = GridSpec::box3d(8.0, 32);
  IntegratorConfig integrator{0.1, Scheme::StrangSplitting, true, 0.0};

  std::string family = "gaussian-bump";  // | certified-positive-pair | plane-mode | from-file
  double eps_scale = 0.01;
  double k0_scale = 1.0;
  double width = 2.0;
  Vec3 center = {0.0, 0.0, 0.0};
  double margin = 0.1;
  bool smooth_certified = true;
  std::array<int, 3> mode = {1, 0, 0};
  std::string file_prefix;

  double t_final = 1.0;
  double sample_dt = 0.25;
  std::vector<double> scattering_times;
  double fit_tmin = 0.0, fit_tmax = 0.0;  // both zero = no decay window
  double ratio_max = 3.0;
  std::vector<double> checkpoint_times;

  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  double delta = 0.05;

  // hypothesis-checker inputs (check-data subcommand)
  double hyp_K0 = 2.0;
  double hyp_epsilon = 1.0;
  int hyp_N = 10;
  double hyp_CKS = 1.0;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse(const std::map<std::string, std::string>& kv);
  std::map<std::string, std::string> to_kv() const;
  std::uint64_t config_hash() const;
  void validate() const;
};

struct KgzData {
  KgzClosedFormData closed;  // populated for the Gaussian-backed families
  KGZState state;
};
struct DkgData {
  DkgClosedFormData closed;
  DKGState state;
};

KgzData make_kgz_data(const ExperimentConfig& cfg);
DkgData make_dkg_data(const ExperimentConfig& cfg);

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 verdict failure, 3 blow-up
  std::map<std::string, bool> verdicts;
  std::map<std::string, double> metrics;
};

/// Execute one configured campaign: integrate, track energies, weighted
/// sups, scattering pull-backs; write CSV/JSON artifacts and checkpoints
/// under cfg.out_dir.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace wkg
