#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wkg/experiment.hpp"
#include "wkg/field_io.hpp"
#include "wkg/kirchhoff.hpp"
#include "wkg/norms.hpp"

using namespace wkg;

TEST_CASE("binary field round trip") {
  const GridSpec g = GridSpec::box3d(4.0, 16);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SUBCASE("scalar, bit exact") {
    ScalarField f(g, 1.25);
    for (std::int64_t i = 0; i < f.size(); ++i) f[i] = u(rng);
    std::stringstream ss;
    write_field(ss, f);
    const ScalarField r = read_scalar_field(ss);
    CHECK(r.grid() == g);
    CHECK(r.time() == 1.25);
    for (std::int64_t i = 0; i < f.size(); ++i) CHECK(r[i] == f[i]);
  }
  SUBCASE("spinor, bit exact") {
    SpinorField f(g, -0.5);
    for (std::int64_t i = 0; i < f.size(); ++i)
      for (int c = 0; c < 4; ++c)
        f[i][static_cast<std::size_t>(c)] = Complex(u(rng), u(rng));
    std::stringstream ss;
    write_field(ss, f);
    const SpinorField r = read_spinor_field(ss);
    for (std::int64_t i = 0; i < f.size(); ++i)
      for (int c = 0; c < 4; ++c)
        CHECK(r[i][static_cast<std::size_t>(c)] == f[i][static_cast<std::size_t>(c)]);
  }
  SUBCASE("component mismatch rejected") {
    ScalarField f(g, 0.0);
    std::stringstream ss;
    write_field(ss, f);
    CHECK_THROWS(read_vec3_field(ss));
  }
}

TEST_CASE("csv emission has the declared header") {
  const GridSpec g = GridSpec::radial(2.0, 4);
  ScalarField f(g, 0.0);
  std::stringstream ss;
  write_csv(ss, f);
  std::string first;
  std::getline(ss, first);
  CHECK(first == "x1,x2,x3,value");
}

TEST_CASE("config parsing") {
  SUBCASE("full round trip through the dotted-key grammar") {
    std::map<std::string, std::string> kv = {
        {"system.kind", "kgz"},       {"grid.kind", "radial"},
        {"grid.extent", "120"},       {"grid.points", "1200"},
        {"integrator.dt", "0.05"},    {"integrator.scheme", "rk4"},
        {"data.family", "gaussian-bump"}, {"data.eps_scale", "0.01"},
        {"data.k0_scale", "1.0"},     {"data.width", "3.0"},
        {"run.t_final", "50"},        {"run.sample_dt", "0.5"},
        {"diag.fit_window", "5,50"},  {"seed", "7"},
    };
    const ExperimentConfig c = ExperimentConfig::parse(kv);
    CHECK(c.system == ExperimentConfig::System::Kgz);
    CHECK(c.grid.kind() == GridKind::RadialLine1d);
    CHECK(c.grid.points_per_axis() == 1200);
    CHECK(c.integrator.scheme == Scheme::Rk4MethodOfLines);
    CHECK(c.fit_tmax == 50.0);
    CHECK(c.seed == 7);
  }
  SUBCASE("negative dt rejected naming the key") {
    std::map<std::string, std::string> kv = {{"integrator.dt", "-0.1"}};
    try {
      ExperimentConfig::parse(kv);
      CHECK(false);
    } catch (const ConfigError& e) {
      CHECK(e.key == "integrator.dt");
    }
  }
  SUBCASE("unknown keys rejected") {
    std::map<std::string, std::string> kv = {{"grid.banana", "1"}};
    CHECK_THROWS_AS(ExperimentConfig::parse(kv), ConfigError);
  }
  SUBCASE("window outside the uncontaminated region rejected") {
    std::map<std::string, std::string> kv = {
        {"system.kind", "kgz"}, {"grid.kind", "radial"},   {"grid.extent", "20"},
        {"grid.points", "200"}, {"integrator.dt", "0.05"}, {"integrator.scheme", "rk4"},
        {"diag.fit_window", "5,40"},
    };
    CHECK_THROWS_AS(ExperimentConfig::parse(kv), ConfigError);
  }
  SUBCASE("config hash is stable and seed-sensitive") {
    std::map<std::string, std::string> kv = {{"seed", "1"}};
    const auto a = ExperimentConfig::parse(kv).config_hash();
    const auto b = ExperimentConfig::parse(kv).config_hash();
    CHECK(a == b);
    kv["seed"] = "2";
    CHECK(ExperimentConfig::parse(kv).config_hash() != a);
  }
}

TEST_CASE("make_data families") {
  SUBCASE("zero amplitude gives zero data") {
    ExperimentConfig c;
    c.system = ExperimentConfig::System::Kgz;
    c.grid = GridSpec::box3d(8.0, 16);
    c.eps_scale = 0.0;
    c.k0_scale = 0.0;
    const KgzData d = make_kgz_data(c);
    CHECK(l2_norm(d.state.E) == 0.0);
    CHECK(l2_norm(d.state.n0) == 0.0);
  }
  SUBCASE("certified family is certified by construction (both variants)") {
    ExperimentConfig c;
    c.system = ExperimentConfig::System::Kgz;
    c.grid = GridSpec::box3d(8.0, 32);
    c.family = "certified-positive-pair";
    c.k0_scale = 0.8;
    c.width = 2.0;
    for (bool smooth : {true, false}) {
      c.smooth_certified = smooth;
      const KgzData d = make_kgz_data(c);
      // the certified pair is the wave Cauchy data (n0, d_t n0)
      const WaveData wd{d.state.n0, d.state.n0t, 0.0};
      CHECK(positivity_certificate(wd).certified);
    }
  }
  SUBCASE("plane-mode on radial grids is rejected") {
    std::map<std::string, std::string> kv = {
        {"grid.kind", "radial"}, {"grid.extent", "10"}, {"grid.points", "100"},
        {"data.family", "plane-mode"}, {"integrator.dt", "0.01"},
    };
    CHECK_THROWS_AS(ExperimentConfig::parse(kv), ConfigError);
  }
  SUBCASE("halved eps halves the measured data norms") {
    ExperimentConfig c;
    c.system = ExperimentConfig::System::Kgz;
    c.grid = GridSpec::box3d(8.0, 16);
    c.eps_scale = 0.4;
    const double n1 = l2_norm(make_kgz_data(c).state.E);
    c.eps_scale = 0.2;
    const double n2 = l2_norm(make_kgz_data(c).state.E);
    CHECK(n2 == doctest::Approx(0.5 * n1).epsilon(1e-12));
  }
}

TEST_CASE("linear-only run produces artifacts and reruns bit-identically") {
  namespace fs = std::filesystem;
  ExperimentConfig c;
  c.system = ExperimentConfig::System::LinearOnly;
  c.grid = GridSpec::box3d(6.0, 16);
  c.integrator.dt = 0.1;
  c.t_final = 0.5;
  c.sample_dt = 0.25;
  c.eps_scale = 0.0;
  c.k0_scale = 0.0;
  c.out_dir = "/tmp/wkg_test_run_a";
  const RunResult r1 = run_experiment(c);
  CHECK(r1.exit_code == 0);
  CHECK(fs::exists(c.out_dir + "/energy.csv"));
  CHECK(fs::exists(c.out_dir + "/summary.json"));
  CHECK(fs::exists(c.out_dir + "/manifest.txt"));
  // zero data: all-zero energies
  std::ifstream is(c.out_dir + "/energy.csv");
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(row.substr(0, 2) == "0,");

  c.out_dir = "/tmp/wkg_test_run_b";
  run_experiment(c);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  CHECK(slurp("/tmp/wkg_test_run_a/energy.csv") == slurp("/tmp/wkg_test_run_b/energy.csv"));
  CHECK(slurp("/tmp/wkg_test_run_a/series_primary.csv") ==
        slurp("/tmp/wkg_test_run_b/series_primary.csv"));
}

TEST_CASE("manifest round trip") {
  const std::string path = "/tmp/wkg_manifest_test.txt";
  write_manifest(path, {{"a", "1"}, {"b", "two"}});
  const auto kv = read_manifest(path);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two");
  std::remove(path.c_str());
}
