// Drives the installed CLI binary end to end through temp directories.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "spark/io.hpp"
#include "spark/kernels.hpp"
#include "spark/metrics.hpp"
#include "spark/pattern.hpp"
#include "spark/sysim.hpp"
#include "test_util.hpp"

using namespace spark;
namespace fs = std::filesystem;

#ifndef SPARK_CLI_PATH
#error "SPARK_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spark_cli_test_" + std::to_string(SplitMix64(::getpid()).next() % 1000000));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(SPARK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_test_pattern(const std::string& path) {
  const auto synth = testutil::make_sharp_lobe_pattern(24, 36, 2718);
  // back out a dB file whose normalization reproduces the synthetic values
  const Eigen::ArrayXd db = 10.0 * (synth.pattern.values + 0.05).log10();
  atomic_write_file(path, pattern_csv_3d(synth.pattern.grid, db));
}

void write_test_cut(const std::string& path) {
  const auto synth = testutil::make_narrow_peak_cut(121, 333);
  const Eigen::ArrayXd db = 10.0 * (synth.cut.values + 0.05).log10();
  atomic_write_file(path, cut_csv_1d(synth.cut.angles, db));
}

}  // namespace

TEST_CASE("fit applies the documented defaults per mode") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("fit " + dir.file("p.csv") + " --out " + dir.file("m.spark") +
              " --report " + dir.file("r.json")) == 0);
  const Json report = Json::parse(slurp(dir.file("r.json")));
  CHECK(report["config"]["lmax"] == 5);
  CHECK(report["config"]["gaussians"] == 4);
  CHECK(report["config"]["refine"] == 4);
  CHECK(report["model"]["continuous_params"] == 48);

  write_test_cut(dir.file("c.csv"));
  REQUIRE(run("fit " + dir.file("c.csv") + " --mode 1d --out " + dir.file("m1.spark") +
              " --report " + dir.file("r1.json")) == 0);
  const Json report1 = Json::parse(slurp(dir.file("r1.json")));
  CHECK(report1["config"]["harmonics"] == 4);
  CHECK(report1["config"]["gaussians"] == 5);
  CHECK(report1["model"]["continuous_params"] == 19);
  CHECK(report1["model"].contains("fourier_period"));
}

TEST_CASE("fit then reconstruct reproduces the reported error within codec tolerance") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("fit " + dir.file("p.csv") + " --out " + dir.file("m.spark") +
              " --report " + dir.file("r.json")) == 0);
  REQUIRE(run("reconstruct " + dir.file("m.spark") + " --out " + dir.file("rec.csv")) == 0);

  const Json report = Json::parse(slurp(dir.file("r.json")));
  const RawPattern raw = load_pattern_csv_3d(dir.file("p.csv"));
  const NormalizedPattern truth = normalize(raw);
  const RawPattern rec = load_pattern_csv_3d(dir.file("rec.csv"));
  // reconstruction CSV holds normalized values in the sample slots
  const double err = mse(truth.values, rec.samples_db);
  CHECK(std::abs(err - report["mse"].get<double>()) <= 1e-4);
}

TEST_CASE("denormalized reconstruction spans the calibration range") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("fit " + dir.file("p.csv") + " --out " + dir.file("m.spark")) == 0);
  REQUIRE(run("reconstruct " + dir.file("m.spark") + " --denormalize --out " +
              dir.file("rec.csv")) == 0);
  const RawPattern raw = load_pattern_csv_3d(dir.file("p.csv"));
  const NormalizedPattern truth = normalize(raw);
  const RawPattern rec = load_pattern_csv_3d(dir.file("rec.csv"));
  CHECK(rec.samples_db.minCoeff() >= truth.calibration.lin_min - 1e-6);
  CHECK(rec.samples_db.maxCoeff() <=
        truth.calibration.lin_max + 0.05 * truth.calibration.range());
  CHECK(rec.samples_db.maxCoeff() > 0.5 * truth.calibration.lin_max);
}

TEST_CASE("reconstruct on an explicit grid file") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("fit " + dir.file("p.csv") + " --out " + dir.file("m.spark")) == 0);
  REQUIRE(run("reconstruct " + dir.file("m.spark") + " --grid " + dir.file("p.csv") +
              " --out " + dir.file("rec.csv")) == 0);
  const RawPattern rec = load_pattern_csv_3d(dir.file("rec.csv"));
  CHECK(rec.grid.n_theta() == 24);
  CHECK(rec.grid.n_phi() == 36);
}

TEST_CASE("failures exit nonzero and leave no partial outputs") {
  TempDir dir;
  CHECK(run("fit " + dir.file("missing.csv") + " --out " + dir.file("m.spark")) != 0);
  CHECK_FALSE(fs::exists(dir.file("m.spark")));

  atomic_write_file(dir.file("bad.csv"),
                    std::string("theta_deg\\phi_deg,0,30\n0,-10,nan\n10,-1,-2\n"));
  CHECK(run("fit " + dir.file("bad.csv") + " --out " + dir.file("m.spark")) != 0);
  CHECK_FALSE(fs::exists(dir.file("m.spark")));

  atomic_write_file(dir.file("corrupt.spark"), std::string("not a model"));
  CHECK(run("reconstruct " + dir.file("corrupt.spark") + " --out " +
            dir.file("rec.csv")) != 0);
  CHECK_FALSE(fs::exists(dir.file("rec.csv")));
  CHECK(run("dump " + dir.file("corrupt.spark")) != 0);
}

TEST_CASE("identical invocations produce identical bytes") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("fit " + dir.file("p.csv") + " --out " + dir.file("a.spark") +
              " --report " + dir.file("a.json")) == 0);
  REQUIRE(run("fit " + dir.file("p.csv") + " --out " + dir.file("b.spark") +
              " --report " + dir.file("b.json")) == 0);
  CHECK(slurp(dir.file("a.spark")) == slurp(dir.file("b.spark")));
  CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));

  REQUIRE(run("simulate --users 10 --trials 5000 --seed 42 --out " + dir.file("s1.json") +
              " --fig-csv " + dir.file("f1.csv")) == 0);
  REQUIRE(run("simulate --users 10 --trials 5000 --seed 42 --out " + dir.file("s2.json") +
              " --fig-csv " + dir.file("f2.csv")) == 0);
  CHECK(slurp(dir.file("s1.json")) == slurp(dir.file("s2.json")));
  CHECK(slurp(dir.file("f1.csv")) == slurp(dir.file("f2.csv")));
}

TEST_CASE("simulate requires a seed and writes manifests") {
  TempDir dir;
  CHECK(run("simulate --users 10 --trials 100 --out " + dir.file("s.json")) != 0);
  REQUIRE(run("simulate --users 10 --trials 100 --seed 1 --out " + dir.file("s.json")) == 0);
  CHECK(fs::exists(dir.file("s.json.manifest.json")));
  const Json manifest = Json::parse(slurp(dir.file("s.json.manifest.json")));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["config"]["seed"] == 1);
  CHECK(manifest["outputs"].size() == 1);
}

TEST_CASE("compare writes full-precision rows") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("compare " + dir.file("p.csv") + " --methods sh:5,spark:5:4 --refine 2"
              " --out-csv " + dir.file("t.csv") + " --out-json " + dir.file("t.json")) == 0);
  const std::string csv = slurp(dir.file("t.csv"));
  CHECK(csv.rfind("method,params,mse,improvement,baseline\n", 0) == 0);
  const Json rows = Json::parse(slurp(dir.file("t.json")))["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["params"] == 36);
  CHECK(rows[1]["params"] == 48);
  CHECK(rows[1]["mse"].get<double>() < rows[0]["mse"].get<double>());
}

TEST_CASE("simulate sweeps coherence from a comma list") {
  TempDir dir;
  REQUIRE(run("simulate --users 50 --trials 2000 --seed 3 --sweep-T 10,100,500 --out " +
              dir.file("s.json")) == 0);
  const Json j = Json::parse(slurp(dir.file("s.json")));
  REQUIRE(j["reports"].size() == 3);
  CHECK(j["reports"][0]["coherence_snapshots"] == 10.0);
  CHECK(j["reports"][2]["coherence_snapshots"] == 500.0);
  // broadcast amortization shrinks with T
  CHECK(j["reports"][0]["spark"]["mean_bits"].get<double>() >
        j["reports"][2]["spark"]["mean_bits"].get<double>());
}

TEST_CASE("compare falls back to the documented default method set") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  REQUIRE(run("compare " + dir.file("p.csv") + " --refine 1 --out-json " +
              dir.file("t.json")) == 0);
  const Json rows = Json::parse(slurp(dir.file("t.json")))["rows"];
  REQUIRE(rows.size() == 4);
  CHECK(rows[0]["method"] == "sh-only-l5");
  CHECK(rows[1]["method"] == "sh-only-l10");
  CHECK(rows[2]["method"] == "sequential-5-k4");
  CHECK(rows[3]["method"] == "spark-5-k4");
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir dir;
  write_test_pattern(dir.file("p.csv"));
  atomic_write_file(dir.file("cfg.ini"), std::string("[fit]\nlmax=3\ngaussians=2\n"));

  REQUIRE(run("--config " + dir.file("cfg.ini") + " fit " + dir.file("p.csv") +
              " --out " + dir.file("m.spark") + " --report " + dir.file("r.json")) == 0);
  Json report = Json::parse(slurp(dir.file("r.json")));
  CHECK(report["config"]["lmax"] == 3);
  CHECK(report["config"]["gaussians"] == 2);

  REQUIRE(run("--config " + dir.file("cfg.ini") + " fit " + dir.file("p.csv") +
              " --lmax 4 --out " + dir.file("m2.spark") + " --report " +
              dir.file("r2.json")) == 0);
  report = Json::parse(slurp(dir.file("r2.json")));
  CHECK(report["config"]["lmax"] == 4);
  CHECK(report["config"]["gaussians"] == 2);
}
