#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "spark/io.hpp"
#include "spark/sysim.hpp"
#include "test_util.hpp"

using namespace spark;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spark_io_test_" + std::to_string(SplitMix64(::getpid()).next() % 1000000));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("3d csv round-trips through write and parse") {
  TempDir dir;
  const AngularGrid grid = testutil::make_uniform_grid(7, 9);
  SplitMix64 rng(55);
  Eigen::ArrayXd db(grid.size());
  for (Eigen::Index i = 0; i < db.size(); ++i) db[i] = -35.0 + 40.0 * rng.next_double();

  atomic_write_file(dir.file("p.csv"), pattern_csv_3d(grid, db));
  const RawPattern raw = load_pattern_csv_3d(dir.file("p.csv"));
  CHECK(raw.grid.n_theta() == 7);
  CHECK(raw.grid.n_phi() == 9);
  CHECK((raw.grid.theta() - grid.theta()).abs().maxCoeff() < 1e-12);
  CHECK((raw.grid.phi() - grid.phi()).abs().maxCoeff() < 1e-12);
  CHECK((raw.samples_db - db).abs().maxCoeff() == 0.0);  // %.17g round-trip
}

TEST_CASE("1d csv round-trips") {
  TempDir dir;
  const Eigen::ArrayXd axis = testutil::make_axis(19);
  SplitMix64 rng(56);
  Eigen::ArrayXd db(axis.size());
  for (Eigen::Index i = 0; i < db.size(); ++i) db[i] = -20.0 + 25.0 * rng.next_double();

  atomic_write_file(dir.file("c.csv"), cut_csv_1d(axis, db));
  const RawCut raw = load_pattern_csv_1d(dir.file("c.csv"));
  CHECK((raw.angles - axis).abs().maxCoeff() < 1e-12);
  CHECK((raw.samples_db - db).abs().maxCoeff() == 0.0);
}

TEST_CASE("parse errors carry line and column") {
  TempDir dir;
  atomic_write_file(dir.file("bad.csv"),
                    std::string("theta_deg\\phi_deg,0,30\n0,-10,-11\n10,-12,oops\n"));
  CHECK_THROWS_WITH_AS(load_pattern_csv_3d(dir.file("bad.csv")),
                       doctest::Contains("line 3, column 3"), ParseError);

  atomic_write_file(dir.file("nan.csv"),
                    std::string("theta_deg\\phi_deg,0,30\n0,-10,nan\n"));
  CHECK_THROWS_WITH_AS(load_pattern_csv_3d(dir.file("nan.csv")),
                       doctest::Contains("NaN"), ParseError);

  atomic_write_file(dir.file("ragged.csv"),
                    std::string("theta_deg\\phi_deg,0,30\n0,-10\n"));
  CHECK_THROWS_AS(load_pattern_csv_3d(dir.file("ragged.csv")), ParseError);

  atomic_write_file(dir.file("nonmono.csv"),
                    std::string("theta_deg\\phi_deg,0,30\n20,-1,-2\n10,-3,-4\n"));
  CHECK_THROWS_WITH_AS(load_pattern_csv_3d(dir.file("nonmono.csv")),
                       doctest::Contains("strictly increasing"), ParseError);

  CHECK_THROWS_AS(load_pattern_csv_3d(dir.file("missing.csv")), ParseError);
}

TEST_CASE("digest is stable and content-sensitive") {
  TempDir dir;
  atomic_write_file(dir.file("a.bin"), std::string("hello"));
  atomic_write_file(dir.file("b.bin"), std::string("hello"));
  atomic_write_file(dir.file("c.bin"), std::string("hellp"));
  const std::string da = file_digest(dir.file("a.bin"));
  CHECK(da == file_digest(dir.file("b.bin")));
  CHECK(da != file_digest(dir.file("c.bin")));
  CHECK(da.rfind("fnv1a64:", 0) == 0);
  CHECK(da.size() == 8 + 16);
}

TEST_CASE("atomic write replaces content and leaves no temp file") {
  TempDir dir;
  atomic_write_file(dir.file("out.txt"), std::string("one"));
  atomic_write_file(dir.file("out.txt"), std::string("two"));
  std::ifstream in(dir.file("out.txt"));
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "two");
  CHECK_FALSE(fs::exists(dir.file("out.txt.tmp")));
}

TEST_CASE("report json carries the documented keys") {
  const auto synth = testutil::make_spark_pattern(16, 20, 3, 0.01);
  const FitReport report =
      fit_spark(synth.pattern, 3, 2, PeakSelectionConfig{}, NlsConfig{}, 1);
  const Json j = fit_report_json(report);
  CHECK(j["mode"] == "sphere3d");
  CHECK(j.contains("mse"));
  CHECK(j["mse_history"].size() == 3);
  CHECK(j["centers"].size() == 2);
  CHECK(j["model"]["k"] == 2);
  CHECK(j["model"]["coefficients"].size() == 16);
  CHECK(j["model"]["grid"]["n_theta"] == 16);

  // 1d report documents the Fourier period convention
  const auto synth1d = testutil::make_fourier_cut(61, 2, 4);
  const FitReport r1 = fit_spark_1d(synth1d.cut, 2, 1, PeakSelectionConfig{}, NlsConfig{}, 0);
  const Json j1 = fit_report_json(r1);
  CHECK(j1["mode"] == "cut1d");
  CHECK(j1["model"].contains("fourier_period"));
}

TEST_CASE("sim json and slots csv") {
  SimConfig cfg;
  cfg.users = 10;
  cfg.trials = 500;
  const SimReport r = run_simulation(cfg);
  const Json j = sim_report_json(r);
  CHECK(j["users"] == 10);
  CHECK(j["nr"]["mean_bits"] == 2200.0);
  CHECK(j.contains("gain_pct_mean"));

  const std::string csv = sim_slots_csv({r});
  CHECK(csv.rfind("scheme,users,overhead_slots,data_slots\n", 0) == 0);
  CHECK(csv.find("\nnr,10,") != std::string::npos);
  CHECK(csv.find("\nspark,10,") != std::string::npos);
}

TEST_CASE("eval rows emitters") {
  std::vector<EvalRow> rows = {{"alpha", 36, 0.01, 1.0, "alpha"},
                               {"beta", 48, 0.005, 2.0, "alpha"}};
  const std::string csv = eval_rows_csv(rows);
  CHECK(csv == "method,params,mse,improvement,baseline\n"
               "alpha,36,0.01,1,alpha\n"
               "beta,48,0.0050000000000000001,2,alpha\n");
  const Json j = eval_rows_json(rows);
  CHECK(j.size() == 2);
  CHECK(j[1]["improvement"] == 2.0);
}
