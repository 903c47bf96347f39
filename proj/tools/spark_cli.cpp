// Command-line front end: ingestion, fitting, encoding, reconstruction,
// comparison tables, and the feedback-overhead simulator, wired into
// reproducible runs. Every command that writes files also writes a manifest
// capturing the resolved configuration and input digests; outputs are
// written atomically and removed again if the command fails midway.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "spark/codec.hpp"
#include "spark/fit.hpp"
#include "spark/io.hpp"
#include "spark/metrics.hpp"
#include "spark/reconstruct.hpp"
#include "spark/sysim.hpp"
#include "spark/version.hpp"

namespace {

using spark::Json;

// Files written by the current command; removed when the command fails so
// failures never leave partial results behind.
class OutputTracker {
 public:
  void write_text(const std::string& path, const std::string& content) {
    spark::atomic_write_file(path, content);
    written_.push_back(path);
  }
  void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    spark::atomic_write_file(path, bytes);
    written_.push_back(path);
  }
  void discard_all() {
    for (const std::string& path : written_) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }

 private:
  std::vector<std::string> written_;
};

std::string default_manifest_path(const std::string& primary_out) {
  return primary_out + ".manifest.json";
}

Json manifest_json(const std::string& command, const Json& config,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  Json m;
  m["tool"] = spark::kToolName;
  m["version"] = spark::kToolVersion;
  m["command"] = command;
  m["config"] = config;
  Json in = Json::array();
  for (const std::string& path : inputs) {
    in.push_back(Json{{"path", path}, {"digest", spark::file_digest(path)}});
  }
  m["inputs"] = in;
  m["outputs"] = outputs;
  return m;
}

struct FitOptions {
  std::string input;
  std::string mode = "3d";
  int l_max = 5;
  int harmonics = 4;
  int gaussians = -1;  // resolved per mode
  int refine = 4;
  double epsilon = spark::kDefaultEpsilon;
  spark::PeakSelectionConfig peak;
  spark::NlsConfig nls;
  std::string out;
  std::string report;
  std::string manifest;

  int resolved_gaussians() const {
    if (gaussians >= 0) return gaussians;
    return mode == "3d" ? 4 : 5;
  }
};

void add_fit_flags(CLI::App* cmd, FitOptions& opt) {
  cmd->add_option("--lmax", opt.l_max, "spherical-harmonic order for 3d fits")
      ->capture_default_str();
  cmd->add_option("--harmonics", opt.harmonics, "Fourier harmonics for 1d fits")
      ->capture_default_str();
  cmd->add_option("--gaussians", opt.gaussians,
                  "kernel count (default 4 for 3d, 5 for 1d)");
  cmd->add_option("--refine", opt.refine, "alternating refinement rounds")
      ->capture_default_str();
  cmd->add_option("--epsilon", opt.epsilon, "normalization stabilizer")
      ->capture_default_str();
  cmd->add_option("--peak-sigma", opt.peak.smoothing_sigma,
                  "residual smoothing width in grid cells")
      ->capture_default_str();
  cmd->add_option("--peak-tau", opt.peak.threshold_tau,
                  "candidate threshold as a fraction of the smoothed max")
      ->capture_default_str();
  cmd->add_option("--peak-window", opt.peak.window_radius,
                  "prominence window radius in cells")
      ->capture_default_str();
  cmd->add_option("--peak-minsep", opt.peak.min_separation,
                  "center separation floor in radians")
      ->capture_default_str();
  cmd->add_option("--width-init", opt.nls.width_init, "initial kernel width in radians")
      ->capture_default_str();
  cmd->add_option("--nls-max-iter", opt.nls.max_iterations, "solver iteration cap")
      ->capture_default_str();
  cmd->add_option("--nls-cost-tol", opt.nls.cost_tolerance, "relative cost tolerance")
      ->capture_default_str();
  cmd->add_option("--nls-step-tol", opt.nls.step_tolerance, "step-size tolerance")
      ->capture_default_str();
}

Json fit_config_json(const FitOptions& opt) {
  Json j;
  j["mode"] = opt.mode;
  if (opt.mode == "3d") {
    j["lmax"] = opt.l_max;
  } else {
    j["harmonics"] = opt.harmonics;
  }
  j["gaussians"] = opt.resolved_gaussians();
  j["refine"] = opt.refine;
  j["epsilon"] = opt.epsilon;
  j["peak"] = Json{{"sigma", opt.peak.smoothing_sigma},
                   {"tau", opt.peak.threshold_tau},
                   {"window", opt.peak.window_radius},
                   {"minsep", opt.peak.min_separation}};
  j["nls"] = Json{{"width_init", opt.nls.width_init},
                  {"max_iterations", opt.nls.max_iterations},
                  {"cost_tolerance", opt.nls.cost_tolerance},
                  {"step_tolerance", opt.nls.step_tolerance},
                  {"amplitude_bounds",
                   Json::array({opt.nls.amplitude_min, opt.nls.amplitude_max})},
                  {"width_bounds", Json::array({opt.nls.width_min, opt.nls.width_max})}};
  return j;
}

spark::FitReport run_fit_for(const FitOptions& opt) {
  if (opt.mode == "3d") {
    const spark::RawPattern raw = spark::load_pattern_csv_3d(opt.input);
    const spark::NormalizedPattern pattern = spark::normalize(raw, opt.epsilon);
    return spark::fit_spark(pattern, opt.l_max, opt.resolved_gaussians(), opt.peak,
                            opt.nls, opt.refine);
  }
  const spark::RawCut raw = spark::load_pattern_csv_1d(opt.input);
  const spark::NormalizedCut cut = spark::normalize(raw, opt.epsilon);
  return spark::fit_spark_1d(cut, opt.harmonics, opt.resolved_gaussians(), opt.peak,
                             opt.nls, opt.refine);
}

int cmd_fit(const FitOptions& opt) {
  OutputTracker outputs;
  try {
    const spark::FitReport report = run_fit_for(opt);
    const std::vector<std::uint8_t> encoded = spark::encode(report.model);
    outputs.write_bytes(opt.out, encoded);

    Json rj = spark::fit_report_json(report);
    rj["tool"] = spark::kToolName;
    rj["version"] = spark::kToolVersion;
    rj["input"] = opt.input;
    rj["config"] = fit_config_json(opt);
    if (!opt.report.empty()) outputs.write_text(opt.report, rj.dump(2) + "\n");

    const std::string manifest_path =
        opt.manifest.empty() ? default_manifest_path(opt.out) : opt.manifest;
    std::vector<std::string> out_paths = {opt.out};
    if (!opt.report.empty()) out_paths.push_back(opt.report);
    outputs.write_text(
        manifest_path,
        manifest_json("fit", fit_config_json(opt), {opt.input}, out_paths).dump(2) + "\n");

    std::printf("fit: %s -> %s (mse %.6g, %d continuous params)\n", opt.input.c_str(),
                opt.out.c_str(), report.mse, report.model.continuous_param_count());
    return 0;
  } catch (const std::exception& e) {
    outputs.discard_all();
    std::cerr << "spark fit: " << e.what() << "\n";
    return 1;
  }
}

struct ReconstructOptions {
  std::string model_path;
  std::string grid = "from-model";
  bool denormalize = false;
  std::string out;
  std::string manifest;
};

int cmd_reconstruct(const ReconstructOptions& opt) {
  OutputTracker outputs;
  try {
    const spark::SparkModel model = spark::decode(spark::read_binary_file(opt.model_path));
    std::vector<std::string> inputs = {opt.model_path};

    std::string csv;
    if (model.mode == spark::PatternMode::Sphere3D) {
      spark::AngularGrid grid = model.grid;
      if (opt.grid != "from-model") {
        grid = spark::load_pattern_csv_3d(opt.grid).grid;
        inputs.push_back(opt.grid);
      }
      Eigen::ArrayXd values = spark::reconstruct(model, grid);
      if (opt.denormalize) values = spark::denormalize(values, model.calibration);
      csv = spark::pattern_csv_3d(grid, values);
    } else {
      Eigen::ArrayXd axis = model.axis;
      if (opt.grid != "from-model") {
        axis = spark::load_pattern_csv_1d(opt.grid).angles;
        inputs.push_back(opt.grid);
      }
      Eigen::ArrayXd values = spark::reconstruct(model, axis);
      if (opt.denormalize) values = spark::denormalize(values, model.calibration);
      csv = spark::cut_csv_1d(axis, values);
    }
    outputs.write_text(opt.out, csv);

    Json config;
    config["grid"] = opt.grid;
    config["denormalize"] = opt.denormalize;
    const std::string manifest_path =
        opt.manifest.empty() ? default_manifest_path(opt.out) : opt.manifest;
    outputs.write_text(
        manifest_path,
        manifest_json("reconstruct", config, inputs, {opt.out}).dump(2) + "\n");
    std::printf("reconstruct: %s -> %s\n", opt.model_path.c_str(), opt.out.c_str());
    return 0;
  } catch (const std::exception& e) {
    outputs.discard_all();
    std::cerr << "spark reconstruct: " << e.what() << "\n";
    return 1;
  }
}

struct CompareOptions {
  FitOptions fit;  // shares ingestion and solver knobs
  std::string methods;
  std::string out_json;
  std::string out_csv;
};

std::vector<spark::MethodSpec> parse_methods(const std::string& text, int refine) {
  std::vector<spark::MethodSpec> specs;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ts(token);
    std::string part;
    while (std::getline(ts, part, ':')) parts.push_back(part);
    const auto geti = [&](std::size_t idx) {
      if (idx >= parts.size()) {
        throw CLI::ValidationError("--methods", "missing field in '" + token + "'");
      }
      return std::stoi(parts[idx]);
    };
    spark::MethodSpec spec;
    spec.refine = refine;
    if (parts[0] == "sh") {
      spec.kind = spark::MethodSpec::Kind::ShOnly;
      spec.order = geti(1);
    } else if (parts[0] == "fourier") {
      spec.kind = spark::MethodSpec::Kind::FourierOnly;
      spec.order = geti(1);
    } else if (parts[0] == "seq") {
      spec.kind = spark::MethodSpec::Kind::SequentialHybrid;
      spec.order = geti(1);
      spec.k = geti(2);
    } else if (parts[0] == "spark") {
      spec.kind = spark::MethodSpec::Kind::Spark;
      spec.order = geti(1);
      spec.k = geti(2);
    } else {
      throw CLI::ValidationError("--methods", "unknown method '" + parts[0] + "'");
    }
    specs.push_back(spec);
  }
  if (specs.empty()) throw CLI::ValidationError("--methods", "empty method list");
  return specs;
}

int cmd_compare(const CompareOptions& opt) {
  OutputTracker outputs;
  try {
    std::string methods_text = opt.methods;
    if (methods_text.empty()) {
      methods_text = opt.fit.mode == "3d" ? "sh:5,sh:10,seq:5:4,spark:5:4"
                                          : "fourier:10,seq:4:5,spark:4:5";
    }
    const std::vector<spark::MethodSpec> methods =
        parse_methods(methods_text, opt.fit.refine);

    std::vector<spark::EvalRow> rows;
    if (opt.fit.mode == "3d") {
      const spark::NormalizedPattern pattern =
          spark::normalize(spark::load_pattern_csv_3d(opt.fit.input), opt.fit.epsilon);
      rows = spark::comparison_table(pattern, methods, opt.fit.peak, opt.fit.nls);
    } else {
      const spark::NormalizedCut cut =
          spark::normalize(spark::load_pattern_csv_1d(opt.fit.input), opt.fit.epsilon);
      rows = spark::comparison_table(cut, methods, opt.fit.peak, opt.fit.nls);
    }

    // rendered table scales MSE by 1e-3; the files keep full precision
    std::printf("%-20s %8s %14s %10s\n", "method", "params", "mse (x1e-3)", "improv.");
    for (const spark::EvalRow& row : rows) {
      std::printf("%-20s %8d %14.4f %9.2fx\n", row.method.c_str(), row.param_count,
                  row.mse * 1e3, row.improvement_vs_baseline);
    }

    Json config = fit_config_json(opt.fit);
    config["methods"] = methods_text;
    std::vector<std::string> out_paths;
    if (!opt.out_json.empty()) {
      Json j;
      j["tool"] = spark::kToolName;
      j["version"] = spark::kToolVersion;
      j["input"] = opt.fit.input;
      j["config"] = config;
      j["rows"] = spark::eval_rows_json(rows);
      outputs.write_text(opt.out_json, j.dump(2) + "\n");
      out_paths.push_back(opt.out_json);
    }
    if (!opt.out_csv.empty()) {
      outputs.write_text(opt.out_csv, spark::eval_rows_csv(rows));
      out_paths.push_back(opt.out_csv);
    }
    if (!out_paths.empty()) {
      const std::string manifest_path = default_manifest_path(out_paths.front());
      outputs.write_text(
          manifest_path,
          manifest_json("compare", config, {opt.fit.input}, out_paths).dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    outputs.discard_all();
    std::cerr << "spark compare: " << e.what() << "\n";
    return 1;
  }
}

struct SimulateOptions {
  std::vector<int> users = {50};
  long long trials = 100000;
  double coherence = 100.0;
  std::uint64_t seed = 0;
  std::string sweep_t;
  std::string out;
  std::string fig_csv;
  std::string manifest;
  spark::SimConfig base;
};

std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    // a:b:n, n geometrically spaced points from a to b
    double a = 0.0, b = 0.0;
    int n = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 2 || a <= 0.0 ||
        b <= a) {
      throw CLI::ValidationError("--sweep-T", "expected a:b:n with 0 < a < b, n >= 2");
    }
    for (int i = 0; i < n; ++i) {
      values.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    }
  } else {
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (!token.empty()) values.push_back(std::stod(token));
    }
  }
  if (values.empty()) throw CLI::ValidationError("--sweep-T", "empty sweep");
  return values;
}

int cmd_simulate(const SimulateOptions& opt) {
  OutputTracker outputs;
  try {
    std::vector<double> t_values = {opt.coherence};
    if (!opt.sweep_t.empty()) t_values = parse_sweep(opt.sweep_t);

    std::vector<spark::SimReport> reports;
    for (int users : opt.users) {
      spark::SimConfig cfg = opt.base;
      cfg.users = users;
      cfg.trials = opt.trials;
      cfg.rng_seed = opt.seed;
      for (const spark::SimReport& r : spark::coherence_sweep(cfg, t_values)) {
        reports.push_back(r);
      }
    }

    for (const spark::SimReport& r : reports) {
      std::printf(
          "simulate: users=%2d T=%-7g overhead %.2f kb vs %.2f±%.2f kb, gain %.2f%%, "
          "uplift %.2f Mbps\n",
          r.users, r.coherence_snapshots, r.nr_bits_mean / 1000.0,
          r.spark_bits_mean / 1000.0, r.spark_bits_std / 1000.0, r.gain_pct_mean,
          r.uplift_mbps_mean);
    }

    Json config;
    config["users"] = opt.users;
    config["trials"] = opt.trials;
    config["coherence"] = opt.coherence;
    config["seed"] = opt.seed;
    if (!opt.sweep_t.empty()) config["sweep_T"] = opt.sweep_t;
    config["slot_capacity_bits"] = opt.base.slot_capacity_bits;
    config["link_capacity_mbps"] = opt.base.link_capacity_mbps;
    config["uplink_slots"] = opt.base.uplink_slots;
    config["poisson_lambda"] = opt.base.poisson_lambda;
    config["nr_report_bits"] = opt.base.nr_report_bits();
    config["broadcast_bits"] = opt.base.broadcast_bits();

    std::vector<std::string> out_paths;
    if (!opt.out.empty()) {
      Json j;
      j["tool"] = spark::kToolName;
      j["version"] = spark::kToolVersion;
      j["config"] = config;
      Json arr = Json::array();
      for (const spark::SimReport& r : reports) arr.push_back(spark::sim_report_json(r));
      j["reports"] = arr;
      outputs.write_text(opt.out, j.dump(2) + "\n");
      out_paths.push_back(opt.out);
    }
    if (!opt.fig_csv.empty()) {
      outputs.write_text(opt.fig_csv, spark::sim_slots_csv(reports));
      out_paths.push_back(opt.fig_csv);
    }
    if (!out_paths.empty()) {
      const std::string manifest_path =
          opt.manifest.empty() ? default_manifest_path(out_paths.front()) : opt.manifest;
      outputs.write_text(manifest_path,
                         manifest_json("simulate", config, {}, out_paths).dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    outputs.discard_all();
    std::cerr << "spark simulate: " << e.what() << "\n";
    return 1;
  }
}

int cmd_dump(const std::string& model_path) {
  try {
    const std::vector<std::uint8_t> bytes = spark::read_binary_file(model_path);
    const spark::SparkModel model = spark::decode(bytes);
    const bool sphere = model.mode == spark::PatternMode::Sphere3D;

    std::printf("file: %s (%zu bytes)\n", model_path.c_str(), bytes.size());
    std::printf("mode: %s\n", sphere ? "sphere3d" : "cut1d");
    if (sphere) {
      std::printf("l_max: %d, kernels: %d, grid: %lld x %lld\n", model.l_max,
                  model.kernel_count(), static_cast<long long>(model.grid.n_theta()),
                  static_cast<long long>(model.grid.n_phi()));
    } else {
      std::printf("harmonics: %d, kernels: %d, axis samples: %lld\n", model.n_harmonics,
                  model.kernel_count(), static_cast<long long>(model.axis.size()));
    }
    std::printf("calibration: lin_min %.8g, lin_max %.8g\n", model.calibration.lin_min,
                model.calibration.lin_max);
    if (model.coeff_range) {
      std::printf("coefficient range: [%.8g, %.8g]\n", model.coeff_range->lo,
                  model.coeff_range->hi);
    }

    const spark::BitBudget budget = spark::bit_budget(
        model.mode, sphere ? model.l_max : model.n_harmonics, model.kernel_count(),
        sphere ? model.grid.n_theta() : model.axis.size(),
        sphere ? model.grid.n_phi() : 0);
    std::printf("%-22s %8s %12s %12s\n", "component", "count", "bits/value", "total");
    for (const spark::BitBudgetRow& row : budget.rows) {
      std::printf("%-22s %8lld %12d %12lld\n", row.component.c_str(), row.count,
                  row.bits_per_value, row.total_bits);
    }
    std::printf("continuous payload bits: %lld\n", budget.continuous_bits);
    if (budget.raw_bits > 0) {
      std::printf("raw grid at 16 bits/sample: %lld bits (%.1f:1)\n", budget.raw_bits,
                  budget.ratio_vs_raw);
    }

    std::printf("coefficients:");
    for (Eigen::Index i = 0; i < model.base_coeffs.size(); ++i) {
      std::printf(" %.6g", model.base_coeffs[i]);
    }
    std::printf("\n");
    if (sphere) {
      for (const spark::GaussianKernel2D& k : model.kernels2d) {
        std::printf(
            "kernel: theta %.6g phi %.6g sigma_theta %.6g sigma_phi %.6g amp %.6g\n",
            k.theta_c, k.phi_c, k.sigma_theta, k.sigma_phi, k.amplitude);
      }
    } else {
      for (const spark::GaussianKernel1D& k : model.kernels1d) {
        std::printf("kernel: center %.6g sigma %.6g amp %.6g\n", k.center, k.sigma,
                    k.amplitude);
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "spark dump: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compact parametric models for measured antenna and RIS patterns"};
  app.set_version_flag("--version",
                       std::string(spark::kToolName) + " " + spark::kToolVersion);
  app.set_config("--config", "", "flat key=value config file (sections per subcommand)");
  app.require_subcommand(1);

  // fit
  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "fit a pattern and write an encoded model");
  fit->add_option("input", fit_opt.input, "pattern CSV")->required();
  fit->add_option("--mode", fit_opt.mode, "3d (spherical) or 1d (azimuth cut)")
      ->check(CLI::IsMember({"3d", "1d"}))
      ->capture_default_str();
  add_fit_flags(fit, fit_opt);
  fit->add_option("--out", fit_opt.out, "encoded model path")->required();
  fit->add_option("--report", fit_opt.report, "fit report JSON path");
  fit->add_option("--manifest", fit_opt.manifest,
                  "manifest path (default <out>.manifest.json)");

  // reconstruct
  ReconstructOptions rec_opt;
  CLI::App* rec = app.add_subcommand("reconstruct", "evaluate an encoded model on a grid");
  rec->add_option("model", rec_opt.model_path, "encoded model path")->required();
  rec->add_option("--grid", rec_opt.grid, "'from-model' or a CSV whose grid to use")
      ->capture_default_str();
  rec->add_flag("--denormalize", rec_opt.denormalize,
                "apply the calibration scalars to emit linear power");
  rec->add_option("--out", rec_opt.out, "output CSV path")->required();
  rec->add_option("--manifest", rec_opt.manifest, "manifest path");

  // compare
  CompareOptions cmp_opt;
  CLI::App* cmp = app.add_subcommand("compare", "tabulate methods on one pattern");
  cmp->add_option("input", cmp_opt.fit.input, "pattern CSV")->required();
  cmp->add_option("--mode", cmp_opt.fit.mode, "3d or 1d")
      ->check(CLI::IsMember({"3d", "1d"}))
      ->capture_default_str();
  add_fit_flags(cmp, cmp_opt.fit);
  cmp->add_option("--methods", cmp_opt.methods,
                  "comma list: sh:L, fourier:H, seq:ORDER:K, spark:ORDER:K "
                  "(default per mode)");
  cmp->add_option("--out-json", cmp_opt.out_json, "table JSON path");
  cmp->add_option("--out-csv", cmp_opt.out_csv, "table CSV path");

  // simulate
  SimulateOptions sim_opt;
  CLI::App* sim = app.add_subcommand("simulate", "feedback-overhead Monte Carlo");
  sim->add_option("--users", sim_opt.users, "user counts (repeatable or comma list)")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--trials", sim_opt.trials, "Monte Carlo trials")->capture_default_str();
  sim->add_option("--coherence", sim_opt.coherence, "broadcast amortization snapshots")
      ->capture_default_str();
  sim->add_option("--seed", sim_opt.seed, "RNG seed (runs are reproducible by seed)")
      ->required();
  sim->add_option("--sweep-T", sim_opt.sweep_t,
                  "coherence sweep: a:b:n geometric or a comma list");
  sim->add_option("--slot-capacity", sim_opt.base.slot_capacity_bits,
                  "bits per uplink slot")
      ->capture_default_str();
  sim->add_option("--link-capacity", sim_opt.base.link_capacity_mbps, "link rate in Mbps")
      ->capture_default_str();
  sim->add_option("--lambda", sim_opt.base.poisson_lambda, "mean extra paths per user")
      ->capture_default_str();
  sim->add_option("--out", sim_opt.out, "report JSON path");
  sim->add_option("--fig-csv", sim_opt.fig_csv, "plot-ready slot allocation CSV");
  sim->add_option("--manifest", sim_opt.manifest, "manifest path");

  // dump
  std::string dump_path;
  CLI::App* dump = app.add_subcommand("dump", "print a human-readable model decode");
  dump->add_option("model", dump_path, "encoded model path")->required();

  CLI11_PARSE(app, argc, argv);

  if (fit->parsed()) return cmd_fit(fit_opt);
  if (rec->parsed()) return cmd_reconstruct(rec_opt);
  if (cmp->parsed()) return cmd_compare(cmp_opt);
  if (sim->parsed()) return cmd_simulate(sim_opt);
  if (dump->parsed()) return cmd_dump(dump_path);
  return 1;
}
