#include "spark/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spark/angles.hpp"

namespace spark {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace and stray carriage returns
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, std::size_t col,
                             const std::string& what) {
  throw ParseError(path + ": line " + std::to_string(line) + ", column " +
                   std::to_string(col) + ": " + what);
}

double parse_value(const std::string& path, std::size_t line, std::size_t col,
                   const std::string& token) {
  if (token.empty()) parse_fail(path, line, col, "empty field");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    parse_fail(path, line, col, "not a number: '" + token + "'");
  }
  if (std::isnan(v)) parse_fail(path, line, col, "NaN sample rejected");
  if (std::isinf(v)) parse_fail(path, line, col, "infinite sample rejected");
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

RawPattern load_pattern_csv_3d(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::size_t ln = 0;
  while (ln < lines.size() && blank(lines[ln])) ++ln;
  if (ln == lines.size()) throw ParseError(path + ": empty file");

  const std::vector<std::string> header = split_fields(lines[ln]);
  if (header.size() < 2) {
    parse_fail(path, ln + 1, 1, "header must contain the corner label and the phi axis");
  }
  const std::size_t n_phi = header.size() - 1;
  Eigen::ArrayXd phi(n_phi);
  for (std::size_t c = 1; c < header.size(); ++c) {
    phi[static_cast<Eigen::Index>(c - 1)] =
        deg_to_rad(parse_value(path, ln + 1, c + 1, header[c]));
  }

  std::vector<double> theta;
  std::vector<double> samples;
  for (std::size_t l = ln + 1; l < lines.size(); ++l) {
    if (blank(lines[l])) continue;
    const std::vector<std::string> fields = split_fields(lines[l]);
    if (fields.size() != n_phi + 1) {
      parse_fail(path, l + 1, fields.size(),
                 "expected " + std::to_string(n_phi + 1) + " fields, got " +
                     std::to_string(fields.size()));
    }
    theta.push_back(deg_to_rad(parse_value(path, l + 1, 1, fields[0])));
    for (std::size_t c = 1; c < fields.size(); ++c) {
      samples.push_back(parse_value(path, l + 1, c + 1, fields[c]));
    }
  }
  if (theta.empty()) throw ParseError(path + ": no sample rows");

  RawPattern raw;
  try {
    raw.grid = AngularGrid(Eigen::Map<Eigen::ArrayXd>(theta.data(), theta.size()), phi);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  raw.samples_db = Eigen::Map<Eigen::ArrayXd>(samples.data(), samples.size());
  return raw;
}

RawCut load_pattern_csv_1d(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::size_t ln = 0;
  while (ln < lines.size() && blank(lines[ln])) ++ln;
  if (ln == lines.size()) throw ParseError(path + ": empty file");
  if (split_fields(lines[ln]).size() != 2) {
    parse_fail(path, ln + 1, 1, "expected header 'angle_deg,power_db'");
  }

  std::vector<double> angles;
  std::vector<double> samples;
  for (std::size_t l = ln + 1; l < lines.size(); ++l) {
    if (blank(lines[l])) continue;
    const std::vector<std::string> fields = split_fields(lines[l]);
    if (fields.size() != 2) {
      parse_fail(path, l + 1, fields.size(), "expected 2 fields");
    }
    angles.push_back(deg_to_rad(parse_value(path, l + 1, 1, fields[0])));
    samples.push_back(parse_value(path, l + 1, 2, fields[1]));
  }
  if (angles.empty()) throw ParseError(path + ": no sample rows");

  RawCut raw;
  raw.angles = Eigen::Map<Eigen::ArrayXd>(angles.data(), angles.size());
  raw.samples_db = Eigen::Map<Eigen::ArrayXd>(samples.data(), samples.size());
  try {
    validate_axis(raw.angles);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  return raw;
}

std::string pattern_csv_3d(const AngularGrid& grid,
                           const Eigen::Ref<const Eigen::ArrayXd>& values) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("pattern_csv_3d: values do not match grid");
  }
  std::string out = "theta_deg\\phi_deg";
  for (Eigen::Index j = 0; j < grid.n_phi(); ++j) {
    out += ',';
    out += fmt_double(rad_to_deg(grid.phi(j)));
  }
  out += '\n';
  for (Eigen::Index i = 0; i < grid.n_theta(); ++i) {
    out += fmt_double(rad_to_deg(grid.theta(i)));
    for (Eigen::Index j = 0; j < grid.n_phi(); ++j) {
      out += ',';
      out += fmt_double(values[grid.flat(i, j)]);
    }
    out += '\n';
  }
  return out;
}

std::string cut_csv_1d(const Eigen::Ref<const Eigen::ArrayXd>& angles,
                       const Eigen::Ref<const Eigen::ArrayXd>& values) {
  if (values.size() != angles.size()) {
    throw std::invalid_argument("cut_csv_1d: values do not match axis");
  }
  std::string out = "angle_deg,power_db\n";
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    out += fmt_double(rad_to_deg(angles[i]));
    out += ',';
    out += fmt_double(values[i]);
    out += '\n';
  }
  return out;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file for digest");
  std::uint64_t hash = 14695981039346656037ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<std::uint8_t>(buf[i]);
      hash *= 1099511628211ULL;
    }
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + hex;
}

namespace {

void atomic_write_impl(const std::string& path, const char* data, std::size_t size) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(data, static_cast<std::streamsize>(size));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  atomic_write_impl(path, content.data(), content.size());
}

void atomic_write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  atomic_write_impl(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

Json fit_report_json(const FitReport& report) {
  const SparkModel& model = report.model;
  const bool sphere = model.mode == PatternMode::Sphere3D;

  Json centers = Json::array();
  if (sphere) {
    for (const GridCenter& c : report.centers) {
      centers.push_back(Json{{"theta_index", c.theta_index},
                             {"phi_index", c.phi_index},
                             {"theta_rad", c.theta},
                             {"phi_rad", c.phi},
                             {"prominence", c.prominence},
                             {"fallback", c.from_fallback}});
    }
  } else {
    for (const AxisCenter& c : report.centers_1d) {
      centers.push_back(Json{{"index", c.index},
                             {"angle_rad", c.angle},
                             {"prominence", c.prominence},
                             {"fallback", c.from_fallback}});
    }
  }

  Json trace = Json::array();
  for (const RefineTrace& t : report.refine_trace) {
    trace.push_back(Json{{"base_obj_before", t.base_obj_before},
                         {"base_obj_after", t.base_obj_after},
                         {"kernel_obj_start", t.kernel_obj_start},
                         {"kernel_obj_end", t.kernel_obj_end},
                         {"nls_iterations", t.nls_iterations}});
  }

  Json kernels = Json::array();
  if (sphere) {
    for (const GaussianKernel2D& k : model.kernels2d) {
      kernels.push_back(Json{{"theta_rad", k.theta_c},
                             {"phi_rad", k.phi_c},
                             {"sigma_theta_rad", k.sigma_theta},
                             {"sigma_phi_rad", k.sigma_phi},
                             {"amplitude", k.amplitude}});
    }
  } else {
    for (const GaussianKernel1D& k : model.kernels1d) {
      kernels.push_back(Json{{"center_rad", k.center},
                             {"sigma_rad", k.sigma},
                             {"amplitude", k.amplitude}});
    }
  }

  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < model.base_coeffs.size(); ++i) {
    coeffs.push_back(model.base_coeffs[i]);
  }

  Json j;
  j["mode"] = sphere ? "sphere3d" : "cut1d";
  j["mse"] = report.mse;
  j["mse_history"] = report.mse_history;
  j["refine_rounds"] = report.refine_rounds;
  j["nls_iterations"] = report.nls_iterations;
  j["sequential_kernel_obj_start"] = report.sequential_kernel_obj_start;
  j["sequential_kernel_obj_end"] = report.sequential_kernel_obj_end;
  j["centers"] = centers;
  j["refine_trace"] = trace;
  Json m;
  if (sphere) {
    m["l_max"] = model.l_max;
    m["grid"] = Json{{"n_theta", model.grid.n_theta()}, {"n_phi", model.grid.n_phi()}};
  } else {
    m["n_harmonics"] = model.n_harmonics;
    m["n_angles"] = model.axis.size();
    // The Fourier base period spans the measured axis; recorded so the
    // convention is visible in every report.
    m["fourier_period"] = Json{{"axis_min_rad", model.axis[0]},
                               {"axis_max_rad", model.axis[model.axis.size() - 1]}};
  }
  m["k"] = model.kernel_count();
  m["continuous_params"] = model.continuous_param_count();
  m["coefficients"] = coeffs;
  m["kernels"] = kernels;
  m["calibration"] = Json{{"lin_min", model.calibration.lin_min},
                          {"lin_max", model.calibration.lin_max},
                          {"epsilon", model.calibration.epsilon}};
  j["model"] = m;
  return j;
}

Json sim_report_json(const SimReport& r) {
  Json j;
  j["users"] = r.users;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["coherence_snapshots"] = r.coherence_snapshots;
  j["uplink_slots"] = r.uplink_slots;
  j["nr"] = Json{{"mean_bits", r.nr_bits_mean},
                 {"std_bits", r.nr_bits_std},
                 {"overhead_slots", r.nr_slots},
                 {"data_fraction", r.nr_data_fraction}};
  j["spark"] = Json{{"mean_bits", r.spark_bits_mean},
                    {"std_bits", r.spark_bits_std},
                    {"overhead_slots", r.spark_slots},
                    {"data_fraction", r.spark_data_fraction}};
  j["gain_pct_mean"] = r.gain_pct_mean;
  j["gain_pct_std"] = r.gain_pct_std;
  j["uplift_mbps_mean"] = r.uplift_mbps_mean;
  j["uplift_mbps_std"] = r.uplift_mbps_std;
  j["saturated_trials"] = r.saturated_trials;
  return j;
}

Json eval_rows_json(const std::vector<EvalRow>& rows) {
  Json arr = Json::array();
  for (const EvalRow& row : rows) {
    arr.push_back(Json{{"method", row.method},
                       {"params", row.param_count},
                       {"mse", row.mse},
                       {"improvement", row.improvement_vs_baseline},
                       {"baseline", row.baseline}});
  }
  return arr;
}

std::string eval_rows_csv(const std::vector<EvalRow>& rows) {
  std::string out = "method,params,mse,improvement,baseline\n";
  for (const EvalRow& row : rows) {
    out += row.method;
    out += ',';
    out += std::to_string(row.param_count);
    out += ',';
    out += fmt_double(row.mse);
    out += ',';
    out += fmt_double(row.improvement_vs_baseline);
    out += ',';
    out += row.baseline;
    out += '\n';
  }
  return out;
}

std::string sim_slots_csv(const std::vector<SimReport>& reports) {
  std::string out = "scheme,users,overhead_slots,data_slots\n";
  for (const SimReport& r : reports) {
    out += "nr," + std::to_string(r.users) + ',' + fmt_double(r.nr_slots) + ',' +
           fmt_double(r.uplink_slots - r.nr_slots) + '\n';
    out += "spark," + std::to_string(r.users) + ',' + fmt_double(r.spark_slots) + ',' +
           fmt_double(r.uplink_slots - r.spark_slots) + '\n';
  }
  return out;
}

}  // namespace spark
