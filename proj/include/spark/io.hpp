#pragma once

#include <Eigen/Core>
#include <json.hpp>
#include <string>
#include <vector>

#include "spark/fit.hpp"
#include "spark/metrics.hpp"
#include "spark/pattern.hpp"
#include "spark/sysim.hpp"

namespace spark {

using Json = nlohmann::ordered_json;

/// CSV/file ingestion failure; the message carries "line L, column C".
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spherical pattern CSV: header row "theta_deg\phi_deg" then the phi axis in
// degrees; each body row is theta in degrees followed by one dB sample per
// phi column. 1D cut CSV: header "angle_deg,power_db" then one angle,value
// pair per row. Angles convert to radians at this boundary only.

RawPattern load_pattern_csv_3d(const std::string& path);
RawCut load_pattern_csv_1d(const std::string& path);

std::string pattern_csv_3d(const AngularGrid& grid,
                           const Eigen::Ref<const Eigen::ArrayXd>& values);
std::string cut_csv_1d(const Eigen::Ref<const Eigen::ArrayXd>& angles,
                       const Eigen::Ref<const Eigen::ArrayXd>& values);

/// FNV-1a 64-bit digest of a file's bytes, as "fnv1a64:<hex>".
std::string file_digest(const std::string& path);

/// Writes via a temp file + rename so readers never observe partial output.
void atomic_write_file(const std::string& path, const std::string& content);
void atomic_write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> read_binary_file(const std::string& path);

// JSON emitters (documented schema; keys are stable).
Json fit_report_json(const FitReport& report);
Json sim_report_json(const SimReport& report);
Json eval_rows_json(const std::vector<EvalRow>& rows);

/// CSV with columns method,params,mse,improvement,baseline.
std::string eval_rows_csv(const std::vector<EvalRow>& rows);

/// Plot-ready CSV with columns scheme,users,overhead_slots,data_slots.
std::string sim_slots_csv(const std::vector<SimReport>& reports);

}  // namespace spark
