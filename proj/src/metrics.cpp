#include "spark/metrics.hpp"

#include <stdexcept>

namespace spark {

double mse(const Eigen::Ref<const Eigen::ArrayXd>& truth,
           const Eigen::Ref<const Eigen::ArrayXd>& estimate) {
  if (truth.size() != estimate.size()) {
    throw std::invalid_argument("mse: length mismatch");
  }
  if (truth.size() == 0) {
    throw std::invalid_argument("mse: empty input");
  }
  return (truth - estimate).square().mean();
}

double improvement(double baseline_mse, double method_mse) {
  if (!(baseline_mse > 0.0) || !(method_mse > 0.0)) {
    throw std::invalid_argument("improvement: both MSEs must be positive");
  }
  return baseline_mse / method_mse;
}

namespace {

template <typename Pattern>
std::vector<EvalRow> build_table(const Pattern& pattern,
                                 const std::vector<MethodSpec>& methods,
                                 const PeakSelectionConfig& peak_cfg,
                                 const NlsConfig& nls_cfg) {
  std::vector<EvalRow> rows;
  rows.reserve(methods.size());
  std::string baseline_label;
  double baseline_mse = 0.0;
  for (const MethodSpec& spec : methods) {
    const FitReport report = fit_baseline(pattern, spec, peak_cfg, nls_cfg);
    EvalRow row;
    row.method = spec.label();
    row.param_count = report.model.continuous_param_count();
    row.mse = report.mse;
    if (rows.empty()) {
      baseline_label = row.method;
      baseline_mse = row.mse;
    }
    row.baseline = baseline_label;
    row.improvement_vs_baseline = improvement(baseline_mse, row.mse);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<EvalRow> comparison_table(const NormalizedPattern& pattern,
                                      const std::vector<MethodSpec>& methods,
                                      const PeakSelectionConfig& peak_cfg,
                                      const NlsConfig& nls_cfg) {
  return build_table(pattern, methods, peak_cfg, nls_cfg);
}

std::vector<EvalRow> comparison_table(const NormalizedCut& cut,
                                      const std::vector<MethodSpec>& methods,
                                      const PeakSelectionConfig& peak_cfg,
                                      const NlsConfig& nls_cfg) {
  return build_table(cut, methods, peak_cfg, nls_cfg);
}

}  // namespace spark
