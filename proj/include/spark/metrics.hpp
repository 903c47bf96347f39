#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "spark/fit.hpp"
#include "spark/pattern.hpp"

namespace spark {

/// Mean squared error; both vectors must have the same length.
double mse(const Eigen::Ref<const Eigen::ArrayXd>& truth,
           const Eigen::Ref<const Eigen::ArrayXd>& estimate);

/// baseline_mse / method_mse; values below 1 mean the method regressed.
double improvement(double baseline_mse, double method_mse);

struct EvalRow {
  std::string method;
  int param_count = 0;
  double mse = 0.0;
  double improvement_vs_baseline = 1.0;
  std::string baseline;
};

/// Runs every method on the pattern and tabulates MSE and improvement vs.
/// the first method in the list (the named baseline). Rows keep the input
/// order.
std::vector<EvalRow> comparison_table(const NormalizedPattern& pattern,
                                      const std::vector<MethodSpec>& methods,
                                      const PeakSelectionConfig& peak_cfg,
                                      const NlsConfig& nls_cfg);

std::vector<EvalRow> comparison_table(const NormalizedCut& cut,
                                      const std::vector<MethodSpec>& methods,
                                      const PeakSelectionConfig& peak_cfg,
                                      const NlsConfig& nls_cfg);

}  // namespace spark
