#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "spark/model.hpp"
#include "spark/nls.hpp"
#include "spark/pattern.hpp"
#include "spark/peaks.hpp"

namespace spark {

/// Nonnegative residual max(values - base, 0). May exceed 1 where the base
/// undershoots below zero.
Eigen::ArrayXd clipped_residual(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                const Eigen::Ref<const Eigen::ArrayXd>& base);

struct KernelNlsResult2D {
  std::vector<GaussianKernel2D> kernels;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
};

struct KernelNlsResult1D {
  std::vector<GaussianKernel1D> kernels;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
};

/// Fits amplitudes and widths of Gaussians with fixed centers to a residual
/// grid by bounded Levenberg-Marquardt. Without a warm start, amplitudes
/// initialize from the raw residual at each center (clamped into bounds) and
/// widths from cfg.width_init.
KernelNlsResult2D fit_kernels_nls(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                  const AngularGrid& grid,
                                  const std::vector<GridCenter>& centers,
                                  const NlsConfig& cfg,
                                  const std::vector<GaussianKernel2D>* warm_start = nullptr);

KernelNlsResult1D fit_kernels_nls_1d(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                     const Eigen::Ref<const Eigen::ArrayXd>& axis,
                                     const std::vector<AxisCenter>& centers,
                                     const NlsConfig& cfg,
                                     const std::vector<GaussianKernel1D>* warm_start = nullptr);

/// Objectives bracketing the two block updates of one refinement round.
/// base_obj_* is ||g - Y c - g_local||^2 before/after the coefficient
/// update; kernel_obj_* is the kernel least-squares cost at the warm start
/// and at the accepted solution.
struct RefineTrace {
  double base_obj_before = 0.0;
  double base_obj_after = 0.0;
  double kernel_obj_start = 0.0;
  double kernel_obj_end = 0.0;
  int nls_iterations = 0;
};

struct FitReport {
  double mse = 0.0;                  // final clipped-reconstruction MSE
  std::vector<double> mse_history;   // base, sequential, then one per round
  int refine_rounds = 0;
  int nls_iterations = 0;            // total across sequential + refinement
  std::vector<GridCenter> centers;       // Sphere3D
  std::vector<AxisCenter> centers_1d;    // Cut1D
  double sequential_kernel_obj_start = 0.0;
  double sequential_kernel_obj_end = 0.0;
  std::vector<RefineTrace> refine_trace;
  SparkModel model;
};

/// Base coefficients by linear least squares (thin wrapper kept as the
/// pipeline's Stage-1 entry point).
Eigen::VectorXd fit_base_ls(const Eigen::Ref<const Eigen::ArrayXd>& values,
                            const Eigen::Ref<const Eigen::MatrixXd>& design);

/// Full pipeline on a spherical pattern: base least squares, clipped
/// residual, prominence center selection, bounded kernel fit, then
/// refine_iters alternating rounds (coefficients re-solved against
/// values - kernels; kernels re-fit on the fresh clipped residual with warm
/// start). Centers stay fixed throughout.
FitReport fit_spark(const NormalizedPattern& pattern, int l_max, int k,
                    const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg,
                    int refine_iters);

/// Same pipeline over a 1D cut with a Fourier base and 1D kernels.
FitReport fit_spark_1d(const NormalizedCut& cut, int n_harmonics, int k,
                       const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg,
                       int refine_iters);

struct MethodSpec {
  enum class Kind { ShOnly, FourierOnly, SequentialHybrid, Spark };
  Kind kind = Kind::Spark;
  int order = 5;   // l_max (3D) or harmonic count (1D)
  int k = 0;       // kernels; ignored for the base-only kinds
  int refine = 4;  // used by Kind::Spark only

  std::string label() const;
};

/// Baselines and ablations: ShOnly/FourierOnly run Stage 1 only;
/// SequentialHybrid runs Stages 1-3 with no refinement; Spark is the full
/// pipeline.
FitReport fit_baseline(const NormalizedPattern& pattern, const MethodSpec& spec,
                       const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg);
FitReport fit_baseline(const NormalizedCut& cut, const MethodSpec& spec,
                       const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg);

}  // namespace spark
