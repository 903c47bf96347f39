#include "spark/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "spark/angles.hpp"
#include "spark/fourier.hpp"
#include "spark/kernels.hpp"
#include "spark/least_squares.hpp"
#include "spark/metrics.hpp"
#include "spark/sh.hpp"

namespace spark {

namespace {

// Residuals r = model - target with centers fixed; parameters are
// [amplitudes..., widths...] ([a | s_theta | s_phi] in 2D, [a | s] in 1D).
// The squared angular offsets per (sample, kernel) are precomputed.
class KernelProblem {
 public:
  KernelProblem(Eigen::ArrayXd target, Eigen::MatrixXd dt2, Eigen::MatrixXd dp2,
                bool anisotropic)
      : target_(std::move(target)), dt2_(std::move(dt2)), dp2_(std::move(dp2)),
        anisotropic_(anisotropic) {}

  int kernel_count() const { return static_cast<int>(dt2_.cols()); }
  int param_count() const { return kernel_count() * (anisotropic_ ? 3 : 2); }

  void basis(const Eigen::VectorXd& x, Eigen::MatrixXd& e) const {
    const int k = kernel_count();
    e.resize(dt2_.rows(), k);
    for (int c = 0; c < k; ++c) {
      const double st = x[k + c];
      if (anisotropic_) {
        const double sp = x[2 * k + c];
        e.col(c) = (-0.5 * (dt2_.col(c) / (st * st) + dp2_.col(c) / (sp * sp)))
                       .array()
                       .exp();
      } else {
        e.col(c) = (-0.5 * dt2_.col(c) / (st * st)).array().exp();
      }
    }
  }

  void residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    Eigen::MatrixXd e;
    basis(x, e);
    const int k = kernel_count();
    r = e * x.head(k) - target_.matrix();
  }

  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    Eigen::MatrixXd e;
    basis(x, e);
    const int k = kernel_count();
    jac.resize(dt2_.rows(), param_count());
    for (int c = 0; c < k; ++c) {
      const double a = x[c];
      const double st = x[k + c];
      jac.col(c) = e.col(c);
      jac.col(k + c) = (a / (st * st * st)) * e.col(c).cwiseProduct(dt2_.col(c));
      if (anisotropic_) {
        const double sp = x[2 * k + c];
        jac.col(2 * k + c) =
            (a / (sp * sp * sp)) * e.col(c).cwiseProduct(dp2_.col(c));
      }
    }
  }

 private:
  Eigen::ArrayXd target_;
  Eigen::MatrixXd dt2_;  // (theta - theta_c)^2, or (x - center)^2 in 1D
  Eigen::MatrixXd dp2_;  // wrapped (phi - phi_c)^2; unused in 1D
  bool anisotropic_;
};

void check_residual_finite(const Eigen::Ref<const Eigen::ArrayXd>& residual) {
  if (!residual.isFinite().all()) {
    throw std::invalid_argument("fit_kernels_nls: non-finite residual");
  }
}

NlsResult solve_kernel_problem(const KernelProblem& problem, const Eigen::VectorXd& x0,
                              const NlsConfig& cfg) {
  const int k = problem.kernel_count();
  Eigen::VectorXd lower(problem.param_count());
  Eigen::VectorXd upper(problem.param_count());
  lower.head(k).setConstant(cfg.amplitude_min);
  upper.head(k).setConstant(cfg.amplitude_max);
  lower.tail(problem.param_count() - k).setConstant(cfg.width_min);
  upper.tail(problem.param_count() - k).setConstant(cfg.width_max);
  return bounded_levenberg_marquardt(problem, x0, lower, upper, cfg);
}

double clipped_mse(const Eigen::Ref<const Eigen::ArrayXd>& values,
                   const Eigen::ArrayXd& unclipped) {
  return mse(values, unclipped.cwiseMax(0.0).cwiseMin(1.0));
}

}  // namespace

Eigen::ArrayXd clipped_residual(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                const Eigen::Ref<const Eigen::ArrayXd>& base) {
  if (values.size() != base.size()) {
    throw std::invalid_argument("clipped_residual: size mismatch");
  }
  return (values - base).cwiseMax(0.0);
}

Eigen::VectorXd fit_base_ls(const Eigen::Ref<const Eigen::ArrayXd>& values,
                            const Eigen::Ref<const Eigen::MatrixXd>& design) {
  if (values.size() != design.rows()) {
    throw std::invalid_argument("fit_base_ls: design rows != sample count");
  }
  return svd_least_squares(design, values.matrix());
}

KernelNlsResult2D fit_kernels_nls(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                  const AngularGrid& grid,
                                  const std::vector<GridCenter>& centers,
                                  const NlsConfig& cfg,
                                  const std::vector<GaussianKernel2D>* warm_start) {
  check_residual_finite(residual);
  if (residual.size() != grid.size()) {
    throw std::invalid_argument("fit_kernels_nls: residual size does not match grid");
  }
  const int k = static_cast<int>(centers.size());
  KernelNlsResult2D result;
  if (k == 0) return result;

  Eigen::MatrixXd dt2(grid.size(), k);
  Eigen::MatrixXd dp2(grid.size(), k);
  for (int c = 0; c < k; ++c) {
    for (Eigen::Index i = 0; i < grid.n_theta(); ++i) {
      const double dt = grid.theta(i) - centers[c].theta;
      for (Eigen::Index j = 0; j < grid.n_phi(); ++j) {
        const double dp = wrap_phi(grid.phi(j) - centers[c].phi);
        dt2(grid.flat(i, j), c) = dt * dt;
        dp2(grid.flat(i, j), c) = dp * dp;
      }
    }
  }
  KernelProblem problem(residual, std::move(dt2), std::move(dp2), true);

  Eigen::VectorXd x0(3 * k);
  if (warm_start != nullptr) {
    if (static_cast<int>(warm_start->size()) != k) {
      throw std::invalid_argument("fit_kernels_nls: warm start size mismatch");
    }
    for (int c = 0; c < k; ++c) {
      x0[c] = (*warm_start)[c].amplitude;
      x0[k + c] = (*warm_start)[c].sigma_theta;
      x0[2 * k + c] = (*warm_start)[c].sigma_phi;
    }
  } else {
    for (int c = 0; c < k; ++c) {
      const double r = residual[grid.flat(centers[c].theta_index, centers[c].phi_index)];
      x0[c] = std::min(std::max(r, cfg.amplitude_min), cfg.amplitude_max);
      x0[k + c] = cfg.width_init;
      x0[2 * k + c] = cfg.width_init;
    }
  }

  const NlsResult nls = solve_kernel_problem(problem, x0, cfg);
  result.initial_cost = nls.initial_cost;
  result.final_cost = nls.final_cost;
  result.iterations = nls.iterations;
  result.kernels.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    result.kernels[c] = GaussianKernel2D{centers[c].theta, centers[c].phi,
                                         nls.params[k + c], nls.params[2 * k + c],
                                         nls.params[c]};
  }
  return result;
}

KernelNlsResult1D fit_kernels_nls_1d(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                     const Eigen::Ref<const Eigen::ArrayXd>& axis,
                                     const std::vector<AxisCenter>& centers,
                                     const NlsConfig& cfg,
                                     const std::vector<GaussianKernel1D>* warm_start) {
  check_residual_finite(residual);
  if (residual.size() != axis.size()) {
    throw std::invalid_argument("fit_kernels_nls_1d: residual size does not match axis");
  }
  const int k = static_cast<int>(centers.size());
  KernelNlsResult1D result;
  if (k == 0) return result;

  Eigen::MatrixXd dt2(axis.size(), k);
  for (int c = 0; c < k; ++c) {
    dt2.col(c) = (axis - centers[c].angle).square().matrix();
  }
  KernelProblem problem(residual, std::move(dt2), Eigen::MatrixXd(), false);

  Eigen::VectorXd x0(2 * k);
  if (warm_start != nullptr) {
    if (static_cast<int>(warm_start->size()) != k) {
      throw std::invalid_argument("fit_kernels_nls_1d: warm start size mismatch");
    }
    for (int c = 0; c < k; ++c) {
      x0[c] = (*warm_start)[c].amplitude;
      x0[k + c] = (*warm_start)[c].sigma;
    }
  } else {
    for (int c = 0; c < k; ++c) {
      const double r = residual[centers[c].index];
      x0[c] = std::min(std::max(r, cfg.amplitude_min), cfg.amplitude_max);
      x0[k + c] = cfg.width_init;
    }
  }

  const NlsResult nls = solve_kernel_problem(problem, x0, cfg);
  result.initial_cost = nls.initial_cost;
  result.final_cost = nls.final_cost;
  result.iterations = nls.iterations;
  result.kernels.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    result.kernels[c] = GaussianKernel1D{centers[c].angle, nls.params[k + c],
                                         nls.params[c]};
  }
  return result;
}

FitReport fit_spark(const NormalizedPattern& pattern, int l_max, int k,
                    const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg,
                    int refine_iters) {
  if (l_max < 0) throw std::invalid_argument("fit_spark: l_max must be >= 0");
  if (k < 0) throw std::invalid_argument("fit_spark: k must be >= 0");
  if (refine_iters < 0) throw std::invalid_argument("fit_spark: refine_iters must be >= 0");
  if (pattern.values.size() != pattern.grid.size()) {
    throw std::invalid_argument("fit_spark: values do not match grid");
  }

  FitReport report;
  const Eigen::ArrayXd& g = pattern.values;
  const Eigen::MatrixXd design = sh_design_matrix(pattern.grid, ShBasisSpec{l_max});

  // Stage 1: global base by linear least squares.
  Eigen::VectorXd coeffs = fit_base_ls(g, design);
  Eigen::ArrayXd base = (design * coeffs).array();
  report.mse_history.push_back(clipped_mse(g, base));

  // Stage 2: clipped residual and prominence-based centers.
  Eigen::ArrayXd residual = clipped_residual(g, base);
  std::vector<GaussianKernel2D> kernels;
  if (k > 0) {
    report.centers = select_centers(residual, pattern.grid, k, peak_cfg);
    // Stage 3: bounded kernel fit with centers fixed.
    KernelNlsResult2D seq = fit_kernels_nls(residual, pattern.grid, report.centers, nls_cfg);
    kernels = std::move(seq.kernels);
    report.sequential_kernel_obj_start = seq.initial_cost;
    report.sequential_kernel_obj_end = seq.final_cost;
    report.nls_iterations += seq.iterations;
  }
  Eigen::ArrayXd local = kernel_sum(kernels, pattern.grid);
  report.mse_history.push_back(clipped_mse(g, base + local));

  // Stage 4: alternating refinement; centers stay fixed, kernel updates are
  // warm-started from the previous round.
  for (int round = 0; round < refine_iters; ++round) {
    RefineTrace trace;
    trace.base_obj_before = (g - base - local).matrix().squaredNorm();
    coeffs = fit_base_ls(g - local, design);
    base = (design * coeffs).array();
    trace.base_obj_after = (g - base - local).matrix().squaredNorm();

    residual = clipped_residual(g, base);
    if (k > 0) {
      KernelNlsResult2D step =
          fit_kernels_nls(residual, pattern.grid, report.centers, nls_cfg, &kernels);
      kernels = std::move(step.kernels);
      trace.kernel_obj_start = step.initial_cost;
      trace.kernel_obj_end = step.final_cost;
      trace.nls_iterations = step.iterations;
      report.nls_iterations += step.iterations;
      local = kernel_sum(kernels, pattern.grid);
    }
    report.mse_history.push_back(clipped_mse(g, base + local));
    report.refine_trace.push_back(trace);
  }

  report.refine_rounds = refine_iters;
  report.mse = report.mse_history.back();
  report.model.mode = PatternMode::Sphere3D;
  report.model.l_max = l_max;
  report.model.grid = pattern.grid;
  report.model.kernels2d = std::move(kernels);
  report.model.base_coeffs = std::move(coeffs);
  report.model.calibration = pattern.calibration;
  return report;
}

FitReport fit_spark_1d(const NormalizedCut& cut, int n_harmonics, int k,
                       const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg,
                       int refine_iters) {
  if (n_harmonics < 0) throw std::invalid_argument("fit_spark_1d: harmonics must be >= 0");
  if (k < 0) throw std::invalid_argument("fit_spark_1d: k must be >= 0");
  if (refine_iters < 0) throw std::invalid_argument("fit_spark_1d: refine_iters must be >= 0");
  if (cut.values.size() != cut.angles.size()) {
    throw std::invalid_argument("fit_spark_1d: values do not match axis");
  }

  FitReport report;
  const Eigen::ArrayXd& g = cut.values;
  const PeriodMap period = PeriodMap::from_axis(cut.angles);
  const Eigen::MatrixXd design =
      fourier_design_matrix(period.map(cut.angles), FourierBasisSpec{n_harmonics});

  Eigen::VectorXd coeffs = fit_base_ls(g, design);
  Eigen::ArrayXd base = (design * coeffs).array();
  report.mse_history.push_back(clipped_mse(g, base));

  Eigen::ArrayXd residual = clipped_residual(g, base);
  std::vector<GaussianKernel1D> kernels;
  if (k > 0) {
    report.centers_1d = select_centers_1d(residual, cut.angles, k, peak_cfg);
    KernelNlsResult1D seq = fit_kernels_nls_1d(residual, cut.angles, report.centers_1d, nls_cfg);
    kernels = std::move(seq.kernels);
    report.sequential_kernel_obj_start = seq.initial_cost;
    report.sequential_kernel_obj_end = seq.final_cost;
    report.nls_iterations += seq.iterations;
  }
  Eigen::ArrayXd local = kernel_sum(kernels, cut.angles);
  report.mse_history.push_back(clipped_mse(g, base + local));

  for (int round = 0; round < refine_iters; ++round) {
    RefineTrace trace;
    trace.base_obj_before = (g - base - local).matrix().squaredNorm();
    coeffs = fit_base_ls(g - local, design);
    base = (design * coeffs).array();
    trace.base_obj_after = (g - base - local).matrix().squaredNorm();

    residual = clipped_residual(g, base);
    if (k > 0) {
      KernelNlsResult1D step =
          fit_kernels_nls_1d(residual, cut.angles, report.centers_1d, nls_cfg, &kernels);
      kernels = std::move(step.kernels);
      trace.kernel_obj_start = step.initial_cost;
      trace.kernel_obj_end = step.final_cost;
      trace.nls_iterations = step.iterations;
      report.nls_iterations += step.iterations;
      local = kernel_sum(kernels, cut.angles);
    }
    report.mse_history.push_back(clipped_mse(g, base + local));
    report.refine_trace.push_back(trace);
  }

  report.refine_rounds = refine_iters;
  report.mse = report.mse_history.back();
  report.model.mode = PatternMode::Cut1D;
  report.model.n_harmonics = n_harmonics;
  report.model.axis = cut.angles;
  report.model.kernels1d = std::move(kernels);
  report.model.base_coeffs = std::move(coeffs);
  report.model.calibration = cut.calibration;
  return report;
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::ShOnly:
      return "sh-only-l" + std::to_string(order);
    case Kind::FourierOnly:
      return "fourier-h" + std::to_string(order);
    case Kind::SequentialHybrid:
      return "sequential-" + std::to_string(order) + "-k" + std::to_string(k);
    case Kind::Spark:
      return "spark-" + std::to_string(order) + "-k" + std::to_string(k);
  }
  return "unknown";
}

FitReport fit_baseline(const NormalizedPattern& pattern, const MethodSpec& spec,
                       const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg) {
  switch (spec.kind) {
    case MethodSpec::Kind::ShOnly:
      return fit_spark(pattern, spec.order, 0, peak_cfg, nls_cfg, 0);
    case MethodSpec::Kind::SequentialHybrid:
      return fit_spark(pattern, spec.order, spec.k, peak_cfg, nls_cfg, 0);
    case MethodSpec::Kind::Spark:
      return fit_spark(pattern, spec.order, spec.k, peak_cfg, nls_cfg, spec.refine);
    case MethodSpec::Kind::FourierOnly:
      break;
  }
  throw std::invalid_argument("fit_baseline: method not valid for a spherical pattern");
}

FitReport fit_baseline(const NormalizedCut& cut, const MethodSpec& spec,
                       const PeakSelectionConfig& peak_cfg, const NlsConfig& nls_cfg) {
  switch (spec.kind) {
    case MethodSpec::Kind::FourierOnly:
      return fit_spark_1d(cut, spec.order, 0, peak_cfg, nls_cfg, 0);
    case MethodSpec::Kind::SequentialHybrid:
      return fit_spark_1d(cut, spec.order, spec.k, peak_cfg, nls_cfg, 0);
    case MethodSpec::Kind::Spark:
      return fit_spark_1d(cut, spec.order, spec.k, peak_cfg, nls_cfg, spec.refine);
    case MethodSpec::Kind::ShOnly:
      break;
  }
  throw std::invalid_argument("fit_baseline: method not valid for a 1D cut");
}

}  // namespace spark
