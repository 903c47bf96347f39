#include "spark/reconstruct.hpp"

#include <stdexcept>

#include "spark/fourier.hpp"
#include "spark/kernels.hpp"
#include "spark/sh.hpp"

namespace spark {

namespace {

void require_mode(const SparkModel& model, PatternMode mode) {
  if (model.mode != mode) {
    throw std::invalid_argument("model mode does not match the evaluation target");
  }
}

}  // namespace

Eigen::ArrayXd evaluate_base(const SparkModel& model, const AngularGrid& grid) {
  require_mode(model, PatternMode::Sphere3D);
  const Eigen::MatrixXd design = sh_design_matrix(grid, ShBasisSpec{model.l_max});
  return (design * model.base_coeffs).array();
}

Eigen::ArrayXd evaluate_base(const SparkModel& model,
                             const Eigen::Ref<const Eigen::ArrayXd>& angles) {
  require_mode(model, PatternMode::Cut1D);
  const PeriodMap period = PeriodMap::from_axis(model.axis);
  const Eigen::MatrixXd design =
      fourier_design_matrix(period.map(angles), FourierBasisSpec{model.n_harmonics});
  return (design * model.base_coeffs).array();
}

Eigen::ArrayXd evaluate_kernels(const SparkModel& model, const AngularGrid& grid) {
  require_mode(model, PatternMode::Sphere3D);
  return kernel_sum(model.kernels2d, grid);
}

Eigen::ArrayXd evaluate_kernels(const SparkModel& model,
                                const Eigen::Ref<const Eigen::ArrayXd>& angles) {
  require_mode(model, PatternMode::Cut1D);
  return kernel_sum(model.kernels1d, angles);
}

Eigen::ArrayXd reconstruct(const SparkModel& model, const AngularGrid& grid) {
  return (evaluate_base(model, grid) + evaluate_kernels(model, grid))
      .cwiseMax(0.0)
      .cwiseMin(1.0);
}

Eigen::ArrayXd reconstruct(const SparkModel& model,
                           const Eigen::Ref<const Eigen::ArrayXd>& angles) {
  return (evaluate_base(model, angles) + evaluate_kernels(model, angles))
      .cwiseMax(0.0)
      .cwiseMin(1.0);
}

double reconstruct_at(const SparkModel& model, double theta, double phi) {
  require_mode(model, PatternMode::Sphere3D);
  Eigen::RowVectorXd row(model.base_coeff_count());
  sh_basis_row(model.l_max, theta, phi, row);
  double v = row * model.base_coeffs;
  for (const auto& k : model.kernels2d) {
    v += gaussian2d_eval(k, theta, phi);
  }
  return std::min(std::max(v, 0.0), 1.0);
}

}  // namespace spark
