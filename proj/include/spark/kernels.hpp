#pragma once

#include <Eigen/Core>

#include "spark/grid.hpp"
#include "spark/model.hpp"

namespace spark {

/// amplitude * exp(-0.5 * ((theta-theta_c)^2/sigma_theta^2
///                         + wrap_phi(phi-phi_c)^2/sigma_phi^2)).
double gaussian2d_eval(const GaussianKernel2D& k, double theta, double phi);

/// amplitude * exp(-0.5 * (angle-center)^2/sigma^2); no wrap.
double gaussian1d_eval(const GaussianKernel1D& k, double angle);

/// Sum of all kernels over the grid, row-major theta-outer.
Eigen::ArrayXd kernel_sum(const std::vector<GaussianKernel2D>& kernels,
                          const AngularGrid& grid);

Eigen::ArrayXd kernel_sum(const std::vector<GaussianKernel1D>& kernels,
                          const Eigen::Ref<const Eigen::ArrayXd>& angles);

}  // namespace spark
