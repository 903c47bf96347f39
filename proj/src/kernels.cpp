#include "spark/kernels.hpp"

#include <cmath>

#include "spark/angles.hpp"

namespace spark {

double gaussian2d_eval(const GaussianKernel2D& k, double theta, double phi) {
  const double dt = theta - k.theta_c;
  // Canonicalize before differencing so exact 2*pi shifts of phi evaluate
  // identically, then wrap the difference itself.
  const double dp = wrap_phi(wrap_phi(phi) - k.phi_c);
  const double q = (dt * dt) / (k.sigma_theta * k.sigma_theta) +
                   (dp * dp) / (k.sigma_phi * k.sigma_phi);
  return k.amplitude * std::exp(-0.5 * q);
}

double gaussian1d_eval(const GaussianKernel1D& k, double angle) {
  const double d = angle - k.center;
  return k.amplitude * std::exp(-0.5 * (d * d) / (k.sigma * k.sigma));
}

Eigen::ArrayXd kernel_sum(const std::vector<GaussianKernel2D>& kernels,
                          const AngularGrid& grid) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid.size());
  for (const auto& k : kernels) {
    for (Eigen::Index i = 0; i < grid.n_theta(); ++i) {
      for (Eigen::Index j = 0; j < grid.n_phi(); ++j) {
        out[grid.flat(i, j)] += gaussian2d_eval(k, grid.theta(i), grid.phi(j));
      }
    }
  }
  return out;
}

Eigen::ArrayXd kernel_sum(const std::vector<GaussianKernel1D>& kernels,
                          const Eigen::Ref<const Eigen::ArrayXd>& angles) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(angles.size());
  for (const auto& k : kernels) {
    for (Eigen::Index i = 0; i < angles.size(); ++i) {
      out[i] += gaussian1d_eval(k, angles[i]);
    }
  }
  return out;
}

}  // namespace spark
