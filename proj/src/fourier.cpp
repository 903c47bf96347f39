#include "spark/fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "spark/grid.hpp"

namespace spark {

PeriodMap PeriodMap::from_axis(const Eigen::Ref<const Eigen::ArrayXd>& axis) {
  validate_axis(axis);
  if (axis.size() < 2) {
    throw std::invalid_argument("PeriodMap: need at least 2 axis samples");
  }
  return PeriodMap{axis[0], axis[axis.size() - 1]};
}

Eigen::MatrixXd fourier_design_matrix(const Eigen::Ref<const Eigen::ArrayXd>& mapped_angles,
                                      const FourierBasisSpec& spec) {
  if (spec.n_harmonics < 0) {
    throw std::invalid_argument("fourier_design_matrix: negative harmonic count");
  }
  const Eigen::Index n = mapped_angles.size();
  const int h = spec.n_harmonics;
  Eigen::MatrixXd design(n, spec.coefficient_count());
  design.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = wrap_phi(mapped_angles[i]);
    for (int m = 1; m <= h; ++m) {
      design(i, m) = std::cos(m * x);
      design(i, h + m) = std::sin(m * x);
    }
  }
  return design;
}

}  // namespace spark
