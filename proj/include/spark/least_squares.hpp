#pragma once

#include <Eigen/Core>

namespace spark {

/// Minimum-norm least-squares solution of ||b - A x||_2 via SVD with a
/// small-singular-value cutoff; stable under rank deficiency.
Eigen::VectorXd svd_least_squares(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace spark
