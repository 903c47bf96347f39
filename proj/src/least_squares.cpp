#include "spark/least_squares.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace spark {

Eigen::VectorXd svd_least_squares(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("svd_least_squares: dimension mismatch");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // Default threshold drops near-zero singular values, giving the
  // minimum-norm solution under rank deficiency.
  return svd.solve(b);
}

}  // namespace spark
