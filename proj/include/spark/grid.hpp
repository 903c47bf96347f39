#pragma once

#include <Eigen/Core>

namespace spark {

/// Rectangular sample lattice on the sphere. theta is the polar angle in
/// [0, pi], phi the azimuth in [0, 2*pi); both axes are strictly increasing.
/// Samples bound to a grid are stored row-major, theta-outer / phi-inner:
/// flat index n = i * n_phi + j.
class AngularGrid {
 public:
  AngularGrid() = default;
  AngularGrid(Eigen::ArrayXd theta, Eigen::ArrayXd phi);

  Eigen::Index n_theta() const { return theta_.size(); }
  Eigen::Index n_phi() const { return phi_.size(); }
  Eigen::Index size() const { return theta_.size() * phi_.size(); }
  bool empty() const { return size() == 0; }

  const Eigen::ArrayXd& theta() const { return theta_; }
  const Eigen::ArrayXd& phi() const { return phi_; }
  double theta(Eigen::Index i) const { return theta_[i]; }
  double phi(Eigen::Index j) const { return phi_[j]; }
  Eigen::Index flat(Eigen::Index i, Eigen::Index j) const { return i * n_phi() + j; }

 private:
  Eigen::ArrayXd theta_;
  Eigen::ArrayXd phi_;
};

/// Validates a 1D cut axis: finite, strictly increasing, at least one sample.
void validate_axis(const Eigen::Ref<const Eigen::ArrayXd>& axis);

}  // namespace spark
