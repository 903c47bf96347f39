#pragma once

#include <Eigen/Core>

#include "spark/angles.hpp"

namespace spark {

/// 1D Fourier base with H harmonics: DC + H cosine + H sine columns.
struct FourierBasisSpec {
  int n_harmonics = 0;
  int coefficient_count() const { return 2 * n_harmonics + 1; }
};

/// Affine map from a physical angle axis onto the [0, 2*pi) base period.
/// The period equals the measurement span, so the fundamental harmonic
/// completes one cycle across the axis.
struct PeriodMap {
  double axis_min = 0.0;
  double axis_max = kTwoPi;

  double map(double x) const {
    return kTwoPi * (x - axis_min) / (axis_max - axis_min);
  }
  Eigen::ArrayXd map(const Eigen::Ref<const Eigen::ArrayXd>& x) const {
    return kTwoPi * (x - axis_min) / (axis_max - axis_min);
  }

  static PeriodMap from_axis(const Eigen::Ref<const Eigen::ArrayXd>& axis);
};

/// N x (2H+1) design matrix over already-mapped angles:
/// [1, cos(1x) .. cos(Hx), sin(1x) .. sin(Hx)]. Angles are canonicalized
/// modulo 2*pi so exact period shifts give identical rows.
Eigen::MatrixXd fourier_design_matrix(const Eigen::Ref<const Eigen::ArrayXd>& mapped_angles,
                                      const FourierBasisSpec& spec);

}  // namespace spark
