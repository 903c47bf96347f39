#pragma once

#include <Eigen/Core>
#include <vector>

#include "spark/grid.hpp"

namespace spark {

/// Knobs for prominence-based center selection.
///   smoothing_sigma  width (grid cells) of the Gaussian residual smoother
///   threshold_tau    candidates must reach tau * max of the smoothed residual
///   window_radius    square index window (cells) for the prominence minimum
///   min_separation   non-max-suppression distance (radians)
struct PeakSelectionConfig {
  double smoothing_sigma = 1.5;
  double threshold_tau = 0.1;
  int window_radius = 5;
  double min_separation = 0.15;
};

struct GridCenter {
  Eigen::Index theta_index = 0;
  Eigen::Index phi_index = 0;
  double theta = 0.0;
  double phi = 0.0;
  double prominence = 0.0;
  bool from_fallback = false;  // greedy or degenerate fill, exempt from separation
};

struct AxisCenter {
  Eigen::Index index = 0;
  double angle = 0.0;
  double prominence = 0.0;
  bool from_fallback = false;
};

/// Truncated discrete Gaussian smoothing of a grid-shaped array; phi
/// wraps, theta clamps at the poles. sigma is in grid cells; the kernel is
/// truncated at ceil(3*sigma) and weight-normalized.
Eigen::ArrayXd gaussian_smooth_grid(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                    Eigen::Index n_theta, Eigen::Index n_phi,
                                    double sigma);

/// 1D variant; both ends clamp.
Eigen::ArrayXd gaussian_smooth_1d(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                  double sigma);

/// Selects exactly k kernel centers from a residual grid.
///
/// Degenerate fallback: when max(residual) <= 0, returns k copies of the grid
/// point nearest to (pi/2, 0). Otherwise candidates are the thresholded local
/// maxima of the smoothed residual, ranked by raw-residual prominence
/// (window minimum subtracted), with stable (theta, phi) index tie-breaks;
/// non-max suppression enforces min_separation in (theta, wrapped-phi)
/// distance. Remaining slots are filled greedily from the largest raw
/// residual samples, exempt from the separation rule.
std::vector<GridCenter> select_centers(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                       const AngularGrid& grid, int k,
                                       const PeakSelectionConfig& cfg);

/// 1D analog over the physical axis: no wrap anywhere; the degenerate
/// fallback is the middle axis sample.
std::vector<AxisCenter> select_centers_1d(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                          const Eigen::Ref<const Eigen::ArrayXd>& axis,
                                          int k, const PeakSelectionConfig& cfg);

}  // namespace spark
