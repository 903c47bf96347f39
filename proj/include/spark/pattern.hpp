#pragma once

#include <Eigen/Core>

#include "spark/grid.hpp"

namespace spark {

inline constexpr double kDefaultEpsilon = 1e-12;

/// Scalars needed to undo per-pattern min-max normalization. lin_min/lin_max
/// are in linear power; epsilon is the stabilizer used by the forward map.
struct Calibration {
  double lin_min = 0.0;
  double lin_max = 0.0;
  double epsilon = kDefaultEpsilon;
  double range() const { return lin_max - lin_min + epsilon; }
};

/// Log-scale (dB / dBm) samples on a spherical grid, row-major theta-outer.
struct RawPattern {
  AngularGrid grid;
  Eigen::ArrayXd samples_db;
};

/// Log-scale samples over a strictly increasing 1D angle axis (radians).
struct RawCut {
  Eigen::ArrayXd angles;
  Eigen::ArrayXd samples_db;
};

/// Min-max normalized linear-power samples plus calibration scalars.
/// values are in [0, 1]; the maximum is (max-min)/(max-min+eps) < 1.
struct NormalizedPattern {
  AngularGrid grid;
  Eigen::ArrayXd values;
  Calibration calibration;
};

struct NormalizedCut {
  Eigen::ArrayXd angles;
  Eigen::ArrayXd values;
  Calibration calibration;
};

/// Element-wise dB -> linear power, 10^(x/10). Rejects non-finite input.
Eigen::ArrayXd db_to_linear(const Eigen::Ref<const Eigen::ArrayXd>& samples_db);

NormalizedPattern normalize(const RawPattern& raw, double epsilon = kDefaultEpsilon);
NormalizedCut normalize(const RawCut& raw, double epsilon = kDefaultEpsilon);

/// Inverse of the min-max map: v * (lin_max - lin_min + eps) + lin_min.
Eigen::ArrayXd denormalize(const Eigen::Ref<const Eigen::ArrayXd>& values,
                           const Calibration& cal);

}  // namespace spark
