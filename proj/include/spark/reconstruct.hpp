#pragma once

#include <Eigen/Core>

#include "spark/grid.hpp"
#include "spark/model.hpp"

namespace spark {

/// Global base only, unclipped. Mode must match the argument kind.
Eigen::ArrayXd evaluate_base(const SparkModel& model, const AngularGrid& grid);
Eigen::ArrayXd evaluate_base(const SparkModel& model,
                             const Eigen::Ref<const Eigen::ArrayXd>& angles);

/// Kernel sum only.
Eigen::ArrayXd evaluate_kernels(const SparkModel& model, const AngularGrid& grid);
Eigen::ArrayXd evaluate_kernels(const SparkModel& model,
                                const Eigen::Ref<const Eigen::ArrayXd>& angles);

/// base + kernels, clamped element-wise to [0, 1]. Clamping happens only
/// here, never inside the fitting residuals.
Eigen::ArrayXd reconstruct(const SparkModel& model, const AngularGrid& grid);
Eigen::ArrayXd reconstruct(const SparkModel& model,
                           const Eigen::Ref<const Eigen::ArrayXd>& angles);

/// Single-direction evaluation for a Sphere3D model, clamped to [0, 1].
/// Cost is linear in the coefficient count plus the kernel count.
double reconstruct_at(const SparkModel& model, double theta, double phi);

}  // namespace spark
