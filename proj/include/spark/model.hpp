#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "spark/grid.hpp"
#include "spark/pattern.hpp"

namespace spark {

// Box bounds shared by the fitter and the codec. Amplitudes may exceed 1
// because the clipped residual can exceed 1 when the base undershoots.
inline constexpr double kAmplitudeMin = 0.0;
inline constexpr double kAmplitudeMax = 1.2;
inline constexpr double kWidthMin = 0.01;   // radians
inline constexpr double kWidthMax = 0.6;    // radians

/// Anisotropic Gaussian lobe in (theta, phi); the azimuth difference is
/// wrapped to (-pi, pi].
struct GaussianKernel2D {
  double theta_c = 0.0;
  double phi_c = 0.0;
  double sigma_theta = kWidthMin;
  double sigma_phi = kWidthMin;
  double amplitude = 0.0;
};

/// Isotropic Gaussian lobe on a 1D angle axis (no wrap on the physical axis).
struct GaussianKernel1D {
  double center = 0.0;
  double sigma = kWidthMin;
  double amplitude = 0.0;
};

enum class PatternMode { Sphere3D, Cut1D };

/// Quantization range for the base coefficients, as declared in an encoded
/// stream header. Present on decoded models so that re-encoding reproduces
/// the stream bit-for-bit.
struct CoeffRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Fitted pattern model: a low-order global base (real spherical harmonics on
/// the sphere, Fourier series on a 1D cut) plus sparse Gaussian kernels.
///
/// Coefficient order: Sphere3D is (l, m) l-major with m from -l to l;
/// Cut1D is [DC, cos_1..cos_H, sin_1..sin_H]. The grid (or axis) the model
/// was fitted on travels with it: kernel centers are grid points and the 1D
/// Fourier base takes its period from the axis span.
struct SparkModel {
  PatternMode mode = PatternMode::Sphere3D;

  // Sphere3D
  int l_max = -1;
  AngularGrid grid;
  std::vector<GaussianKernel2D> kernels2d;

  // Cut1D
  int n_harmonics = -1;
  Eigen::ArrayXd axis;
  std::vector<GaussianKernel1D> kernels1d;

  Eigen::VectorXd base_coeffs;
  Calibration calibration;
  std::optional<CoeffRange> coeff_range;

  int kernel_count() const {
    return mode == PatternMode::Sphere3D ? static_cast<int>(kernels2d.size())
                                         : static_cast<int>(kernels1d.size());
  }

  int base_coeff_count() const {
    return mode == PatternMode::Sphere3D ? (l_max + 1) * (l_max + 1)
                                         : 2 * n_harmonics + 1;
  }

  /// Continuous parameters only: base coefficients plus per-kernel amplitude
  /// and width(s); centers are held fixed and excluded.
  int continuous_param_count() const {
    return mode == PatternMode::Sphere3D
               ? base_coeff_count() + 3 * kernel_count()
               : base_coeff_count() + 2 * kernel_count();
  }
};

/// Throws std::invalid_argument when the model is internally inconsistent
/// (coefficient count vs. order, empty grid, kernel mode mismatch).
void validate_model(const SparkModel& model);

}  // namespace spark
