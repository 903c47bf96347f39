#include "spark/model.hpp"

#include <stdexcept>

namespace spark {

void validate_model(const SparkModel& model) {
  if (model.mode == PatternMode::Sphere3D) {
    if (model.l_max < 0) throw std::invalid_argument("model: l_max not set");
    if (model.grid.empty()) throw std::invalid_argument("model: empty grid");
    if (!model.kernels1d.empty()) {
      throw std::invalid_argument("model: 1D kernels on a spherical model");
    }
  } else {
    if (model.n_harmonics < 0) throw std::invalid_argument("model: harmonics not set");
    if (model.axis.size() < 2) throw std::invalid_argument("model: axis too short");
    if (!model.kernels2d.empty()) {
      throw std::invalid_argument("model: 2D kernels on a 1D model");
    }
  }
  if (model.base_coeffs.size() != model.base_coeff_count()) {
    throw std::invalid_argument("model: coefficient count does not match base order");
  }
  if (!model.base_coeffs.allFinite()) {
    throw std::invalid_argument("model: non-finite coefficient");
  }
}

}  // namespace spark
