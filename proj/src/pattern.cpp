#include "spark/pattern.hpp"

#include <cmath>
#include <stdexcept>

namespace spark {

namespace {

std::pair<Eigen::ArrayXd, Calibration> normalize_linear(
    const Eigen::Ref<const Eigen::ArrayXd>& linear, double epsilon) {
  if (linear.size() < 2) {
    throw std::invalid_argument("normalize: need at least 2 samples");
  }
  if (epsilon <= 0.0) {
    throw std::invalid_argument("normalize: epsilon must be positive");
  }
  Calibration cal;
  cal.lin_min = linear.minCoeff();
  cal.lin_max = linear.maxCoeff();
  cal.epsilon = epsilon;
  Eigen::ArrayXd values = (linear - cal.lin_min) / cal.range();
  return {std::move(values), cal};
}

}  // namespace

Eigen::ArrayXd db_to_linear(const Eigen::Ref<const Eigen::ArrayXd>& samples_db) {
  if (!samples_db.isFinite().all()) {
    throw std::invalid_argument("db_to_linear: non-finite sample");
  }
  return Eigen::pow(10.0, samples_db / 10.0);
}

NormalizedPattern normalize(const RawPattern& raw, double epsilon) {
  if (raw.samples_db.size() != raw.grid.size()) {
    throw std::invalid_argument("normalize: sample count does not match grid");
  }
  auto [values, cal] = normalize_linear(db_to_linear(raw.samples_db), epsilon);
  return NormalizedPattern{raw.grid, std::move(values), cal};
}

NormalizedCut normalize(const RawCut& raw, double epsilon) {
  validate_axis(raw.angles);
  if (raw.samples_db.size() != raw.angles.size()) {
    throw std::invalid_argument("normalize: sample count does not match axis");
  }
  auto [values, cal] = normalize_linear(db_to_linear(raw.samples_db), epsilon);
  return NormalizedCut{raw.angles, std::move(values), cal};
}

Eigen::ArrayXd denormalize(const Eigen::Ref<const Eigen::ArrayXd>& values,
                           const Calibration& cal) {
  return values * cal.range() + cal.lin_min;
}

}  // namespace spark
