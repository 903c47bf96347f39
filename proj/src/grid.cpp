#include "spark/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spark/angles.hpp"

namespace spark {

namespace {

void check_axis(const Eigen::Ref<const Eigen::ArrayXd>& values, double lo, double hi,
                bool hi_inclusive, const char* name) {
  if (values.size() == 0) {
    throw std::invalid_argument(std::string(name) + " axis is empty");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " axis has non-finite entry");
    }
    if (v < lo || v > hi || (!hi_inclusive && v == hi)) {
      throw std::invalid_argument(std::string(name) + " axis value " +
                                  std::to_string(v) + " out of range");
    }
    if (i > 0 && values[i] <= values[i - 1]) {
      throw std::invalid_argument(std::string(name) + " axis not strictly increasing");
    }
  }
}

}  // namespace

AngularGrid::AngularGrid(Eigen::ArrayXd theta, Eigen::ArrayXd phi)
    : theta_(std::move(theta)), phi_(std::move(phi)) {
  check_axis(theta_, 0.0, kPi, true, "theta");
  check_axis(phi_, 0.0, kTwoPi, false, "phi");
}

void validate_axis(const Eigen::Ref<const Eigen::ArrayXd>& axis) {
  if (axis.size() == 0) throw std::invalid_argument("angle axis is empty");
  for (Eigen::Index i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) {
      throw std::invalid_argument("angle axis has non-finite entry");
    }
    if (i > 0 && axis[i] <= axis[i - 1]) {
      throw std::invalid_argument("angle axis not strictly increasing");
    }
  }
}

}  // namespace spark
