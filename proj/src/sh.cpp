#include "spark/sh.hpp"

#include <cmath>
#include <stdexcept>

#include "spark/angles.hpp"

namespace spark {

namespace {

// Fully normalized associated Legendre functions at x = cos(theta),
// Condon-Shortley phase excluded:
//   nlf(l, m) = sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!) * P_l^m(x),  0 <= m <= l.
// Upward recurrence in l is stable for the low orders used here.
void normalized_legendre(int l_max, double cos_t, double sin_t,
                         Eigen::MatrixXd& nlf) {
  nlf.resize(l_max + 1, l_max + 1);
  nlf(0, 0) = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= l_max; ++m) {
    nlf(m, m) = sin_t * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * nlf(m - 1, m - 1);
  }
  for (int m = 0; m < l_max; ++m) {
    nlf(m + 1, m) = cos_t * std::sqrt(2.0 * m + 3.0) * nlf(m, m);
  }
  for (int m = 0; m <= l_max; ++m) {
    for (int l = m + 2; l <= l_max; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) /
                                 (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) /
                                 ((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m));
      nlf(l, m) = a * (cos_t * nlf(l - 1, m) - nlf(l - 2, m) / b);
    }
  }
}

void fill_row(int l_max, double phi, const Eigen::MatrixXd& nlf,
              Eigen::Ref<Eigen::RowVectorXd> out) {
  const double sqrt2 = std::sqrt(2.0);
  // Canonical azimuth so exact 2*pi shifts evaluate identically.
  const double p = wrap_phi(phi);
  for (int l = 0; l <= l_max; ++l) {
    out[sh_index(l, 0)] = nlf(l, 0);
  }
  for (int m = 1; m <= l_max; ++m) {
    const double c = std::cos(m * p);
    const double s = std::sin(m * p);
    for (int l = m; l <= l_max; ++l) {
      const double base = sqrt2 * nlf(l, m);
      out[sh_index(l, m)] = base * c;
      out[sh_index(l, -m)] = base * s;
    }
  }
}

}  // namespace

double sh_eval(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) {
    throw std::invalid_argument("sh_eval: require 0 <= |m| <= l");
  }
  Eigen::MatrixXd nlf;
  normalized_legendre(l, std::cos(theta), std::sin(theta), nlf);
  const int am = std::abs(m);
  if (m == 0) return nlf(l, 0);
  const double base = std::sqrt(2.0) * nlf(l, am);
  const double p = wrap_phi(phi);
  return m > 0 ? base * std::cos(am * p) : base * std::sin(am * p);
}

void sh_basis_row(int l_max, double theta, double phi,
                  Eigen::Ref<Eigen::RowVectorXd> out) {
  if (l_max < 0) throw std::invalid_argument("sh_basis_row: l_max must be >= 0");
  if (out.size() != (l_max + 1) * (l_max + 1)) {
    throw std::invalid_argument("sh_basis_row: output size mismatch");
  }
  Eigen::MatrixXd nlf;
  normalized_legendre(l_max, std::cos(theta), std::sin(theta), nlf);
  fill_row(l_max, phi, nlf, out);
}

Eigen::MatrixXd sh_design_matrix(const AngularGrid& grid, const ShBasisSpec& spec) {
  if (grid.empty()) throw std::invalid_argument("sh_design_matrix: empty grid");
  const int n_coeff = spec.coefficient_count();
  Eigen::MatrixXd design(grid.size(), n_coeff);
  Eigen::MatrixXd nlf;
  Eigen::RowVectorXd row(n_coeff);
  for (Eigen::Index i = 0; i < grid.n_theta(); ++i) {
    const double theta = grid.theta(i);
    normalized_legendre(spec.l_max, std::cos(theta), std::sin(theta), nlf);
    for (Eigen::Index j = 0; j < grid.n_phi(); ++j) {
      fill_row(spec.l_max, grid.phi(j), nlf, row);
      design.row(grid.flat(i, j)) = row;
    }
  }
  return design;
}

Eigen::MatrixXd sh_design_matrix(const Eigen::Ref<const Eigen::ArrayXd>& theta,
                                 const Eigen::Ref<const Eigen::ArrayXd>& phi,
                                 const ShBasisSpec& spec) {
  if (theta.size() != phi.size()) {
    throw std::invalid_argument("sh_design_matrix: theta/phi size mismatch");
  }
  Eigen::MatrixXd design(theta.size(), spec.coefficient_count());
  Eigen::MatrixXd nlf;
  Eigen::RowVectorXd row(spec.coefficient_count());
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    normalized_legendre(spec.l_max, std::cos(theta[n]), std::sin(theta[n]), nlf);
    fill_row(spec.l_max, phi[n], nlf, row);
    design.row(n) = row;
  }
  return design;
}

}  // namespace spark
