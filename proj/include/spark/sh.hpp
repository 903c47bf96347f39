#pragma once

#include <Eigen/Core>

#include "spark/grid.hpp"

namespace spark {

/// Real spherical-harmonic truncation at degree l_max.
struct ShBasisSpec {
  int l_max = 0;
  int coefficient_count() const { return (l_max + 1) * (l_max + 1); }
};

/// Flat coefficient index for (l, m), l-major with m running -l..l.
inline int sh_index(int l, int m) { return l * (l + 1) + m; }

/// Orthonormal real spherical harmonic: zonal for m = 0, sqrt(2)*cos(m*phi)
/// for m > 0 and sqrt(2)*sin(|m|*phi) for m < 0 times the normalized
/// associated Legendre function (Condon-Shortley phase excluded).
/// Throws std::invalid_argument for |m| > l or l < 0.
double sh_eval(int l, int m, double theta, double phi);

/// All basis values at one direction, in sh_index order. out must have
/// (l_max+1)^2 entries.
void sh_basis_row(int l_max, double theta, double phi,
                  Eigen::Ref<Eigen::RowVectorXd> out);

/// N x (l_max+1)^2 design matrix; row n = basis at the n-th grid point in
/// row-major theta-outer order.
Eigen::MatrixXd sh_design_matrix(const AngularGrid& grid, const ShBasisSpec& spec);

/// Design matrix for an explicit direction list (theta[i], phi[i]).
Eigen::MatrixXd sh_design_matrix(const Eigen::Ref<const Eigen::ArrayXd>& theta,
                                 const Eigen::Ref<const Eigen::ArrayXd>& phi,
                                 const ShBasisSpec& spec);

}  // namespace spark
