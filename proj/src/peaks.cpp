#include "spark/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spark/angles.hpp"

namespace spark {

namespace {

std::vector<double> smoothing_weights(double sigma, int radius) {
  std::vector<double> w(2 * radius + 1);
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    w[d + radius] = std::exp(-0.5 * d * d / (sigma * sigma));
    sum += w[d + radius];
  }
  for (double& v : w) v /= sum;
  return w;
}

inline Eigen::Index clamp_index(Eigen::Index i, Eigen::Index n) {
  return std::min(std::max(i, Eigen::Index{0}), n - 1);
}

inline Eigen::Index wrap_index(Eigen::Index i, Eigen::Index n) {
  Eigen::Index r = i % n;
  return r < 0 ? r + n : r;
}

void validate_config(const PeakSelectionConfig& cfg) {
  if (!(cfg.threshold_tau > 0.0 && cfg.threshold_tau < 1.0)) {
    throw std::invalid_argument("select_centers: threshold_tau must be in (0, 1)");
  }
  if (cfg.window_radius < 1) {
    throw std::invalid_argument("select_centers: window_radius must be >= 1");
  }
  if (!(cfg.min_separation > 0.0)) {
    throw std::invalid_argument("select_centers: min_separation must be positive");
  }
}

struct Candidate {
  Eigen::Index i;
  Eigen::Index j;
  double prominence;
};

}  // namespace

Eigen::ArrayXd gaussian_smooth_grid(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                    Eigen::Index n_theta, Eigen::Index n_phi,
                                    double sigma) {
  if (values.size() != n_theta * n_phi) {
    throw std::invalid_argument("gaussian_smooth_grid: size mismatch");
  }
  if (sigma <= 0.0) return values;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  const std::vector<double> w = smoothing_weights(sigma, radius);

  // theta pass, edge indices clamped
  Eigen::ArrayXd tmp(values.size());
  for (Eigen::Index i = 0; i < n_theta; ++i) {
    for (Eigen::Index j = 0; j < n_phi; ++j) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        acc += w[d + radius] * values[clamp_index(i + d, n_theta) * n_phi + j];
      }
      tmp[i * n_phi + j] = acc;
    }
  }
  // phi pass, wrapped
  Eigen::ArrayXd out(values.size());
  for (Eigen::Index i = 0; i < n_theta; ++i) {
    for (Eigen::Index j = 0; j < n_phi; ++j) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        acc += w[d + radius] * tmp[i * n_phi + wrap_index(j + d, n_phi)];
      }
      out[i * n_phi + j] = acc;
    }
  }
  return out;
}

Eigen::ArrayXd gaussian_smooth_1d(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                  double sigma) {
  if (sigma <= 0.0) return values;
  const Eigen::Index n = values.size();
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  const std::vector<double> w = smoothing_weights(sigma, radius);
  Eigen::ArrayXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int d = -radius; d <= radius; ++d) {
      acc += w[d + radius] * values[clamp_index(i + d, n)];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<GridCenter> select_centers(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                       const AngularGrid& grid, int k,
                                       const PeakSelectionConfig& cfg) {
  validate_config(cfg);
  if (k < 1) throw std::invalid_argument("select_centers: k must be >= 1");
  const Eigen::Index nt = grid.n_theta();
  const Eigen::Index np = grid.n_phi();
  if (residual.size() != grid.size()) {
    throw std::invalid_argument("select_centers: residual size does not match grid");
  }
  if (k > grid.size()) {
    throw std::invalid_argument("select_centers: k exceeds grid size");
  }

  const auto at = [&](Eigen::Index i, Eigen::Index j) { return residual[i * np + j]; };

  // Degenerate fallback: nothing to explain; park all centers at the grid
  // point closest to (pi/2, 0).
  if (residual.maxCoeff() <= 0.0) {
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 1; i < nt; ++i) {
      if (std::abs(grid.theta(i) - kPi / 2) < std::abs(grid.theta(bi) - kPi / 2)) bi = i;
    }
    for (Eigen::Index j = 1; j < np; ++j) {
      if (std::abs(wrap_phi(grid.phi(j))) < std::abs(wrap_phi(grid.phi(bj)))) bj = j;
    }
    std::vector<GridCenter> centers(
        static_cast<std::size_t>(k),
        GridCenter{bi, bj, grid.theta(bi), grid.phi(bj), 0.0, true});
    return centers;
  }

  const Eigen::ArrayXd smooth = gaussian_smooth_grid(residual, nt, np, cfg.smoothing_sigma);
  const double threshold = cfg.threshold_tau * smooth.maxCoeff();

  // Thresholded local maxima of the smoothed residual (8-neighborhood,
  // phi wrapped, theta rows truncated at the poles), scanned in index order
  // so later stable sorting breaks prominence ties by (theta, phi) index.
  std::vector<Candidate> candidates;
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const double v = smooth[i * np + j];
      if (v < threshold) continue;
      bool is_max = true;
      for (Eigen::Index di = -1; di <= 1 && is_max; ++di) {
        const Eigen::Index ni = i + di;
        if (ni < 0 || ni >= nt) continue;
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const Eigen::Index nj = wrap_index(j + dj, np);
          if (np <= 2 && nj == j) continue;  // tiny axes: neighbor folds onto self
          if (smooth[ni * np + nj] >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;

      // Prominence against the raw residual: height above the window minimum.
      double window_min = at(i, j);
      for (Eigen::Index di = -cfg.window_radius; di <= cfg.window_radius; ++di) {
        const Eigen::Index ni = i + di;
        if (ni < 0 || ni >= nt) continue;
        for (Eigen::Index dj = -cfg.window_radius; dj <= cfg.window_radius; ++dj) {
          window_min = std::min(window_min, at(ni, wrap_index(j + dj, np)));
        }
      }
      candidates.push_back(Candidate{i, j, at(i, j) - window_min});
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.prominence > b.prominence;
                   });

  // Non-max suppression in (theta, wrapped phi) distance.
  std::vector<GridCenter> centers;
  for (const Candidate& c : candidates) {
    if (static_cast<int>(centers.size()) == k) break;
    bool separated = true;
    for (const GridCenter& s : centers) {
      const double dt = grid.theta(c.i) - s.theta;
      const double dp = wrap_phi(grid.phi(c.j) - s.phi);
      if (std::sqrt(dt * dt + dp * dp) < cfg.min_separation) {
        separated = false;
        break;
      }
    }
    if (separated) {
      centers.push_back(GridCenter{c.i, c.j, grid.theta(c.i), grid.phi(c.j),
                                   c.prominence, false});
    }
  }

  // Greedy fill from the largest raw residual samples; exempt from the
  // separation rule but never duplicating an already chosen grid point.
  if (static_cast<int>(centers.size()) < k) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(grid.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return residual[a] > residual[b];
    });
    for (Eigen::Index flat : order) {
      if (static_cast<int>(centers.size()) == k) break;
      const Eigen::Index i = flat / np;
      const Eigen::Index j = flat % np;
      const bool taken = std::any_of(centers.begin(), centers.end(),
                                     [&](const GridCenter& s) {
                                       return s.theta_index == i && s.phi_index == j;
                                     });
      if (taken) continue;
      centers.push_back(GridCenter{i, j, grid.theta(i), grid.phi(j), 0.0, true});
    }
  }
  return centers;
}

std::vector<AxisCenter> select_centers_1d(const Eigen::Ref<const Eigen::ArrayXd>& residual,
                                          const Eigen::Ref<const Eigen::ArrayXd>& axis,
                                          int k, const PeakSelectionConfig& cfg) {
  validate_config(cfg);
  if (k < 1) throw std::invalid_argument("select_centers_1d: k must be >= 1");
  const Eigen::Index n = axis.size();
  if (residual.size() != n) {
    throw std::invalid_argument("select_centers_1d: residual size does not match axis");
  }
  if (k > n) throw std::invalid_argument("select_centers_1d: k exceeds axis size");

  if (residual.maxCoeff() <= 0.0) {
    const Eigen::Index mid = n / 2;
    return std::vector<AxisCenter>(static_cast<std::size_t>(k),
                                   AxisCenter{mid, axis[mid], 0.0, true});
  }

  const Eigen::ArrayXd smooth = gaussian_smooth_1d(residual, cfg.smoothing_sigma);
  const double threshold = cfg.threshold_tau * smooth.maxCoeff();

  struct Candidate1D {
    Eigen::Index i;
    double prominence;
  };
  std::vector<Candidate1D> candidates;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = smooth[i];
    if (v < threshold) continue;
    bool is_max = true;
    if (i > 0 && smooth[i - 1] >= v) is_max = false;
    if (i + 1 < n && smooth[i + 1] >= v) is_max = false;
    if (!is_max) continue;
    double window_min = residual[i];
    for (Eigen::Index d = -cfg.window_radius; d <= cfg.window_radius; ++d) {
      const Eigen::Index idx = i + d;
      if (idx < 0 || idx >= n) continue;
      window_min = std::min(window_min, residual[idx]);
    }
    candidates.push_back(Candidate1D{i, residual[i] - window_min});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate1D& a, const Candidate1D& b) {
                     return a.prominence > b.prominence;
                   });

  std::vector<AxisCenter> centers;
  for (const Candidate1D& c : candidates) {
    if (static_cast<int>(centers.size()) == k) break;
    bool separated = true;
    for (const AxisCenter& s : centers) {
      if (std::abs(axis[c.i] - s.angle) < cfg.min_separation) {
        separated = false;
        break;
      }
    }
    if (separated) centers.push_back(AxisCenter{c.i, axis[c.i], c.prominence, false});
  }

  if (static_cast<int>(centers.size()) < k) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return residual[a] > residual[b];
    });
    for (Eigen::Index i : order) {
      if (static_cast<int>(centers.size()) == k) break;
      const bool taken = std::any_of(centers.begin(), centers.end(),
                                     [&](const AxisCenter& s) { return s.index == i; });
      if (taken) continue;
      centers.push_back(AxisCenter{i, axis[i], 0.0, true});
    }
  }
  return centers;
}

}  // namespace spark
