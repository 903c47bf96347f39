#pragma once

// Brute-force reimplementation of prominence-based center selection, used as
// an oracle: direct 2D convolution, direct neighbor scans, direct window
// minima, straightforward selection loop. Kept deliberately naive and
// independent of the library code paths.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "spark/angles.hpp"
#include "spark/grid.hpp"
#include "spark/peaks.hpp"

namespace oracle {

struct Pick {
  Eigen::Index i;
  Eigen::Index j;
  bool fallback;
};

inline std::vector<Pick> select_centers_bruteforce(const Eigen::ArrayXd& residual,
                                                   const spark::AngularGrid& grid, int k,
                                                   const spark::PeakSelectionConfig& cfg) {
  const Eigen::Index nt = grid.n_theta();
  const Eigen::Index np = grid.n_phi();
  const auto raw = [&](Eigen::Index i, Eigen::Index j) { return residual[i * np + j]; };

  if (residual.maxCoeff() <= 0.0) {
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < nt; ++i) {
      if (std::abs(grid.theta(i) - spark::kPi / 2) < std::abs(grid.theta(bi) - spark::kPi / 2))
        bi = i;
    }
    for (Eigen::Index j = 0; j < np; ++j) {
      if (std::abs(spark::wrap_phi(grid.phi(j))) < std::abs(spark::wrap_phi(grid.phi(bj))))
        bj = j;
    }
    return std::vector<Pick>(static_cast<std::size_t>(k), Pick{bi, bj, true});
  }

  // direct 2D product-kernel convolution; theta indices clamp, phi wraps
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * cfg.smoothing_sigma)));
  std::vector<double> w(2 * radius + 1);
  double wsum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    w[d + radius] = std::exp(-0.5 * d * d / (cfg.smoothing_sigma * cfg.smoothing_sigma));
    wsum += w[d + radius];
  }
  for (double& v : w) v /= wsum;

  Eigen::ArrayXd smooth(nt * np);
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      double acc = 0.0;
      for (int di = -radius; di <= radius; ++di) {
        Eigen::Index si = std::clamp<Eigen::Index>(i + di, 0, nt - 1);
        for (int dj = -radius; dj <= radius; ++dj) {
          Eigen::Index sj = ((j + dj) % np + np) % np;
          acc += w[di + radius] * w[dj + radius] * raw(si, sj);
        }
      }
      smooth[i * np + j] = acc;
    }
  }

  const double threshold = cfg.threshold_tau * smooth.maxCoeff();

  struct Cand {
    Eigen::Index i, j;
    double prom;
  };
  std::vector<Cand> cands;
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const double v = smooth[i * np + j];
      if (v < threshold) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        const Eigen::Index si = i + di;
        if (si < 0 || si >= nt) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const Eigen::Index sj = ((j + dj) % np + np) % np;
          if (np <= 2 && sj == j) continue;
          if (smooth[si * np + sj] >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      double wmin = raw(i, j);
      for (int di = -cfg.window_radius; di <= cfg.window_radius; ++di) {
        const Eigen::Index si = i + di;
        if (si < 0 || si >= nt) continue;
        for (int dj = -cfg.window_radius; dj <= cfg.window_radius; ++dj) {
          const Eigen::Index sj = ((j + dj) % np + np) % np;
          wmin = std::min(wmin, raw(si, sj));
        }
      }
      cands.push_back(Cand{i, j, raw(i, j) - wmin});
    }
  }

  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& a, const Cand& b) { return a.prom > b.prom; });

  std::vector<Pick> picks;
  for (const Cand& c : cands) {
    if (static_cast<int>(picks.size()) == k) break;
    bool ok = true;
    for (const Pick& p : picks) {
      const double dt = grid.theta(c.i) - grid.theta(p.i);
      const double dp = spark::wrap_phi(grid.phi(c.j) - grid.phi(p.j));
      if (std::sqrt(dt * dt + dp * dp) < cfg.min_separation) {
        ok = false;
        break;
      }
    }
    if (ok) picks.push_back(Pick{c.i, c.j, false});
  }

  if (static_cast<int>(picks.size()) < k) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(nt * np));
    for (Eigen::Index n = 0; n < nt * np; ++n) order[static_cast<std::size_t>(n)] = n;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return residual[a] > residual[b]; });
    for (Eigen::Index flat : order) {
      if (static_cast<int>(picks.size()) == k) break;
      const Eigen::Index i = flat / np;
      const Eigen::Index j = flat % np;
      bool taken = false;
      for (const Pick& p : picks) {
        if (p.i == i && p.j == j) taken = true;
      }
      if (!taken) picks.push_back(Pick{i, j, true});
    }
  }
  return picks;
}

}  // namespace oracle
