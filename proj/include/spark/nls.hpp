#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "spark/model.hpp"

namespace spark {

/// Bounded nonlinear least-squares configuration. Bounds are the box the
/// solver projects onto; width_init seeds every kernel width.
struct NlsConfig {
  double amplitude_min = kAmplitudeMin;
  double amplitude_max = kAmplitudeMax;
  double width_min = kWidthMin;
  double width_max = kWidthMax;
  double width_init = 0.12;
  int max_iterations = 200;
  double cost_tolerance = 1e-8;  // relative decrease of the squared cost
  double step_tolerance = 1e-8;
};

struct NlsResult {
  Eigen::VectorXd params;
  double initial_cost = 0.0;  // cost at the (projected) start point
  double final_cost = 0.0;
  int iterations = 0;
};

/// Box-constrained Levenberg-Marquardt with projected steps and monotone
/// acceptance: every accepted iterate is feasible and never increases the
/// cost. Problem must provide
///   void residuals(const VectorXd& x, VectorXd& r) const;   // r = model - target
///   void jacobian(const VectorXd& x, MatrixXd& jac) const;  // d residuals / d x
template <typename Problem>
NlsResult bounded_levenberg_marquardt(const Problem& problem,
                                      const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper,
                                      const NlsConfig& cfg) {
  const auto project = [&](const Eigen::VectorXd& v) {
    return v.cwiseMax(lower).cwiseMin(upper).eval();
  };

  NlsResult result;
  Eigen::VectorXd x = project(x0);
  Eigen::VectorXd r;
  problem.residuals(x, r);
  double cost = r.squaredNorm();
  result.initial_cost = cost;

  Eigen::MatrixXd jac;
  Eigen::VectorXd candidate_r;
  double lambda = -1.0;

  int iter = 0;
  bool converged = cost == 0.0;
  while (!converged && iter < cfg.max_iterations) {
    ++iter;
    problem.jacobian(x, jac);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    if (lambda < 0.0) {
      lambda = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-12);
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
      const Eigen::VectorXd candidate = project(x + step);
      problem.residuals(candidate, candidate_r);
      const double candidate_cost = candidate_r.squaredNorm();
      if (candidate_cost <= cost && std::isfinite(candidate_cost)) {
        const double moved = (candidate - x).norm();
        const double decrease = cost - candidate_cost;
        x = candidate;
        r = candidate_r;
        const double prev = cost;
        cost = candidate_cost;
        lambda = std::max(lambda * 0.25, 1e-14);
        accepted = true;
        if (decrease <= cfg.cost_tolerance * std::max(prev, 1e-300)) converged = true;
        if (moved <= cfg.step_tolerance * (x.norm() + cfg.step_tolerance)) converged = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) converged = true;  // no feasible decrease left
  }

  result.params = std::move(x);
  result.final_cost = cost;
  result.iterations = iter;
  return result;
}

}  // namespace spark
