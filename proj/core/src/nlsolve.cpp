// Copyright 2026 The qlinsolve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qlinsolve/nlsolve.hpp"

#include <cmath>

namespace qlinsolve::nlsolve {

Eigen::MatrixXd jacobian(const Residual& f, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd probe = x;
  Eigen::MatrixXd j;
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    probe(c) = x(c) + step;
    const Eigen::VectorXd up = f(probe);
    probe(c) = x(c) - step;
    const Eigen::VectorXd down = f(probe);
    probe(c) = x(c);
    if (c == 0) j.resize(up.size(), x.size());
    j.col(c) = (up - down) / (2.0 * step);
  }
  return j;
}

DampedNewtonResult damped_newton(const Residual& f, Eigen::VectorXd x0,
                                 const DampedNewtonOptions& opts) {
  DampedNewtonResult out;
  out.x = std::move(x0);
  out.residual = f(out.x);
  double cost = out.residual.squaredNorm();
  double lambda = opts.initial_damping;

  for (; out.iterations < opts.max_iterations; ++out.iterations) {
    out.max_residual = out.residual.cwiseAbs().maxCoeff();
    if (out.max_residual <= opts.tolerance) {
      out.converged = true;
      return out;
    }
    const Eigen::MatrixXd j = jacobian(f, out.x, opts.fd_step);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * out.residual;

    bool accepted = false;
    while (!accepted && lambda < 1e12) {
      Eigen::MatrixXd h = jtj;
      h.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd dx = h.ldlt().solve(-g);
      const Eigen::VectorXd trial_x = out.x + dx;
      const Eigen::VectorXd trial_r = f(trial_x);
      const double trial_cost = trial_r.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        out.x = trial_x;
        out.residual = trial_r;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) break;
  }
  out.max_residual = out.residual.cwiseAbs().maxCoeff();
  out.converged = out.max_residual <= opts.tolerance;
  return out;
}

}  // namespace qlinsolve::nlsolve
