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

#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qlinsolve::nlsolve {

using Residual = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct DampedNewtonOptions {
  int max_iterations = 200;
  double tolerance = 1e-9;  // on max |r_i|
  double fd_step = 1e-6;    // central differences
  double initial_damping = 1e-3;
};

struct DampedNewtonResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  double max_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Central-difference Jacobian of f at x.
Eigen::MatrixXd jacobian(const Residual& f, const Eigen::VectorXd& x, double step);

// Newton iteration on r(x) = 0 for square, over- or under-determined systems,
// damped Levenberg-Marquardt style: (J^T J + lambda I) dx = -J^T r, lambda
// shrinking on accepted steps and growing on rejected ones.
DampedNewtonResult damped_newton(const Residual& f, Eigen::VectorXd x0,
                                 const DampedNewtonOptions& opts = {});

}  // namespace qlinsolve::nlsolve
