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

#include <cstdint>
#include <string>
#include <vector>

#include "qlinsolve/hwmodel.hpp"
#include "qlinsolve/linsys.hpp"
#include "qlinsolve/synth.hpp"

// Grid-driven calibration: for each variable x_k and each grid value of x_k^2,
// draw the remaining variables at random (rejection-sampled so that b = A x is
// encodable), run the circuit protocol, sample the biased readout and fit the
// correction line.
namespace qlinsolve::hw {

struct GridSpec {
  // Grid for variable k (1-based, index k - 1) is x_k^2 = step * n, n = 0..max_n[k-1].
  std::vector<int> max_n;
  double step = 0.1;

  std::size_t size() const;
};

// max_n[k] = largest n with step * n < r_k0^2, the largest x_k^2 reachable
// with ||b|| <= 1.
GridSpec default_grid(const linsys::Matrix& a, double step = 0.1);

struct GridPoint {
  int k = 0;  // 1-based
  double x_sq = 0.0;
  linsys::Vector x;
  linsys::Vector b;
};

// Throws qlinsolve::Error when rejection sampling cannot place a point.
std::vector<GridPoint> make_grid(const linsys::Matrix& a, const GridSpec& grid, Rng& rng,
                                 int max_attempts = 1000000);

struct CalibrationRun {
  std::vector<GridPoint> grid;
  std::vector<double> exact_p;     // protocol readout probability without noise
  std::vector<double> measured;    // pooled x~^2
  CorrectionModel model;
  ErrorReport report;              // corrected with `model`
};

struct CalibrationOptions {
  GridSpec grid;
  NoiseModel noise;
  ShotPlan plan;
  std::uint64_t seed = 0;
  CorrectionMode mode = CorrectionMode::kExactInverse;
  synth::SolverOptions solver;
};

// Grid, exact readouts and noisy samples for `a`, without fitting.
CalibrationRun sample_grid(const linsys::Matrix& a, const CalibrationOptions& opts,
                           std::uint64_t stream = 0);

// sample_grid, then fit the correction line and build the error report.
CalibrationRun run_calibration(const linsys::Matrix& a, const CalibrationOptions& opts);

// Samples a second matrix with the same noise and corrects it with an already
// fitted model.
CalibrationRun run_transfer(const linsys::Matrix& a, const CalibrationOptions& opts,
                            const CorrectionModel& model);

// Whitespace-separated plot data; lines starting with '#' are comments.
std::string plot_raw_errors(const CalibrationRun& run);        // k x_sq eps, plus the fitted line
std::string plot_corrected_errors(const CalibrationRun& run);  // k x_sq eps_corr
std::string plot_relative_errors(const CalibrationRun& run);   // k x_sq eps_rel, x_sq > 0 only

}  // namespace qlinsolve::hw
