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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlinsolve/rng.hpp"
#include "qlinsolve/shots.hpp"

// Synthetic measurement bias, the affine correction line fitted to it, and the
// three error statistics used to judge corrected readouts.
namespace qlinsolve::hw {

// Measured probability = clamp(p + intercept + slope * p + N(0, jitter_sd)),
// a fresh jitter draw per series.
struct NoiseModel {
  double intercept = 0.0;
  double slope = 0.0;
  double jitter_sd = 0.0;
  std::uint64_t seed = 0;

  bool is_zero() const { return intercept == 0.0 && slope == 0.0 && jitter_sd == 0.0; }
};

struct ShotPlan {
  int series = 4;
  std::int64_t shots = 1024;  // per series
};

// Jitter-free biased probability, clamped to [0, 1].
double biased_probability(double true_p, const NoiseModel& model);

ShotRecord measure_with_noise(double true_p, const NoiseModel& model, const ShotPlan& plan, Rng& rng);
// Draws from a generator seeded with model.seed.
ShotRecord measure_with_noise(double true_p, const NoiseModel& model, const ShotPlan& plan);

// eps(x^2) = intercept + slope * x^2, eps = measured - true.
struct CorrectionModel {
  double intercept = 0.0;
  double slope = 0.0;
  double fit_residual_rms = 0.0;
  std::size_t points = 0;

  double eps(double x_sq) const { return intercept + slope * x_sq; }
};

struct CalibrationPoint {
  double x_sq = 0.0;           // true
  double x_sq_measured = 0.0;  // x~^2
};

// Ordinary least squares of eps on x^2. Throws DegenerateFit for fewer than
// three points or when all x^2 coincide.
CorrectionModel fit_correction(std::span<const CalibrationPoint> points);

enum class CorrectionMode {
  // X = (x~^2 - c0) / (1 + c1): exact inverse of the affine bias. Falls back to
  // kNaiveProxy when |1 + c1| <= 1e-6.
  kExactInverse,
  // X = x~^2 - eps(x~^2): the measured value stands in for x^2 inside eps.
  kNaiveProxy,
  // X = x~^2 - eps(x^2) with the true x^2; only meaningful on calibration data.
  kKnownTruth,
};

const char* to_string(CorrectionMode mode);

struct CorrectedValue {
  double value = 0.0;
  bool negative = false;  // reported as-is, never clamped
  CorrectionMode mode = CorrectionMode::kExactInverse;
};

// kKnownTruth is rejected here (std::invalid_argument); use the overload that
// takes the true x^2.
CorrectedValue apply_correction(double x_tilde_sq, const CorrectionModel& model,
                                CorrectionMode mode = CorrectionMode::kExactInverse);
CorrectedValue apply_correction_known(double x_tilde_sq, double x_sq, const CorrectionModel& model);

struct ErrorRow {
  int k = 0;
  double x_sq_true = 0.0;
  double x_sq_measured = 0.0;
  double eps = 0.0;        // x~^2 - x^2
  double corrected = 0.0;  // X
  double eps_corr = 0.0;   // X - x^2
  std::optional<double> eps_rel;  // eps_corr / x^2; empty (infinite) at x^2 = 0
  bool negative_corrected = false;
};

struct ErrorReport {
  CorrectionMode mode = CorrectionMode::kExactInverse;
  std::vector<ErrorRow> rows;

  double max_abs_eps() const;
  double max_abs_eps_corr() const;
  // Over rows whose relative error is defined.
  double max_abs_eps_rel() const;
};

// `labels` (variable index per point) may be empty. Throws DimensionMismatch
// for misaligned inputs.
ErrorReport error_report(std::span<const double> true_x_sq, std::span<const double> measured,
                         const CorrectionModel& model,
                         CorrectionMode mode = CorrectionMode::kExactInverse,
                         std::span<const int> labels = {});

// CSV with header k,x_sq_true,x_sq_measured,eps,eps_corr,eps_rel. Undefined
// relative errors are written as "inf".
void write_error_csv(std::ostream& out, const ErrorReport& report);
std::string error_csv(const ErrorReport& report);

}  // namespace qlinsolve::hw
