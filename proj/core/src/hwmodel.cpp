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

#include "qlinsolve/hwmodel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qlinsolve/errors.hpp"

namespace qlinsolve::hw {

double biased_probability(double true_p, const NoiseModel& model) {
  if (!(true_p >= 0.0 && true_p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
  return std::clamp(true_p + model.intercept + model.slope * true_p, 0.0, 1.0);
}

ShotRecord measure_with_noise(double true_p, const NoiseModel& model, const ShotPlan& plan, Rng& rng) {
  if (plan.series < 1 || plan.shots < 1) throw std::invalid_argument("shot plan must be positive");
  const double mean = biased_probability(true_p, model);
  std::normal_distribution<double> jitter(0.0, model.jitter_sd);
  ShotRecord rec;
  rec.series.reserve(static_cast<std::size_t>(plan.series));
  for (int s = 0; s < plan.series; ++s) {
    double p = mean;
    if (model.jitter_sd > 0.0) {
      p = std::clamp(true_p + model.intercept + model.slope * true_p + jitter(rng), 0.0, 1.0);
    }
    std::binomial_distribution<std::int64_t> draw(plan.shots, p);
    rec.series.push_back({plan.shots, draw(rng)});
  }
  return rec;
}

ShotRecord measure_with_noise(double true_p, const NoiseModel& model, const ShotPlan& plan) {
  Rng rng(model.seed);
  return measure_with_noise(true_p, model, plan, rng);
}

CorrectionModel fit_correction(std::span<const CalibrationPoint> points) {
  const std::size_t n = points.size();
  if (n < 3) throw DegenerateFit("correction fit needs at least three points");
  double mean_x = 0.0;
  double mean_e = 0.0;
  for (const auto& p : points) {
    mean_x += p.x_sq;
    mean_e += p.x_sq_measured - p.x_sq;
  }
  mean_x /= static_cast<double>(n);
  mean_e /= static_cast<double>(n);
  double sxx = 0.0;
  double sxe = 0.0;
  for (const auto& p : points) {
    const double dx = p.x_sq - mean_x;
    sxx += dx * dx;
    sxe += dx * ((p.x_sq_measured - p.x_sq) - mean_e);
  }
  if (sxx <= 1e-14 * static_cast<double>(n)) {
    throw DegenerateFit("all calibration points share the same x^2");
  }
  CorrectionModel m;
  m.slope = sxe / sxx;
  m.intercept = mean_e - m.slope * mean_x;
  m.points = n;
  double ss = 0.0;
  for (const auto& p : points) {
    const double r = (p.x_sq_measured - p.x_sq) - m.eps(p.x_sq);
    ss += r * r;
  }
  m.fit_residual_rms = std::sqrt(ss / static_cast<double>(n));
  return m;
}

const char* to_string(CorrectionMode mode) {
  switch (mode) {
    case CorrectionMode::kExactInverse: return "exact-inverse";
    case CorrectionMode::kNaiveProxy: return "naive-proxy";
    case CorrectionMode::kKnownTruth: return "known-truth";
  }
  return "unknown";
}

CorrectedValue apply_correction(double x_tilde_sq, const CorrectionModel& model, CorrectionMode mode) {
  CorrectedValue out;
  switch (mode) {
    case CorrectionMode::kExactInverse:
      if (std::abs(1.0 + model.slope) > 1e-6) {
        out.value = (x_tilde_sq - model.intercept) / (1.0 + model.slope);
        out.mode = CorrectionMode::kExactInverse;
        break;
      }
      [[fallthrough]];
    case CorrectionMode::kNaiveProxy:
      out.value = x_tilde_sq - model.eps(x_tilde_sq);
      out.mode = CorrectionMode::kNaiveProxy;
      break;
    case CorrectionMode::kKnownTruth:
      throw std::invalid_argument("known-truth correction needs the true x^2");
  }
  out.negative = out.value < 0.0;
  return out;
}

CorrectedValue apply_correction_known(double x_tilde_sq, double x_sq, const CorrectionModel& model) {
  CorrectedValue out;
  out.value = x_tilde_sq - model.eps(x_sq);
  out.mode = CorrectionMode::kKnownTruth;
  out.negative = out.value < 0.0;
  return out;
}

double ErrorReport::max_abs_eps() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.eps));
  return m;
}

double ErrorReport::max_abs_eps_corr() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.eps_corr));
  return m;
}

double ErrorReport::max_abs_eps_rel() const {
  double m = 0.0;
  for (const auto& r : rows) {
    if (r.eps_rel) m = std::max(m, std::abs(*r.eps_rel));
  }
  return m;
}

ErrorReport error_report(std::span<const double> true_x_sq, std::span<const double> measured,
                         const CorrectionModel& model, CorrectionMode mode,
                         std::span<const int> labels) {
  if (true_x_sq.size() != measured.size() || (!labels.empty() && labels.size() != measured.size())) {
    throw DimensionMismatch("error_report inputs are not aligned");
  }
  ErrorReport rep;
  rep.mode = mode;
  rep.rows.reserve(measured.size());
  for (std::size_t i = 0; i < measured.size(); ++i) {
    ErrorRow row;
    row.k = labels.empty() ? 0 : labels[i];
    row.x_sq_true = true_x_sq[i];
    row.x_sq_measured = measured[i];
    row.eps = measured[i] - true_x_sq[i];
    const CorrectedValue c = mode == CorrectionMode::kKnownTruth
                                 ? apply_correction_known(measured[i], true_x_sq[i], model)
                                 : apply_correction(measured[i], model, mode);
    row.corrected = c.value;
    row.negative_corrected = c.negative;
    row.eps_corr = c.value - true_x_sq[i];
    if (true_x_sq[i] != 0.0) row.eps_rel = row.eps_corr / true_x_sq[i];
    rep.rows.push_back(row);
  }
  return rep;
}

void write_error_csv(std::ostream& out, const ErrorReport& report) {
  std::ostringstream buf;
  buf << std::setprecision(12);
  buf << "k,x_sq_true,x_sq_measured,eps,eps_corr,eps_rel\n";
  for (const auto& r : report.rows) {
    buf << r.k << ',' << r.x_sq_true << ',' << r.x_sq_measured << ',' << r.eps << ',' << r.eps_corr
        << ',';
    if (r.eps_rel) {
      buf << *r.eps_rel;
    } else {
      buf << "inf";
    }
    buf << '\n';
  }
  out << buf.str();
}

std::string error_csv(const ErrorReport& report) {
  std::ostringstream out;
  write_error_csv(out, report);
  return out.str();
}

}  // namespace qlinsolve::hw
