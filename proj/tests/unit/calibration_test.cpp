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

#include "qlinsolve/calibration.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qlinsolve/errors.hpp"
#include "support/systems.hpp"

namespace qlinsolve::hw {
namespace {

using qlinsolve::testing::three_eq_a;
using qlinsolve::testing::transfer_a;

constexpr double kC0 = 0.40013;
constexpr double kC1 = -0.70437;

CalibrationOptions options(const NoiseModel& noise, std::uint64_t seed) {
  CalibrationOptions o;
  o.grid = default_grid(three_eq_a());
  o.noise = noise;
  o.seed = seed;
  return o;
}

double mean_abs_corrected(const ErrorReport& r) {
  double s = 0.0;
  for (const auto& row : r.rows) s += std::abs(row.eps_corr);
  return s / static_cast<double>(r.rows.size());
}

int count_lines(const std::string& text, bool comments) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '#') == comments) ++n;
  }
  return n;
}

TEST(Grid, DefaultSizesForThreeEquations) {
  const auto g = default_grid(three_eq_a());
  EXPECT_EQ(g.max_n, (std::vector<int>{8, 9, 6}));
  EXPECT_EQ(g.size(), 26u);
  EXPECT_DOUBLE_EQ(g.step, 0.1);
}

TEST(Grid, PointsAreEncodable) {
  Rng rng(4);
  const auto pts = make_grid(three_eq_a(), default_grid(three_eq_a()), rng);
  ASSERT_EQ(pts.size(), 26u);
  for (const auto& p : pts) {
    EXPECT_NEAR(p.x(p.k - 1) * p.x(p.k - 1), p.x_sq, 1e-12);
    EXPECT_LE((three_eq_a() * p.x - p.b).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE(p.b.norm(), 1.0);
  }
  EXPECT_EQ(pts.front().k, 1);
  EXPECT_EQ(pts.back().k, 3);
  EXPECT_NEAR(pts.back().x_sq, 0.6, 1e-15);
}

TEST(Grid, Errors) {
  Rng rng(1);
  EXPECT_THROW(make_grid(three_eq_a(), GridSpec{{1, 2}, 0.1}, rng), DimensionMismatch);
  // x_1^2 = 0.9 exceeds r_10^2 = 0.83: no encodable b exists.
  EXPECT_THROW(make_grid(three_eq_a(), GridSpec{{9, 0, 0}, 0.1}, rng, 2000), Error);
}

TEST(Calibration, ExactReadoutIsTheSquare) {
  const auto run = sample_grid(three_eq_a(), options({}, 2));
  ASSERT_EQ(run.exact_p.size(), run.grid.size());
  for (std::size_t i = 0; i < run.grid.size(); ++i) EXPECT_NEAR(run.exact_p[i], run.grid[i].x_sq, 1e-9);
}

TEST(Calibration, ZeroNoiseFitsNearZero) {
  const auto run = run_calibration(three_eq_a(), options({}, 3));
  EXPECT_NEAR(run.model.intercept, 0.0, 0.02);
  EXPECT_NEAR(run.model.slope, 0.0, 0.04);
  EXPECT_LT(run.report.max_abs_eps(), 0.05);
}

TEST(Calibration, RecoversInjectedBias) {
  const auto run = run_calibration(three_eq_a(), options({kC0, kC1, 0.02, 0}, 4));
  EXPECT_NEAR(run.model.intercept, kC0, 0.05);
  EXPECT_NEAR(run.model.slope, kC1, 0.05);
  EXPECT_GT(run.report.max_abs_eps(), 0.3);
  EXPECT_LT(mean_abs_corrected(run.report), 0.05);
}

TEST(Calibration, TransferToSecondMatrix) {
  const NoiseModel noise{kC0, kC1, 0.02, 0};
  auto opts = options(noise, 5);
  const auto cal = run_calibration(three_eq_a(), opts);
  opts.grid = default_grid(transfer_a());
  const auto tr = run_transfer(transfer_a(), opts, cal.model);
  EXPECT_EQ(tr.model.intercept, cal.model.intercept);
  EXPECT_GT(tr.report.max_abs_eps(), 0.3);
  // The bias does not depend on the matrix, so the line corrects both alike.
  EXPECT_LT(mean_abs_corrected(tr.report), 0.05);
  EXPECT_NEAR(mean_abs_corrected(tr.report), mean_abs_corrected(cal.report), 0.03);
}

TEST(Calibration, DeterministicForSeed) {
  const auto a = run_calibration(three_eq_a(), options({kC0, kC1, 0.02, 0}, 6));
  const auto b = run_calibration(three_eq_a(), options({kC0, kC1, 0.02, 0}, 6));
  EXPECT_EQ(error_csv(a.report), error_csv(b.report));
  const auto c = run_calibration(three_eq_a(), options({kC0, kC1, 0.02, 0}, 7));
  EXPECT_NE(error_csv(a.report), error_csv(c.report));
}

TEST(Calibration, PlotData) {
  const auto run = run_calibration(three_eq_a(), options({kC0, kC1, 0.02, 0}, 8));
  EXPECT_EQ(count_lines(plot_raw_errors(run), false), 26);
  EXPECT_EQ(count_lines(plot_corrected_errors(run), false), 26);
  EXPECT_EQ(count_lines(plot_relative_errors(run), false), 23);  // x^2 = 0 omitted per variable
  EXPECT_GE(count_lines(plot_raw_errors(run), true), 2);
}

}  // namespace
}  // namespace qlinsolve::hw
