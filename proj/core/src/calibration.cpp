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

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "qlinsolve/errors.hpp"

namespace qlinsolve::hw {

namespace {

enum : std::uint64_t { kGridStream = 100, kNoiseStream = 200, kTransferOffset = 1000 };

std::vector<int> labels_of(const std::vector<GridPoint>& grid) {
  std::vector<int> out;
  out.reserve(grid.size());
  for (const auto& g : grid) out.push_back(g.k);
  return out;
}

std::vector<double> x_sq_of(const std::vector<GridPoint>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& g : grid) out.push_back(g.x_sq);
  return out;
}

std::ostringstream plot_stream() {
  std::ostringstream out;
  out << std::setprecision(10);
  return out;
}

}  // namespace

std::size_t GridSpec::size() const {
  std::size_t n = 0;
  for (int m : max_n) n += static_cast<std::size_t>(m + 1);
  return n;
}

GridSpec default_grid(const linsys::Matrix& a, double step) {
  const linsys::Vector r = linsys::inverse_row_norms(a);
  GridSpec g;
  g.step = step;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    const double reach = r(k) * r(k);
    g.max_n.push_back(std::max(0, static_cast<int>(std::ceil(reach / step - 1e-9)) - 1));
  }
  return g;
}

std::vector<GridPoint> make_grid(const linsys::Matrix& a, const GridSpec& grid, Rng& rng,
                                 int max_attempts) {
  const Eigen::Index m = a.rows();
  if (static_cast<Eigen::Index>(grid.max_n.size()) != m) {
    throw DimensionMismatch("grid needs one entry per variable");
  }
  const linsys::Vector reach = linsys::inverse_row_norms(a);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution flip(0.5);
  std::vector<GridPoint> out;
  out.reserve(grid.size());
  for (Eigen::Index k = 0; k < m; ++k) {
    for (int n = 0; n <= grid.max_n[static_cast<std::size_t>(k)]; ++n) {
      const double x_sq = grid.step * n;
      GridPoint p;
      p.k = static_cast<int>(k + 1);
      p.x_sq = x_sq;
      bool placed = false;
      for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
        linsys::Vector x(m);
        for (Eigen::Index j = 0; j < m; ++j) x(j) = reach(j) * unit(rng);
        x(k) = (flip(rng) ? 1.0 : -1.0) * std::sqrt(x_sq);
        const linsys::Vector b = a * x;
        if (b.norm() <= 1.0) {
          p.x = x;
          p.b = b;
          placed = true;
        }
      }
      if (!placed) {
        std::ostringstream msg;
        msg << "no encodable b found for x_" << k + 1 << "^2 = " << x_sq;
        throw Error(msg.str());
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

CalibrationRun sample_grid(const linsys::Matrix& a, const CalibrationOptions& opts,
                           std::uint64_t stream) {
  CalibrationRun run;
  Rng grid_rng = make_rng(opts.seed, kGridStream + stream);
  run.grid = make_grid(a, opts.grid, grid_rng);

  const Eigen::Index m = a.rows();
  std::vector<synth::ExtractionSolution> extraction;
  for (Eigen::Index k = 1; k <= m; ++k) extraction.push_back(synth::solve_extraction(a, k, opts.solver));

  Rng noise_rng = make_rng(opts.seed, kNoiseStream + stream);
  for (const auto& p : run.grid) {
    const auto enc = synth::solve_encoding(p.b, opts.solver);
    const auto protocol =
        synth::assemble_protocol(enc, extraction[static_cast<std::size_t>(p.k - 1)], m);
    const double exact = synth::simulate(protocol).probability_one(protocol.measured_qubit);
    run.exact_p.push_back(exact);
    run.measured.push_back(measure_with_noise(exact, opts.noise, opts.plan, noise_rng).p_hat());
  }
  return run;
}

CalibrationRun run_calibration(const linsys::Matrix& a, const CalibrationOptions& opts) {
  CalibrationRun run = sample_grid(a, opts);
  std::vector<CalibrationPoint> pts;
  for (std::size_t i = 0; i < run.grid.size(); ++i) pts.push_back({run.grid[i].x_sq, run.measured[i]});
  run.model = fit_correction(pts);
  const auto labels = labels_of(run.grid);
  run.report = error_report(x_sq_of(run.grid), run.measured, run.model, opts.mode, labels);
  return run;
}

CalibrationRun run_transfer(const linsys::Matrix& a, const CalibrationOptions& opts,
                            const CorrectionModel& model) {
  CalibrationRun run = sample_grid(a, opts, kTransferOffset);
  run.model = model;
  const auto labels = labels_of(run.grid);
  run.report = error_report(x_sq_of(run.grid), run.measured, run.model, opts.mode, labels);
  return run;
}

std::string plot_raw_errors(const CalibrationRun& run) {
  auto out = plot_stream();
  out << "# raw errors eps = x~^2 - x^2\n";
  out << "# fit: eps = " << run.model.intercept << " + " << run.model.slope << " * x^2\n";
  out << "# k x_sq eps\n";
  for (const auto& r : run.report.rows) out << r.k << ' ' << r.x_sq_true << ' ' << r.eps << '\n';
  return out.str();
}

std::string plot_corrected_errors(const CalibrationRun& run) {
  auto out = plot_stream();
  out << "# corrected errors eps~ = X - x^2 (" << to_string(run.report.mode) << ")\n";
  out << "# k x_sq eps_corr\n";
  for (const auto& r : run.report.rows) out << r.k << ' ' << r.x_sq_true << ' ' << r.eps_corr << '\n';
  return out.str();
}

std::string plot_relative_errors(const CalibrationRun& run) {
  auto out = plot_stream();
  out << "# relative errors eps~ / x^2; x^2 = 0 points omitted (infinite)\n";
  out << "# k x_sq eps_rel\n";
  for (const auto& r : run.report.rows) {
    if (r.eps_rel) out << r.k << ' ' << r.x_sq_true << ' ' << *r.eps_rel << '\n';
  }
  return out.str();
}

}  // namespace qlinsolve::hw
