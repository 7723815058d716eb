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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/problem.hpp"
#include "qlinsolve/hwmodel.hpp"
#include "qlinsolve/linsys.hpp"

namespace qlinsolve::cli {

// Command-line values that take precedence over the problem file.
struct Overrides {
  std::optional<Protocol> protocol;
  std::optional<int> target_k;
  std::optional<std::int64_t> shots;
  std::optional<int> series;
  std::optional<std::uint64_t> seed;
  std::optional<hw::NoiseModel> noise;
  std::optional<hw::CorrectionModel> correction;
  std::optional<int> site;
  hw::CorrectionMode mode = hw::CorrectionMode::kExactInverse;
  bool rescale = false;
};

void apply_overrides(ProblemFile& problem, const Overrides& overrides);

struct VariableReport {
  int k = 0;
  double x_classical = 0.0;
  std::optional<double> x_quantum;       // exact amplitude times the scale factor
  double x_quantum_imag = 0.0;
  std::optional<double> x_sq_sampled;    // x~^2 of the (rescaled) problem
  std::optional<hw::CorrectedValue> corrected;
  double solver_residual = 0.0;
  bool match = false;
};

struct RunReport {
  Protocol protocol = Protocol::kCircuit;
  double scale = 1.0;  // x = scale * (amplitude of the rescaled problem)
  double match_tolerance = 1e-8;
  linsys::FeasibilityReport feasibility;
  std::vector<VariableReport> rows;
  std::vector<std::string> diagnostics;
  double seconds = 0.0;
  bool all_match() const;
};

// Runs the selected protocol for target_k (or every variable) and checks each
// value against classical_solve. Library errors propagate.
RunReport cmd_solve(const ProblemFile& problem, bool rescale = false,
                    hw::CorrectionMode mode = hw::CorrectionMode::kExactInverse);

// Deterministic: no timing, fixed precision.
std::string report_csv(const RunReport& report);
void print_report(std::ostream& out, const RunReport& report);

// Full driver. Exit codes: 0 success, 1 usage/parse/fit errors, 2 singular or
// infeasible input, 3 solver non-convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlinsolve::cli
