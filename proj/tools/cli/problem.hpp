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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qlinsolve/hwmodel.hpp"
#include "qlinsolve/linsys.hpp"
#include "qlinsolve/spinchain.hpp"

namespace qlinsolve::cli {

enum class Protocol { kEmbedFull, kEmbedReduced, kCircuit, kChain };

const char* to_string(Protocol p);
// Throws std::invalid_argument for an unknown name.
Protocol parse_protocol(std::string_view name);

// Problem description loaded from a JSON document:
//
//   {
//     "matrix": [[-1.8, 0.6], [-0.4, 1.4]],   row-major, required
//     "b": [-0.6, 0.8],                       required by solve
//     "target_k": 1,                          1-based; omitted = every variable
//     "protocol": "circuit",                  embed-full | embed-reduced | circuit | chain
//     "shots": {"series": 4, "per_series": 1024},
//     "noise": {"intercept": 0.0, "slope": 0.0, "jitter_sd": 0.0},
//     "correction": {"intercept": 0.0, "slope": 0.0},
//     "seed": 1,
//     "site": 3,                              chain readout site, default M
//     "chain": {"couplings": [1, ...], "larmor": [...], "time": 1.5},
//     "calibration": {"grid_max": [8, 9, 6], "step": 0.1, "transfer_matrix": [[...]]}
//   }
struct ProblemFile {
  linsys::Matrix a;
  std::optional<linsys::Vector> b;
  std::optional<int> target_k;
  Protocol protocol = Protocol::kCircuit;
  std::optional<hw::ShotPlan> shots;
  std::optional<hw::NoiseModel> noise;
  std::optional<hw::CorrectionModel> correction;
  std::uint64_t seed = 1;
  std::optional<int> site;
  std::optional<chain::ChainSpec> chain;
  std::optional<std::vector<int>> grid_max;
  double grid_step = 0.1;
  std::optional<linsys::Matrix> transfer_matrix;
};

// Syntax or schema problem in a problem file. line/column are 1-based and 0
// when unknown (schema errors).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

ProblemFile parse_problem(std::string_view text, std::string_view source = "<input>");
ProblemFile load_problem(const std::filesystem::path& path);

// Correction model persisted by `calibrate` ({"intercept", "slope", ...}).
hw::CorrectionModel load_correction(const std::filesystem::path& path);
std::string correction_json(const hw::CorrectionModel& model, hw::CorrectionMode mode);

}  // namespace qlinsolve::cli
