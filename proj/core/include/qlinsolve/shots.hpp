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
#include <vector>

namespace qlinsolve {

struct ShotSeries {
  std::int64_t shots = 0;
  std::int64_t ones = 0;
};

// Outcomes of repeated single-qubit measurements, grouped in series.
struct ShotRecord {
  std::vector<ShotSeries> series;

  std::int64_t total_shots() const;
  std::int64_t total_ones() const;
  // Pooled frequency of outcome 1 over all series; 0 for an empty record.
  double p_hat() const;
};

}  // namespace qlinsolve
