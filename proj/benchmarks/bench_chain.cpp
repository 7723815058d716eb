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

#include <benchmark/benchmark.h>

#include "qlinsolve/spinchain.hpp"

namespace {

using namespace qlinsolve;

void BM_Evolve(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  chain::ChainSpec spec;
  spec.couplings.assign(static_cast<std::size_t>(n - 1), 1.0);
  spec.larmor.assign(static_cast<std::size_t>(n), 0.1);
  spec.time = 1.7;
  Eigen::VectorXcd init = Eigen::VectorXcd::Zero(n + 1);
  init(1) = 1.0;
  for (auto _ : st) benchmark::DoNotOptimize(chain::evolve(spec, init));
}
BENCHMARK(BM_Evolve)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
