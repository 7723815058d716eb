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

#include "qlinsolve/synth.hpp"

namespace {

using namespace qlinsolve;

Eigen::MatrixXd three_eq() {
  Eigen::MatrixXd a(3, 3);
  a << 0.9, -0.6, -1.8, 1.6, -0.5, -0.6, 0.8, -1.4, -0.5;
  return a;
}

void BM_SolveEncoding(benchmark::State& st) {
  Eigen::VectorXd b(3);
  b << -0.5, 0.7, -0.5;
  for (auto _ : st) benchmark::DoNotOptimize(synth::solve_encoding(b));
}
BENCHMARK(BM_SolveEncoding)->Unit(benchmark::kMillisecond);

void BM_SolveExtraction(benchmark::State& st) {
  const Eigen::MatrixXd a = three_eq();
  const int k = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(synth::solve_extraction(a, k));
}
BENCHMARK(BM_SolveExtraction)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
