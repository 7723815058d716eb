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

#include <random>

#include "qlinsolve/embed.hpp"

namespace {

using namespace qlinsolve;

Eigen::MatrixXd feasible(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) * 2.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) += 0.2 * g(rng);
  const double s = a.inverse().jacobiSvd().singularValues()(0);
  return a * s;
}

void BM_EmbedFull(benchmark::State& st) {
  const Eigen::MatrixXd a = feasible(static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(embed::embed_full(a));
}
BENCHMARK(BM_EmbedFull)->RangeMultiplier(2)->Range(2, 16);

void BM_EmbedReduced(benchmark::State& st) {
  const Eigen::MatrixXd a = feasible(static_cast<int>(st.range(0)), 5);
  for (auto _ : st) benchmark::DoNotOptimize(embed::embed_reduced(a, 1));
}
BENCHMARK(BM_EmbedReduced)->RangeMultiplier(2)->Range(2, 16);

}  // namespace

BENCHMARK_MAIN();
