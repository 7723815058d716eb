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

#include "qlinsolve/qsim.hpp"

namespace {

using namespace qlinsolve;

void BM_CompositeGate(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  qsim::GateCircuit circ(n);
  for (int i = 1; i < n; ++i) circ.append(qsim::composite_uij(n, i, i + 1, 0.3, 0.7));
  qsim::StateVector psi(n);
  for (auto _ : st) {
    psi.apply(circ);
    benchmark::DoNotOptimize(psi[0]);
  }
  st.SetItemsProcessed(st.iterations() * (n - 1));
}
BENCHMARK(BM_CompositeGate)->DenseRange(3, 10, 1);

void BM_CircuitMatrix(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  qsim::GateCircuit circ(n);
  for (int i = 1; i < n; ++i) circ.append(qsim::composite_uij(n, i, i + 1, 0.3, 0.7));
  for (auto _ : st) benchmark::DoNotOptimize(qsim::circuit_matrix(circ));
}
BENCHMARK(BM_CircuitMatrix)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
