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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "qlinsolve/linsys.hpp"
#include "qlinsolve/qsim.hpp"

// Angle synthesis for the gate-circuit protocol on M + 1 qubits.
//
// Encoding (qubits 1..M):  U_b(beta) = U_{M-1,M}(beta_M) ... U_12(beta_2) Ry_1(beta_1)
//   U_b|0> = b0|0> + sum_i b_i |i>,  b0 = sqrt(1 - |b|^2).
// Extraction:              U(alpha) = U_{M,M+1}(alpha_M) ... U_12(alpha_1)
//   <M| U |Psi_b> = sum_j D_j x_j, and D = e_k makes the amplitude equal x_k.
namespace qlinsolve::synth {

using linsys::Matrix;
using linsys::Vector;

struct SolverOptions {
  int restarts = 64;
  int max_iterations = 200;
  double tolerance = 1e-9;
  double fd_step = 1e-6;
  double dedupe = 1e-6;  // branch identity, per angle modulo the period
  std::uint64_t seed = 0x51a7e5eedULL;
};

struct EncodingSolution {
  std::vector<double> betas;  // canonical branch
  double residual = 0.0;      // max |amplitude - target| incl. the ground amplitude
  std::vector<std::vector<double>> branches;
};

struct ExtractionSolution {
  Eigen::Index k = 0;  // 1-based
  std::vector<double> alphas;
  double residual = 0.0;  // max |D_i - delta_ik|
  std::vector<std::vector<double>> branches;
};

// Gate circuits of the two families on an n_qubits register.
qsim::GateCircuit encoding_circuit(int n_qubits, std::span<const double> betas);
qsim::GateCircuit extraction_circuit(int n_qubits, std::span<const double> alphas);

// Amplitudes (b0, b1, ..., bM) prepared by U_b(beta) on |0>, M = betas.size().
Vector encoding_amplitudes(std::span<const double> betas);

// Real (M+2) x (M+2) one-excitation block of U(alpha), M = alphas.size(),
// ordered (|0>, |1>, ..., |M+1>).
Matrix extraction_block(std::span<const double> alphas);

// D with <m|U(alpha)|Psi_b> = sum_j D_j x_j for b = A x: row m of the
// extraction block restricted to inputs 1..M, times A. m is 1-based, m <= M+1.
Vector coefficient_probe(const Matrix& a, std::span<const double> alphas, int m);

// Throws NormTooLarge or NoConvergence.
EncodingSolution solve_encoding(const Vector& b, const SolverOptions& opts = {});

// k is 1-based. Throws SingularMatrix, InfeasibleEmbedding or NoConvergence.
ExtractionSolution solve_extraction(const Matrix& a, Eigen::Index k, const SolverOptions& opts = {});

struct Protocol {
  qsim::GateCircuit circuit;
  EncodingSolution encoding;
  ExtractionSolution extraction;
  int measured_qubit = 0;  // = M; the projection label is the same
};

Protocol build_full_protocol(const linsys::LinearSystem& sys, Eigen::Index k,
                             const SolverOptions& opts = {});

// Extraction circuit applied to an already prepared state. Used when the
// same A is probed with many right-hand sides.
Protocol assemble_protocol(const EncodingSolution& enc, const ExtractionSolution& ext, Eigen::Index m);

// Runs the protocol on the dense simulator from |0...0>.
qsim::StateVector simulate(const Protocol& p);

// Reduces angles to their canonical ranges: the first encoding angle to
// [-2 pi, 2 pi] (period 4 pi), all others to [0, 2 pi).
std::vector<double> canonical_betas(std::vector<double> betas);
std::vector<double> canonical_alphas(std::vector<double> alphas);

}  // namespace qlinsolve::synth
