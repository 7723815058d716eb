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
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qlinsolve/shots.hpp"

// Dense statevector simulator for small registers.
//
// Qubits are labelled 1..n. Basis index bit (q - 1) holds qubit q, so the
// one-excitation state |m> (qubit m excited, all others 0) sits at index
// 1 << (m - 1), and |0> is the all-zero state at index 0.
//
// Rotations follow R_a(phi) = exp(i phi sigma_a / 2):
//   Ry(phi): |0> -> cos(phi/2)|0> - sin(phi/2)|1>,  |1> -> sin(phi/2)|0> + cos(phi/2)|1>
//   Rz(phi): |0> -> e^{i phi/2}|0>,                 |1> -> e^{-i phi/2}|1>
namespace qlinsolve::qsim {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr int kMaxQubits = 10;

enum class GateKind { kCnot, kRy, kRz };

struct Gate {
  GateKind kind = GateKind::kRy;
  int qubit = 1;   // control for CNOT
  int target = 0;  // CNOT only
  double angle = 0.0;

  static Gate cnot(int control, int target) { return {GateKind::kCnot, control, target, 0.0}; }
  static Gate ry(int qubit, double angle) { return {GateKind::kRy, qubit, 0, angle}; }
  static Gate rz(int qubit, double angle) { return {GateKind::kRz, qubit, 0, angle}; }
};

class GateCircuit {
 public:
  explicit GateCircuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  // Throws std::out_of_range for indices outside 1..n, std::invalid_argument for
  // a CNOT whose control equals its target.
  GateCircuit& append(const Gate& g);
  GateCircuit& append(const GateCircuit& other);

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
};

class StateVector {
 public:
  // |0...0>.
  explicit StateVector(int n_qubits);

  // Throws std::invalid_argument if the length is not 2^n or the norm is off
  // by more than 1e-10.
  static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);
  static StateVector basis(int n_qubits, std::size_t index);
  // One-excitation state |m>; m = 0 gives the ground state.
  static StateVector excitation(int n_qubits, int m);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex operator[](std::size_t index) const { return amps_[index]; }

  void apply(const Gate& g);
  void apply(const GateCircuit& c);

  double norm() const;
  // Probability of reading 1 on `qubit`.
  double probability_one(int qubit) const;

 private:
  int n_qubits_;
  std::vector<Complex> amps_;
};

// Basis index of the one-excitation label m (0 = ground).
std::size_t excitation_index(int m);

StateVector apply_gate(StateVector state, const Gate& g);
StateVector run(const GateCircuit& c, StateVector state);

// U_ij(alpha, beta) = C_ij R_i(alpha, beta) C_ji R_i(alpha, beta)^+ C_ij with
// R_i(alpha, beta) = Rz_i(beta) Ry_i(alpha) Rz_i(-beta); returned in
// application order. beta = 0 leaves a single Ry in each R_i (the five-gate
// form); otherwise each R_i expands to three rotations.
GateCircuit composite_uij(int n_qubits, int i, int j, double alpha, double beta = 0.0);

// Unitary of the whole circuit; column c is the image of basis state c.
MatrixXcd circuit_matrix(const GateCircuit& c);

// <m|state> for the one-excitation label m (0 = ground).
Complex projection(const StateVector& state, int m);

// `shots` Bernoulli draws of `qubit`, one series. Deterministic for a seed.
ShotRecord sample_shots(const StateVector& state, int qubit, std::int64_t shots, std::uint64_t seed);

// --- one-excitation subspace mode -------------------------------------------
//
// Circuits made of U_ij blocks commute with total I_z, so a state in
// span{|0>, |1>, ..., |n>} stays there. SubspaceState keeps only those n + 1
// amplitudes, ordered (|0>, |1>, ..., |n>).

class SubspaceState {
 public:
  explicit SubspaceState(int n_qubits);
  SubspaceState(int n_qubits, VectorXcd amplitudes);

  int n_qubits() const { return n_qubits_; }
  const VectorXcd& amplitudes() const { return amps_; }
  Complex operator[](int m) const { return amps_(m); }

  // Applies U_ij(alpha, beta).
  void apply_composite(int i, int j, double alpha, double beta = 0.0);

  StateVector to_state_vector() const;

 private:
  int n_qubits_;
  VectorXcd amps_;
};

// Action of U_ij(alpha, beta) on (|0>, |i>, |j>), computed by simulating the
// gate sequence on a two-qubit register.
Eigen::Matrix3cd composite_block(double alpha, double beta = 0.0);

// (n+1) x (n+1) restriction of a circuit's unitary to {|0>, |1>, ..., |n>}.
// `leakage` (if given) receives the largest amplitude magnitude any of those inputs puts
// outside the subspace.
MatrixXcd one_excitation_block(const GateCircuit& c, double* leakage = nullptr);

}  // namespace qlinsolve::qsim
