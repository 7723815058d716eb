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

#include "qlinsolve/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qlinsolve {

std::int64_t ShotRecord::total_shots() const {
  std::int64_t n = 0;
  for (const auto& s : series) n += s.shots;
  return n;
}

std::int64_t ShotRecord::total_ones() const {
  std::int64_t n = 0;
  for (const auto& s : series) n += s.ones;
  return n;
}

double ShotRecord::p_hat() const {
  const std::int64_t n = total_shots();
  return n == 0 ? 0.0 : static_cast<double>(total_ones()) / static_cast<double>(n);
}

}  // namespace qlinsolve

namespace qlinsolve::qsim {

namespace {

void check_register(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("register size must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
}

void check_qubit(int n, int q) {
  if (q < 1 || q > n) {
    throw std::out_of_range("qubit " + std::to_string(q) + " outside register of " +
                            std::to_string(n));
  }
}

std::size_t bit(int q) { return std::size_t{1} << (q - 1); }

}  // namespace

GateCircuit::GateCircuit(int n_qubits) : n_qubits_(n_qubits) { check_register(n_qubits); }

GateCircuit& GateCircuit::append(const Gate& g) {
  check_qubit(n_qubits_, g.qubit);
  if (g.kind == GateKind::kCnot) {
    check_qubit(n_qubits_, g.target);
    if (g.target == g.qubit) throw std::invalid_argument("CNOT control equals target");
  }
  gates_.push_back(g);
  return *this;
}

GateCircuit& GateCircuit::append(const GateCircuit& other) {
  if (other.n_qubits() > n_qubits_) {
    throw std::invalid_argument("appended circuit uses more qubits than the register");
  }
  for (const auto& g : other.gates()) append(g);
  return *this;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_register(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Complex{});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes) {
  StateVector s(n_qubits);
  if (amplitudes.size() != s.amps_.size()) {
    throw std::invalid_argument("amplitude vector length must be 2^n");
  }
  s.amps_ = std::move(amplitudes);
  if (std::abs(s.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state is not normalized");
  }
  return s;
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw std::out_of_range("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::excitation(int n_qubits, int m) {
  if (m != 0) check_qubit(n_qubits, m);
  return basis(n_qubits, excitation_index(m));
}

void StateVector::apply(const Gate& g) {
  check_qubit(n_qubits_, g.qubit);
  const std::size_t mask = bit(g.qubit);
  switch (g.kind) {
    case GateKind::kCnot: {
      check_qubit(n_qubits_, g.target);
      const std::size_t tmask = bit(g.target);
      for (std::size_t x = 0; x < amps_.size(); ++x) {
        if ((x & mask) && !(x & tmask)) std::swap(amps_[x], amps_[x | tmask]);
      }
      break;
    }
    case GateKind::kRy: {
      const double c = std::cos(g.angle / 2.0);
      const double s = std::sin(g.angle / 2.0);
      for (std::size_t x = 0; x < amps_.size(); ++x) {
        if (x & mask) continue;
        const Complex a0 = amps_[x];
        const Complex a1 = amps_[x | mask];
        amps_[x] = c * a0 + s * a1;
        amps_[x | mask] = -s * a0 + c * a1;
      }
      break;
    }
    case GateKind::kRz: {
      const Complex up = std::polar(1.0, g.angle / 2.0);
      const Complex down = std::conj(up);
      for (std::size_t x = 0; x < amps_.size(); ++x) {
        amps_[x] *= (x & mask) ? down : up;
      }
      break;
    }
  }
}

void StateVector::apply(const GateCircuit& c) {
  if (c.n_qubits() != n_qubits_) throw std::invalid_argument("circuit/register size mismatch");
  for (const auto& g : c.gates()) apply(g);
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

double StateVector::probability_one(int qubit) const {
  check_qubit(n_qubits_, qubit);
  const std::size_t mask = bit(qubit);
  double p = 0.0;
  for (std::size_t x = 0; x < amps_.size(); ++x) {
    if (x & mask) p += std::norm(amps_[x]);
  }
  return std::clamp(p, 0.0, 1.0);
}

std::size_t excitation_index(int m) {
  if (m < 0) throw std::out_of_range("negative excitation label");
  return m == 0 ? 0 : bit(m);
}

StateVector apply_gate(StateVector state, const Gate& g) {
  state.apply(g);
  return state;
}

StateVector run(const GateCircuit& c, StateVector state) {
  state.apply(c);
  return state;
}

GateCircuit composite_uij(int n_qubits, int i, int j, double alpha, double beta) {
  GateCircuit c(n_qubits);
  auto rotate = [&](double a) {
    // R_i(a, beta) = Rz(beta) Ry(a) Rz(-beta), applied right to left.
    if (beta != 0.0) c.append(Gate::rz(i, -beta));
    c.append(Gate::ry(i, a));
    if (beta != 0.0) c.append(Gate::rz(i, beta));
  };
  c.append(Gate::cnot(i, j));
  rotate(-alpha);  // R_i^+ = R_i(-alpha, beta)
  c.append(Gate::cnot(j, i));
  rotate(alpha);
  c.append(Gate::cnot(i, j));
  return c;
}

MatrixXcd circuit_matrix(const GateCircuit& c) {
  const std::size_t dim = std::size_t{1} << c.n_qubits();
  MatrixXcd u(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const StateVector s = run(c, StateVector::basis(c.n_qubits(), col));
    for (std::size_t row = 0; row < dim; ++row) u(row, col) = s[row];
  }
  return u;
}

Complex projection(const StateVector& state, int m) {
  if (m != 0) check_qubit(state.n_qubits(), m);
  return state[excitation_index(m)];
}

ShotRecord sample_shots(const StateVector& state, int qubit, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const double p = state.probability_one(qubit);
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::int64_t> draw(shots, p);
  return ShotRecord{{ShotSeries{shots, draw(rng)}}};
}

SubspaceState::SubspaceState(int n_qubits) : n_qubits_(n_qubits) {
  check_register(n_qubits);
  amps_ = VectorXcd::Zero(n_qubits + 1);
  amps_(0) = 1.0;
}

SubspaceState::SubspaceState(int n_qubits, VectorXcd amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_register(n_qubits);
  if (amps_.size() != n_qubits + 1) {
    throw std::invalid_argument("subspace state needs n + 1 amplitudes");
  }
}

void SubspaceState::apply_composite(int i, int j, double alpha, double beta) {
  check_qubit(n_qubits_, i);
  check_qubit(n_qubits_, j);
  if (i == j) throw std::invalid_argument("U_ij needs two distinct qubits");
  const Eigen::Matrix3cd b = composite_block(alpha, beta);
  const Eigen::Vector3cd in(amps_(0), amps_(i), amps_(j));
  const Eigen::Vector3cd out = b * in;
  amps_(0) = out(0);
  amps_(i) = out(1);
  amps_(j) = out(2);
}

StateVector SubspaceState::to_state_vector() const {
  std::vector<Complex> amps(std::size_t{1} << n_qubits_, Complex{});
  for (int m = 0; m <= n_qubits_; ++m) amps[excitation_index(m)] = amps_(m);
  return StateVector::from_amplitudes(n_qubits_, std::move(amps));
}

Eigen::Matrix3cd composite_block(double alpha, double beta) {
  // Local register: qubit 1 plays i, qubit 2 plays j. Inputs |0>, |i>, |j>
  // are basis indices 0, 1, 2.
  const GateCircuit c = composite_uij(2, 1, 2, alpha, beta);
  Eigen::Matrix3cd b;
  constexpr std::size_t kIdx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    const StateVector s = run(c, StateVector::basis(2, kIdx[col]));
    for (int row = 0; row < 3; ++row) b(row, col) = s[kIdx[row]];
  }
  return b;
}

MatrixXcd one_excitation_block(const GateCircuit& c, double* leakage) {
  const int n = c.n_qubits();
  MatrixXcd block(n + 1, n + 1);
  double worst = 0.0;
  for (int col = 0; col <= n; ++col) {
    const StateVector s = run(c, StateVector::excitation(n, col));
    for (int row = 0; row <= n; ++row) block(row, col) = s[excitation_index(row)];
    for (std::size_t x = 0; x < s.dim(); ++x) {
      // Skip 0 and powers of two: those are the subspace labels.
      if ((x & (x - 1)) == 0) continue;
      worst = std::max(worst, std::abs(s[x]));
    }
  }
  if (leakage) *leakage = worst;
  return block;
}

}  // namespace qlinsolve::qsim
