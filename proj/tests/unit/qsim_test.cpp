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

#include <gtest/gtest.h>

#include <cmath>

#include "support/property.hpp"
#include "support/systems.hpp"

namespace qlinsolve::qsim {
namespace {

using qlinsolve::testing::for_all;
using qlinsolve::testing::random_angle;

MatrixXcd total_iz(int n) {
  const std::size_t dim = std::size_t{1} << n;
  MatrixXcd iz = MatrixXcd::Zero(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) {
    double s = 0.0;
    for (int q = 0; q < n; ++q) s += ((x >> q) & 1) ? -0.5 : 0.5;
    iz(x, x) = s;
  }
  return iz;
}

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

StateVector random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(n, amps);
}

TEST(Gate, CnotTruthTable) {
  // |10>: qubit 1 excited.
  StateVector s = StateVector::excitation(2, 1);
  s.apply(Gate::cnot(1, 2));
  EXPECT_NEAR(std::abs(s[3]), 1.0, 1e-15);
  s.apply(Gate::cnot(1, 2));
  EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
  StateVector t = StateVector::excitation(2, 2);
  t.apply(Gate::cnot(1, 2));
  EXPECT_NEAR(std::abs(t[excitation_index(2)]), 1.0, 1e-15);
}

TEST(Gate, RyZeroIsIdentity) {
  std::mt19937_64 rng(1);
  const StateVector s = random_state(rng, 3);
  const StateVector t = apply_gate(s, Gate::ry(2, 0.0));
  for (std::size_t x = 0; x < s.dim(); ++x) EXPECT_NEAR(std::abs(s[x] - t[x]), 0.0, 1e-15);
}

TEST(Gate, RotationConventions) {
  const double a = 0.9;
  const StateVector y = apply_gate(StateVector(1), Gate::ry(1, a));
  EXPECT_NEAR(y[0].real(), std::cos(a / 2), 1e-15);
  EXPECT_NEAR(y[1].real(), -std::sin(a / 2), 1e-15);
  const StateVector y1 = apply_gate(StateVector::basis(1, 1), Gate::ry(1, a));
  EXPECT_NEAR(y1[0].real(), std::sin(a / 2), 1e-15);
  EXPECT_NEAR(y1[1].real(), std::cos(a / 2), 1e-15);
  const StateVector z = apply_gate(StateVector::from_amplitudes(1, {M_SQRT1_2, M_SQRT1_2}), Gate::rz(1, a));
  EXPECT_NEAR(std::abs(z[0] - std::polar(M_SQRT1_2, a / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(z[1] - std::polar(M_SQRT1_2, -a / 2)), 0.0, 1e-15);
}

TEST(Gate, IndexValidation) {
  GateCircuit c(3);
  EXPECT_THROW(c.append(Gate::ry(4, 0.1)), std::out_of_range);
  EXPECT_THROW(c.append(Gate::ry(0, 0.1)), std::out_of_range);
  EXPECT_THROW(c.append(Gate::cnot(2, 2)), std::invalid_argument);
  EXPECT_THROW(c.append(GateCircuit(4)), std::invalid_argument);
  StateVector s(2);
  EXPECT_THROW(s.apply(Gate::ry(3, 0.1)), std::out_of_range);
}

TEST(StateVectorTest, Construction) {
  EXPECT_THROW(StateVector(0), std::invalid_argument);
  EXPECT_THROW(StateVector(kMaxQubits + 1), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes(1, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes(2, {1.0, 0.0}), std::invalid_argument);
  const StateVector s = StateVector::excitation(3, 3);
  EXPECT_EQ(excitation_index(3), 4u);
  EXPECT_NEAR(std::abs(projection(s, 3)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(projection(StateVector(3), 0)), 1.0, 1e-15);
}

TEST(Encoding, TwoQubitClosedForm) {
  // Ry_1(b1) then U_12(b2) on |00>.
  const double b1 = 1.1;
  const double b2 = -0.4;
  GateCircuit c(2);
  c.append(Gate::ry(1, b1)).append(composite_uij(2, 1, 2, b2));
  const StateVector s = run(c, StateVector(2));
  EXPECT_NEAR(s[0].real(), std::cos(b1 / 2), 1e-15);
  EXPECT_NEAR(projection(s, 1).real(), std::sin(b2) * std::sin(b1 / 2), 1e-15);
  EXPECT_NEAR(projection(s, 2).real(), -std::cos(b2) * std::sin(b1 / 2), 1e-15);
}

TEST(Encoding, ReferenceAnglesPrepareTwoEquationRhs) {
  GateCircuit c(3);
  c.append(Gate::ry(1, -M_PI)).append(composite_uij(3, 1, 2, 0.64350));
  const StateVector s = run(c, StateVector(3));
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
  EXPECT_NEAR(projection(s, 1).real(), -0.6, 5e-6);
  EXPECT_NEAR(projection(s, 2).real(), 0.8, 5e-6);
}

TEST(CompositeUij, ZeroAnglesGiveTheSwap) {
  // With identity rotations only C_ij C_ji C_ij is left, which exchanges
  // qubits i and j. No angle makes U_ij the identity: its one-excitation
  // block has entries -sin(a) and sin(a) on the diagonal.
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      GateCircuit swap(3);
      swap.append(Gate::cnot(i, j)).append(Gate::cnot(j, i)).append(Gate::cnot(i, j));
      const MatrixXcd u = circuit_matrix(composite_uij(3, i, j, 0.0, 0.0));
      EXPECT_LE(max_abs(u - circuit_matrix(swap)), 1e-12);
      EXPECT_GT(max_abs(u - MatrixXcd::Identity(8, 8)), 0.5);
      StateVector s = StateVector::excitation(3, i);
      s.apply(composite_uij(3, i, j, 0.0));
      EXPECT_NEAR(std::abs(projection(s, j)), 1.0, 1e-12);
    }
  }
}

TEST(CompositeUij, GateCounts) {
  EXPECT_EQ(composite_uij(2, 1, 2, 0.3).size(), 5u);
  EXPECT_EQ(composite_uij(2, 1, 2, 0.3, 0.2).size(), 9u);
  EXPECT_THROW(composite_uij(2, 1, 1, 0.3), std::invalid_argument);
}

TEST(CompositeUij, RealBlock) {
  const double a = 0.7;
  const Eigen::Matrix3cd blk = composite_block(a);
  Eigen::Matrix3d expected;
  expected << 1, 0, 0, 0, -std::sin(a), std::cos(a), 0, std::cos(a), std::sin(a);
  EXPECT_LE((blk - expected.cast<Complex>()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CircuitMatrix, EmptyIsIdentity) {
  EXPECT_LE(max_abs(circuit_matrix(GateCircuit(3)) - MatrixXcd::Identity(8, 8)), 0.0);
}

TEST(CircuitMatrix, CnotInQubitOrderedBasis) {
  // Textbook CNOT with control qubit i, written on |q_i q_j> in the order
  // |00>, |01>, |10>, |11>, i.e. (|0>, |j>, |i>, |ij>).
  GateCircuit c(2);
  c.append(Gate::cnot(1, 2));
  const MatrixXcd u = circuit_matrix(c);
  const int order[] = {0, 2, 1, 3};  // |0>, |j> = qubit 2, |i> = qubit 1, |ij>
  Eigen::Matrix4d expected;
  expected << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  for (int r = 0; r < 4; ++r) {
    for (int col = 0; col < 4; ++col) EXPECT_EQ(u(order[r], order[col]).real(), expected(r, col));
  }
}

TEST(CircuitMatrix, ThreeQubitChainBlockIsOrthogonal) {
  GateCircuit c(3);
  c.append(composite_uij(3, 1, 2, 1.2)).append(composite_uij(3, 2, 3, -0.3));
  const MatrixXcd u = circuit_matrix(c);
  Eigen::Matrix3cd blk;
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) blk(r, col) = u(excitation_index(r + 1), excitation_index(col + 1));
  }
  EXPECT_LE(blk.imag().cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::Matrix3d re = blk.real();
  EXPECT_LE((re * re.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(max_abs(u * u.adjoint() - MatrixXcd::Identity(8, 8)), 1e-12);
}

TEST(Projection, FullTwoEquationCircuit) {
  using qlinsolve::testing::kTwoEqAlphas;
  const double expected[] = {0.5789, 0.7368};
  for (int k = 0; k < 2; ++k) {
    GateCircuit c(3);
    c.append(Gate::ry(1, -M_PI)).append(composite_uij(3, 1, 2, 0.64350));
    c.append(composite_uij(3, 1, 2, kTwoEqAlphas[k][0])).append(composite_uij(3, 2, 3, kTwoEqAlphas[k][1]));
    const Complex amp = projection(run(c, StateVector(3)), 2);
    EXPECT_NEAR(amp.real(), expected[k], 5e-5);
    EXPECT_NEAR(amp.imag(), 0.0, 1e-15);
  }
}

TEST(Projection, FullThreeEquationCircuitSecondVariable) {
  using qlinsolve::testing::kThreeEqAlphas;
  using qlinsolve::testing::kThreeEqBetas;
  GateCircuit c(4);
  c.append(Gate::ry(1, kThreeEqBetas[0]));
  c.append(composite_uij(4, 1, 2, kThreeEqBetas[1])).append(composite_uij(4, 2, 3, kThreeEqBetas[2]));
  for (int i = 0; i < 3; ++i) c.append(composite_uij(4, i + 1, i + 2, kThreeEqAlphas[1][i]));
  EXPECT_NEAR(projection(run(c, StateVector(4)), 3).real(), 0.6578, 5e-5);
}

TEST(Shots, Deterministic) {
  const StateVector s = StateVector::from_amplitudes(1, {std::sqrt(0.7), std::sqrt(0.3)});
  EXPECT_EQ(sample_shots(s, 1, 1000, 5).total_ones(), sample_shots(s, 1, 1000, 5).total_ones());
  EXPECT_THROW(sample_shots(s, 1, 0, 5), std::invalid_argument);
}

TEST(Shots, CertainOutcomes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(sample_shots(StateVector(2), 2, 1024, seed).p_hat(), 0.0);
    EXPECT_EQ(sample_shots(StateVector::excitation(2, 2), 2, 1024, seed).p_hat(), 1.0);
  }
}

TEST(Shots, BinomialConcentration) {
  const double x = 0.5789;
  const double p = x * x;
  const StateVector s = StateVector::from_amplitudes(1, {std::sqrt(1 - p), x});
  const double bound = 3.0 * std::sqrt(p * (1 - p) / 4096);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    if (std::abs(sample_shots(s, 1, 4096, seed).p_hat() - p) <= bound) ++inside;
  }
  EXPECT_GE(inside, 990);
}

TEST(Shots, ProbabilitySumsOverQubitSetStates) {
  const StateVector s = StateVector::from_amplitudes(2, {0.5, 0.5, 0.5, 0.5});
  EXPECT_NEAR(s.probability_one(1), 0.5, 1e-15);
  EXPECT_NEAR(s.probability_one(2), 0.5, 1e-15);
}

TEST(Subspace, MatchesDenseSimulation) {
  std::mt19937_64 rng(3);
  VectorXcd amps(5);
  for (int m = 0; m < 5; ++m) amps(m) = Complex(std::normal_distribution<double>()(rng), 0.0);
  amps.normalize();
  SubspaceState sub(4, amps);
  StateVector dense = sub.to_state_vector();
  const int pairs[][2] = {{1, 2}, {2, 3}, {3, 4}, {2, 1}, {4, 2}};
  for (const auto& pr : pairs) {
    const double a = random_angle(rng);
    const double b = random_angle(rng);
    sub.apply_composite(pr[0], pr[1], a, b);
    dense.apply(composite_uij(4, pr[0], pr[1], a, b));
  }
  for (int m = 0; m <= 4; ++m) EXPECT_NEAR(std::abs(sub[m] - projection(dense, m)), 0.0, 1e-12);
}

TEST(QsimProperty, CompositeCommutesWithTotalIz) {
  const MatrixXcd iz = total_iz(3);
  for_all(10000, 31, [&](std::mt19937_64& rng) -> ::testing::AssertionResult {
    const int i = 1 + static_cast<int>(rng() % 3);
    const int j = 1 + static_cast<int>((i + rng() % 2) % 3);
    const MatrixXcd u = circuit_matrix(composite_uij(3, i, j, random_angle(rng), random_angle(rng)));
    const double c = max_abs(u * iz - iz * u);
    if (c > 1e-12) return ::testing::AssertionFailure() << "commutator " << c;
    return ::testing::AssertionSuccess();
  });
}

TEST(QsimProperty, OneExcitationClosure) {
  for_all(10000, 32, [](std::mt19937_64& rng) -> ::testing::AssertionResult {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int blocks = 1 + static_cast<int>(rng() % 6);
    GateCircuit c(n);
    for (int b = 0; b < blocks; ++b) {
      const int i = 1 + static_cast<int>(rng() % n);
      int j = 1 + static_cast<int>(rng() % (n - 1));
      if (j >= i) ++j;
      c.append(composite_uij(n, i, j, random_angle(rng), (rng() % 2) ? random_angle(rng) : 0.0));
    }
    std::vector<Complex> amps(std::size_t{1} << n, 0.0);
    std::normal_distribution<double> g;
    double norm = 0.0;
    for (int m = 0; m <= n; ++m) {
      amps[excitation_index(m)] = {g(rng), g(rng)};
      norm += std::norm(amps[excitation_index(m)]);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    const StateVector out = run(c, StateVector::from_amplitudes(n, amps));
    double outside = 0.0;
    for (std::size_t x = 0; x < out.dim(); ++x) {
      if (x != 0 && (x & (x - 1)) != 0) outside = std::max(outside, std::abs(out[x]));
    }
    if (outside > 1e-12) return ::testing::AssertionFailure() << "leakage " << outside;
    double leakage = 0.0;
    one_excitation_block(c, &leakage);
    if (leakage > 1e-12) return ::testing::AssertionFailure() << "block leakage " << leakage;
    return ::testing::AssertionSuccess();
  });
}

TEST(QsimProperty, GatesPreserveNorm) {
  for_all(10000, 33, [](std::mt19937_64& rng) -> ::testing::AssertionResult {
    const int n = 1 + static_cast<int>(rng() % 5);
    StateVector s = random_state(rng, n);
    for (int g = 0; g < 8; ++g) {
      const int q = 1 + static_cast<int>(rng() % n);
      switch (rng() % 3) {
        case 0:
          if (n > 1) s.apply(Gate::cnot(q, q % n + 1));
          break;
        case 1: s.apply(Gate::ry(q, random_angle(rng))); break;
        default: s.apply(Gate::rz(q, random_angle(rng))); break;
      }
    }
    if (std::abs(s.norm() - 1.0) > 1e-12) return ::testing::AssertionFailure() << "norm " << s.norm();
    return ::testing::AssertionSuccess();
  });
}

TEST(QsimProperty, EncodingClosedForm) {
  for_all(10000, 34, [](std::mt19937_64& rng) -> ::testing::AssertionResult {
    const double b1 = random_angle(rng) * 2.0 - 2.0 * M_PI;
    const double b2 = random_angle(rng) - M_PI;
    GateCircuit c(3);
    c.append(Gate::ry(1, b1)).append(composite_uij(3, 1, 2, b2));
    const StateVector s = run(c, StateVector(3));
    const double e0 = std::abs(s[0] - std::cos(b1 / 2));
    const double e1 = std::abs(projection(s, 1) - std::sin(b2) * std::sin(b1 / 2));
    const double e2 = std::abs(projection(s, 2) + std::cos(b2) * std::sin(b1 / 2));
    if (std::max({e0, e1, e2}) > 1e-12) return ::testing::AssertionFailure() << b1 << " " << b2;
    return ::testing::AssertionSuccess();
  });
}

}  // namespace
}  // namespace qlinsolve::qsim
