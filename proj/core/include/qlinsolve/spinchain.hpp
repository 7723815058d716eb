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
#include <string>
#include <vector>

#include "qlinsolve/linsys.hpp"

// Linear-system solving by free evolution of an XX spin chain in an
// inhomogeneous field:
//
//   H = sum_{i<N} d_i (Ix_i Ix_{i+1} + Iy_i Iy_{i+1}) + sum_i (w - w_i) Iz_i,
//   w = (1/2) sum_i w_i,  V(t) = exp(-i H t).
//
// H conserves the number of excitations, so the chain is simulated exactly on
// the ground state |0> (all spins Iz = +1/2) plus the N one-excitation states
// |i> (spin i flipped to Iz = -1/2). Energies are absolute Zeeman energies:
//   E_0 = (1/2) sum_j (w - w_j),  E_i = E_0 - (w - w_i),
// and the hopping element <i|H|i+1> = d_i / 2.
namespace qlinsolve::chain {

using linsys::Matrix;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct ChainSpec {
  std::vector<double> couplings;  // d_1 .. d_{N-1}
  std::vector<double> larmor;     // w_1 .. w_N
  double time = 0.0;

  int n_sites() const { return static_cast<int>(larmor.size()); }
  double mean_field() const;  // w
  // Throws std::invalid_argument on size mismatch, N < 2, non-finite values
  // or negative time.
  void validate() const;
};

// Open box for the fitted parameters; d_1 is fixed and not boxed.
struct ParameterBox {
  double coupling_min = 0.1;
  double coupling_max = 2.0;
  double larmor_min = -3.0;
  double larmor_max = 3.0;
  double time_max = 20.0;
};

bool within_box(const ChainSpec& spec, const ParameterBox& box);

// N x N real symmetric tridiagonal block on |1>..|N>.
Matrix one_excitation_hamiltonian(const ChainSpec& spec);
double ground_energy(const ChainSpec& spec);

// V(t) restricted to |1>..|N>, by eigendecomposition.
MatrixXcd evolution_block(const ChainSpec& spec);

// `initial` holds (|0>, |1>, ..., |N>) amplitudes and must be normalized.
VectorXcd evolve(const ChainSpec& spec, const VectorXcd& initial);

// P_k = sum_{j<=M} V(t)_{site,j} A_{jk}, so that <site|Psi(t)> = sum_k P_k x_k
// for an initial state carrying b = A x on sites 1..M. `site` is 1-based.
VectorXcd projection_coefficients(const ChainSpec& spec, const Matrix& a, int site);

// max_i |P_i - delta_ik|.
double projection_residual(const VectorXcd& p, int k);

struct ChainFitOptions {
  int n_sites = 0;  // 0: M + 1
  int restarts = 256;
  int max_iterations = 300;
  double tolerance = 1e-6;         // acceptance on max |P_i - delta_ik|
  double polish_tolerance = 1e-11; // Newton target
  double descent_tolerance = 1e-9; // a lowered t counts as reached below this
  double time_step = 0.01;         // continuation step when lowering t
  double time_resolution = 1e-5;   // bisection bracket on t_min
  int descents = 16;               // candidates continued towards smaller t
  ParameterBox box;
  std::uint64_t seed = 0xc4a1f17ULL;
};

struct ChainCandidate {
  ChainSpec spec;
  double residual = 0.0;
};

struct ChainFit {
  int k = 0;
  int site = 0;
  ChainSpec spec;  // smallest converged time found; an upper bound on t_min
  double residual = 0.0;
  std::vector<ChainCandidate> converged;  // every converged restart, before descent
};

// d_1 = 1. Throws SingularMatrix, InfeasibleEmbedding (r_k0 > 1, unreachable
// with a unitary V), std::invalid_argument (chain shorter than M) or
// NoConvergence (inconclusive).
ChainFit fit_chain(const Matrix& a, int k, int site, const ChainFitOptions& opts = {});

struct ChainSchedule {
  std::vector<ChainFit> fits;  // one per variable
  double total_time = 0.0;     // sequential protocol: sum of per-variable times
};

ChainSchedule fit_all(const Matrix& a, int site, const ChainFitOptions& opts = {});

// CSV in the layout x_i,d_2..d_{N-1},omega_1..omega_N,t_min,residual.
std::string parameter_table_csv(const ChainSchedule& schedule);

}  // namespace qlinsolve::chain
