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

#include "qlinsolve/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qlinsolve/errors.hpp"
#include "qlinsolve/nlsolve.hpp"
#include "qlinsolve/rng.hpp"

namespace qlinsolve::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum : std::uint64_t { kEncodingStream = 1, kExtractionStream = 2 };

double wrap_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y >= kTwoPi ? 0.0 : y;
}

double wrap_4pi_centered(double x) { return x - 2.0 * kTwoPi * std::round(x / (2.0 * kTwoPi)); }

double circular_gap(double a, double b, double period) {
  const double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

// Keeps one representative per branch and orders them lexicographically.
std::vector<std::vector<double>> dedupe(std::vector<std::vector<double>> found, double tol,
                                        bool first_is_4pi) {
  std::sort(found.begin(), found.end());
  std::vector<std::vector<double>> unique;
  for (auto& cand : found) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const auto& u) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double period = (first_is_4pi && i == 0) ? 2.0 * kTwoPi : kTwoPi;
        if (circular_gap(u[i], cand[i], period) >= tol) return false;
      }
      return true;
    });
    if (!seen) unique.push_back(std::move(cand));
  }
  return unique;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Multi-start damped Newton from uniform angles; returns every converged root.
std::vector<std::vector<double>> multistart(const nlsolve::Residual& f, Eigen::Index unknowns,
                                            const SolverOptions& opts, std::uint64_t stream) {
  Rng rng = make_rng(opts.seed, stream);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  nlsolve::DampedNewtonOptions nopts;
  nopts.max_iterations = opts.max_iterations;
  // Iterate well past the acceptance threshold; a root is kept if it meets
  // opts.tolerance.
  nopts.tolerance = std::min(opts.tolerance, 1e-13);
  nopts.fd_step = opts.fd_step;
  std::vector<std::vector<double>> roots;
  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::VectorXd x0(unknowns);
    for (Eigen::Index i = 0; i < unknowns; ++i) x0(i) = angle(rng);
    const auto res = nlsolve::damped_newton(f, x0, nopts);
    if (res.max_residual <= opts.tolerance) roots.push_back(to_std(res.x));
  }
  return roots;
}

double encoding_residual(const Vector& b, std::span<const double> betas) {
  const Vector amps = encoding_amplitudes(betas);
  Vector target(b.size() + 1);
  target(0) = std::sqrt(std::max(0.0, 1.0 - b.squaredNorm()));
  target.tail(b.size()) = b;
  return (amps - target).cwiseAbs().maxCoeff();
}

double extraction_residual(const Matrix& a, Eigen::Index k, std::span<const double> alphas) {
  const Vector d = coefficient_probe(a, alphas, static_cast<int>(a.rows()));
  return (d - Vector::Unit(a.rows(), k - 1)).cwiseAbs().maxCoeff();
}

// Closed-form two-variable encoding: sin(beta1/2) = s = +-|b|,
// (sin beta2, -cos beta2) = (b1, b2) / s.
std::vector<std::vector<double>> encoding_closed_form(const Vector& b) {
  const double r = std::min(1.0, b.norm());
  std::vector<std::vector<double>> out;
  for (double s : {r, -r}) {
    const double beta1 = 2.0 * std::asin(s);
    const double beta2 = std::atan2(b(0) / s, -b(1) / s);
    out.push_back({beta1, beta2});
  }
  return out;
}

// Closed-form two-variable extraction. For k = 1: tan alpha1 = -a12/a22 zeroes
// D_2, then sin alpha2 = -1/D_1; k = 2 swaps the roles of the columns.
std::vector<std::vector<double>> extraction_closed_form(const Matrix& a, Eigen::Index k) {
  const Eigen::Index other = (k == 1) ? 1 : 0;
  const Eigen::Index self = k - 1;
  const double base = std::atan2(-a(0, other), a(1, other));
  std::vector<std::vector<double>> out;
  for (double alpha1 : {base, base + kPi}) {
    const double d = a(0, self) * std::cos(alpha1) + a(1, self) * std::sin(alpha1);
    const double v = std::clamp(-1.0 / d, -1.0, 1.0);
    const double alpha2 = std::asin(v);
    out.push_back({alpha1, alpha2});
    out.push_back({alpha1, kPi - alpha2});
  }
  return out;
}

}  // namespace

std::vector<double> canonical_betas(std::vector<double> betas) {
  if (!betas.empty()) betas[0] = wrap_4pi_centered(betas[0]);
  for (std::size_t i = 1; i < betas.size(); ++i) betas[i] = wrap_2pi(betas[i]);
  return betas;
}

std::vector<double> canonical_alphas(std::vector<double> alphas) {
  for (auto& a : alphas) a = wrap_2pi(a);
  return alphas;
}

qsim::GateCircuit encoding_circuit(int n_qubits, std::span<const double> betas) {
  const int m = static_cast<int>(betas.size());
  if (m < 1 || m > n_qubits) throw std::invalid_argument("encoding needs 1 <= M <= n_qubits");
  qsim::GateCircuit c(n_qubits);
  c.append(qsim::Gate::ry(1, betas[0]));
  for (int i = 1; i < m; ++i) c.append(qsim::composite_uij(n_qubits, i, i + 1, betas[i]));
  return c;
}

qsim::GateCircuit extraction_circuit(int n_qubits, std::span<const double> alphas) {
  const int m = static_cast<int>(alphas.size());
  if (m < 1 || m + 1 > n_qubits) throw std::invalid_argument("extraction needs M + 1 <= n_qubits");
  qsim::GateCircuit c(n_qubits);
  for (int i = 1; i <= m; ++i) c.append(qsim::composite_uij(n_qubits, i, i + 1, alphas[i - 1]));
  return c;
}

Vector encoding_amplitudes(std::span<const double> betas) {
  const int m = static_cast<int>(betas.size());
  if (m < 1) throw std::invalid_argument("encoding needs at least one angle");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(m + 1);
  amps(0) = std::cos(betas[0] / 2.0);
  amps(1) = -std::sin(betas[0] / 2.0);
  qsim::SubspaceState s(m, amps);
  for (int i = 1; i < m; ++i) s.apply_composite(i, i + 1, betas[static_cast<std::size_t>(i)]);
  return s.amplitudes().real();
}

Matrix extraction_block(std::span<const double> alphas) {
  const Eigen::Index m = static_cast<Eigen::Index>(alphas.size());
  if (m < 1) throw std::invalid_argument("extraction needs at least one angle");
  Matrix block = Matrix::Identity(m + 2, m + 2);
  for (Eigen::Index i = 1; i <= m; ++i) {
    const Eigen::Matrix3d g = qsim::composite_block(alphas[static_cast<std::size_t>(i - 1)]).real();
    const Eigen::Index idx[3] = {0, i, i + 1};
    Matrix rows(3, m + 2);
    for (int r = 0; r < 3; ++r) rows.row(r) = block.row(idx[r]);
    const Matrix mixed = g * rows;
    for (int r = 0; r < 3; ++r) block.row(idx[r]) = mixed.row(r);
  }
  return block;
}

Vector coefficient_probe(const Matrix& a, std::span<const double> alphas, int m) {
  const Eigen::Index dim = a.rows();
  if (static_cast<Eigen::Index>(alphas.size()) != dim) {
    throw DimensionMismatch("extraction needs one angle per variable");
  }
  if (m < 1 || m > dim + 1) throw std::out_of_range("projection label out of range");
  const Matrix block = extraction_block(alphas);
  return (block.row(m).segment(1, dim) * a).transpose();
}

EncodingSolution solve_encoding(const Vector& b, const SolverOptions& opts) {
  const Eigen::Index m = b.size();
  if (m < 1 || m + 1 > qsim::kMaxQubits) throw std::invalid_argument("unsupported vector length");
  if (!b.allFinite()) throw std::invalid_argument("b entries must be finite");
  const double norm = b.norm();
  if (norm > 1.0 + linsys::kFeasibilityTol) {
    std::ostringstream msg;
    msg << "||b||_2 = " << norm << " > 1; b cannot be encoded as amplitudes";
    throw NormTooLarge(msg.str());
  }

  EncodingSolution sol;
  if (norm == 0.0) {
    sol.betas.assign(static_cast<std::size_t>(m), 0.0);
    sol.branches = {sol.betas};
    return sol;
  }

  std::vector<std::vector<double>> found;
  if (m == 2) {
    for (auto& cand : encoding_closed_form(b)) {
      if (encoding_residual(b, cand) <= opts.tolerance) found.push_back(std::move(cand));
    }
  }
  if (found.empty()) {
    Vector target(m + 1);
    target(0) = std::sqrt(std::max(0.0, 1.0 - b.squaredNorm()));
    target.tail(m) = b;
    const nlsolve::Residual f = [&target](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return encoding_amplitudes(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))) - target;
    };
    found = multistart(f, m, opts, kEncodingStream);
  }
  for (auto& cand : found) cand = canonical_betas(std::move(cand));
  sol.branches = dedupe(std::move(found), opts.dedupe, true);
  if (sol.branches.empty()) {
    throw NoConvergence("encoding angles not found after " + std::to_string(opts.restarts) +
                        " restarts");
  }
  sol.betas = sol.branches.front();
  sol.residual = encoding_residual(b, sol.betas);
  return sol;
}

ExtractionSolution solve_extraction(const Matrix& a, Eigen::Index k, const SolverOptions& opts) {
  linsys::validate_matrix(a);
  const Eigen::Index m = a.rows();
  if (k < 1 || k > m) throw std::out_of_range("target variable index out of range");
  if (m + 1 > qsim::kMaxQubits) throw std::invalid_argument("system too large for the simulator");
  const double r = linsys::inverse(a).row(k - 1).norm();
  if (r > 1.0 + linsys::kFeasibilityTol) {
    std::ostringstream msg;
    msg << "row " << k << " of A^-1 has norm " << r << " > 1; |D| = 1 is unreachable";
    throw InfeasibleEmbedding(msg.str());
  }

  std::vector<std::vector<double>> found;
  if (m == 2) {
    for (auto& cand : extraction_closed_form(a, k)) {
      if (extraction_residual(a, k, cand) <= opts.tolerance) found.push_back(std::move(cand));
    }
  }
  if (found.empty()) {
    const Vector target = Vector::Unit(m, k - 1);
    const nlsolve::Residual f = [&a, &target, m](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return coefficient_probe(a, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                               static_cast<int>(m)) -
             target;
    };
    found = multistart(f, m, opts, kExtractionStream + 16 * static_cast<std::uint64_t>(k));
  }
  for (auto& cand : found) cand = canonical_alphas(std::move(cand));

  ExtractionSolution sol;
  sol.k = k;
  sol.branches = dedupe(std::move(found), opts.dedupe, false);
  if (sol.branches.empty()) {
    throw NoConvergence("extraction angles for x_" + std::to_string(k) + " not found after " +
                        std::to_string(opts.restarts) + " restarts (inconclusive)");
  }
  sol.alphas = sol.branches.front();
  sol.residual = extraction_residual(a, k, sol.alphas);
  return sol;
}

Protocol assemble_protocol(const EncodingSolution& enc, const ExtractionSolution& ext,
                           Eigen::Index m) {
  if (static_cast<Eigen::Index>(enc.betas.size()) != m ||
      static_cast<Eigen::Index>(ext.alphas.size()) != m) {
    throw DimensionMismatch("encoding/extraction angle counts do not match M");
  }
  const int n = static_cast<int>(m) + 1;
  qsim::GateCircuit c = encoding_circuit(n, enc.betas);
  c.append(extraction_circuit(n, ext.alphas));
  return Protocol{std::move(c), enc, ext, static_cast<int>(m)};
}

Protocol build_full_protocol(const linsys::LinearSystem& sys, Eigen::Index k,
                             const SolverOptions& opts) {
  const ExtractionSolution ext = solve_extraction(sys.a(), k, opts);
  const EncodingSolution enc = solve_encoding(sys.b(), opts);
  return assemble_protocol(enc, ext, sys.dim());
}

qsim::StateVector simulate(const Protocol& p) {
  return qsim::run(p.circuit, qsim::StateVector(p.circuit.n_qubits()));
}

}  // namespace qlinsolve::synth
