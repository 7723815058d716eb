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

#include "qlinsolve/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qlinsolve/errors.hpp"

namespace qlinsolve::linsys {

void validate_matrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("matrix must be square");
  }
  if (a.rows() < 1 || a.rows() > kMaxDim) {
    throw std::invalid_argument("matrix dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

LinearSystem::LinearSystem(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  validate_matrix(a_);
  if (b_.size() != a_.rows()) {
    std::ostringstream msg;
    msg << "b has length " << b_.size() << " but A is " << a_.rows() << "x" << a_.cols();
    throw DimensionMismatch(msg.str());
  }
  if (!b_.allFinite()) {
    throw std::invalid_argument("b entries must be finite");
  }
  if (is_singular(a_)) {
    throw SingularMatrix("A is singular: |det A| = " + std::to_string(std::abs(determinant(a_))));
  }
}

double determinant(const Matrix& a) {
  validate_matrix(a);
  return a.partialPivLu().determinant();
}

double minor(const Matrix& a, Eigen::Index row, Eigen::Index col) {
  validate_matrix(a);
  const Eigen::Index m = a.rows();
  if (row < 0 || row >= m || col < 0 || col >= m) {
    throw std::out_of_range("minor index out of range");
  }
  if (m == 1) return 1.0;
  Matrix sub(m - 1, m - 1);
  for (Eigen::Index i = 0, si = 0; i < m; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, sj = 0; j < m; ++j) {
      if (j == col) continue;
      sub(si, sj++) = a(i, j);
    }
    ++si;
  }
  return sub.partialPivLu().determinant();
}

double singularity_threshold(const Matrix& a) {
  validate_matrix(a);
  const double scale = a.cwiseAbs().maxCoeff();
  return 1e-10 * std::pow(scale, static_cast<double>(a.rows()));
}

bool is_singular(const Matrix& a) {
  const double det = determinant(a);
  return !(std::abs(det) > singularity_threshold(a));
}

Matrix inverse(const Matrix& a) {
  if (is_singular(a)) {
    throw SingularMatrix("A is singular: |det A| = " + std::to_string(std::abs(determinant(a))));
  }
  return a.partialPivLu().inverse();
}

Vector classical_solve(const LinearSystem& sys) {
  const auto lu = sys.a().partialPivLu();
  Vector x = lu.solve(sys.b());
  // One step of iterative refinement keeps the residual at the rounding floor
  // for the moderately conditioned matrices the embeddings admit.
  const Vector r = sys.b() - sys.a() * x;
  x += lu.solve(r);
  return x;
}

Vector inverse_row_norms(const Matrix& a) { return inverse(a).rowwise().norm(); }

Vector inverse_col_norms(const Matrix& a) { return inverse(a).colwise().norm().transpose(); }

bool FeasibilityReport::all_rows_feasible() const {
  return std::all_of(feasible_rows.begin(), feasible_rows.end(), [](bool f) { return f; });
}

bool FeasibilityReport::all_cols_feasible() const {
  return std::all_of(feasible_cols.begin(), feasible_cols.end(), [](bool f) { return f; });
}

bool FeasibilityReport::row_feasible(Eigen::Index k) const {
  if (k < 1 || k > static_cast<Eigen::Index>(feasible_rows.size())) {
    throw std::out_of_range("variable index out of range");
  }
  return feasible_rows[static_cast<std::size_t>(k - 1)];
}

FeasibilityReport feasibility(const LinearSystem& sys) {
  const Matrix inv = inverse(sys.a());
  FeasibilityReport rep;
  rep.row_norms = inv.rowwise().norm();
  rep.col_norms = inv.colwise().norm().transpose();
  rep.b_norm = sys.b().norm();
  for (Eigen::Index i = 0; i < sys.dim(); ++i) {
    rep.feasible_rows.push_back(rep.row_norms(i) <= 1.0 + kFeasibilityTol);
    rep.feasible_cols.push_back(rep.col_norms(i) <= 1.0 + kFeasibilityTol);
  }
  rep.b_encodable = rep.b_norm <= 1.0 + kFeasibilityTol;
  return rep;
}

}  // namespace qlinsolve::linsys
