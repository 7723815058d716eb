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
#include <vector>

namespace qlinsolve::linsys {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr Eigen::Index kMaxDim = 16;

// Slack on every "<= 1" norm test so that exact-boundary inputs (||b|| = 1,
// a unit row of A^-1) count as feasible.
inline constexpr double kFeasibilityTol = 1e-12;

// Throws std::invalid_argument unless `a` is square, 1 <= dim <= kMaxDim and
// all entries are finite.
void validate_matrix(const Matrix& a);

// A x = b with a non-singular square A. Immutable after construction.
class LinearSystem {
 public:
  // Throws std::invalid_argument, DimensionMismatch or SingularMatrix.
  LinearSystem(Matrix a, Vector b);

  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  Eigen::Index dim() const { return a_.rows(); }

 private:
  Matrix a_;
  Vector b_;
};

// LU with partial pivoting.
double determinant(const Matrix& a);

// Determinant of `a` with row `row` and column `col` deleted (0-based).
// The minor of a 1x1 matrix is 1.
double minor(const Matrix& a, Eigen::Index row, Eigen::Index col);

// |det A| <= 1e-10 * (max |A_ij|)^M.
double singularity_threshold(const Matrix& a);
bool is_singular(const Matrix& a);

// Throws SingularMatrix.
Matrix inverse(const Matrix& a);

Vector classical_solve(const LinearSystem& sys);

// Euclidean norms of the rows (r_k0) and columns (r_0j) of A^-1.
Vector inverse_row_norms(const Matrix& a);
Vector inverse_col_norms(const Matrix& a);

struct FeasibilityReport {
  Vector row_norms;
  Vector col_norms;
  double b_norm = 0.0;
  std::vector<bool> feasible_rows;
  std::vector<bool> feasible_cols;
  bool b_encodable = false;

  bool all_rows_feasible() const;
  bool all_cols_feasible() const;
  // 1-based variable index.
  bool row_feasible(Eigen::Index k) const;
};

FeasibilityReport feasibility(const LinearSystem& sys);

}  // namespace qlinsolve::linsys
