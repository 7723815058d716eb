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

#include "qlinsolve/linsys.hpp"

namespace qlinsolve::embed {

using linsys::Matrix;
using linsys::Vector;

// 2M x 2M orthogonal matrix with A^-1 as its top-left M x M block.
struct FullEmbedding {
  Eigen::Index m = 0;
  Matrix u;

  Eigen::Index dim() const { return u.rows(); }
  auto inverse_block() const { return u.topLeftCorner(m, m); }
};

// (M+1) x (M+1) orthogonal matrix whose first row is (row k of A^-1, w),
// w = +sqrt(1 - r_k0^2).
struct ReducedEmbedding {
  Eigen::Index k = 0;  // 1-based target variable
  Matrix u;

  Eigen::Index dim() const { return u.rows(); }
};

// Cholesky factor L (lower) with S = L L^T for a symmetric positive
// semidefinite S. Pivots that come out <= 0 through rounding zero their column.
// Throws InfeasibleEmbedding when a pivot is clearly negative (S not PSD).
Matrix semidefinite_cholesky(const Matrix& s);

// Extends `rows` (orthonormal, p x n) to an n x n orthogonal matrix. Candidate
// directions are unit vectors e_c for c in `candidate_order` (0-based), taken
// in order; a candidate whose residual after orthogonalization is below
// `skip_below` is dropped. Throws GramSchmidtDegenerate when the candidates
// run out.
Matrix complete_orthonormal(const Matrix& rows, const std::vector<Eigen::Index>& candidate_order,
                            double skip_below = 1e-8);

// Throws SingularMatrix, InfeasibleEmbedding (some row/column norm of A^-1
// exceeds 1, or ||A^-1||_2 > 1) or GramSchmidtDegenerate.
FullEmbedding embed_full(const Matrix& a);

// k is 1-based. Throws SingularMatrix, InfeasibleEmbedding (r_k0 > 1) or
// GramSchmidtDegenerate.
ReducedEmbedding embed_reduced(const Matrix& a, Eigen::Index k);

// u * (v, 0...). `v` may have length M (zero-padded) or the full dimension.
Vector apply_embedding(const FullEmbedding& e, const Vector& v);
Vector apply_embedding(const ReducedEmbedding& e, const Vector& v);

// max |U U^T - I|.
double orthogonality_residual(const Matrix& u);

}  // namespace qlinsolve::embed
