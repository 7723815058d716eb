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

#include "qlinsolve/embed.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "qlinsolve/errors.hpp"

namespace qlinsolve::embed {

namespace {

constexpr double kNegativePivot = 1e-10;

Vector pad(const Vector& v, Eigen::Index m, Eigen::Index dim) {
  if (v.size() == dim) return v;
  if (v.size() != m) {
    std::ostringstream msg;
    msg << "vector of length " << v.size() << " does not fit an embedding of dimension " << dim;
    throw DimensionMismatch(msg.str());
  }
  Vector out = Vector::Zero(dim);
  out.head(m) = v;
  return out;
}

}  // namespace

Matrix semidefinite_cholesky(const Matrix& s) {
  const Eigen::Index n = s.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = s(j, j) - l.row(j).head(j).squaredNorm();
    if (d < -kNegativePivot) {
      throw InfeasibleEmbedding("completion block is not positive semidefinite (pivot " +
                                std::to_string(d) + ")");
    }
    if (d <= 0.0) continue;
    const double pivot = std::sqrt(d);
    l(j, j) = pivot;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (s(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / pivot;
    }
  }
  return l;
}

Matrix complete_orthonormal(const Matrix& rows, const std::vector<Eigen::Index>& candidate_order,
                            double skip_below) {
  const Eigen::Index n = rows.cols();
  Matrix u(n, n);
  Eigen::Index filled = rows.rows();
  u.topRows(filled) = rows;
  for (Eigen::Index c : candidate_order) {
    if (filled == n) break;
    Vector v = Vector::Unit(n, c);
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index r = 0; r < filled; ++r) {
        v -= u.row(r).dot(v) * u.row(r).transpose();
      }
    }
    const double norm = v.norm();
    if (norm < skip_below) continue;
    u.row(filled++) = v.transpose() / norm;
  }
  if (filled != n) {
    throw GramSchmidtDegenerate("Gram-Schmidt completion produced " + std::to_string(filled) +
                                " of " + std::to_string(n) + " rows");
  }
  return u;
}

FullEmbedding embed_full(const Matrix& a) {
  const Matrix inv = linsys::inverse(a);
  const Eigen::Index m = a.rows();
  const Vector rows = inv.rowwise().norm();
  const Vector cols = inv.colwise().norm().transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (rows(i) > 1.0 + linsys::kFeasibilityTol || cols(i) > 1.0 + linsys::kFeasibilityTol) {
      std::ostringstream msg;
      msg << "A^-1 row/column " << i + 1 << " has norm " << std::max(rows(i), cols(i)) << " > 1";
      throw InfeasibleEmbedding(msg.str());
    }
  }
  const double spectral = Eigen::JacobiSVD<Matrix>(inv).singularValues()(0);
  if (spectral > 1.0 + linsys::kFeasibilityTol) {
    std::ostringstream msg;
    msg << "||A^-1||_2 = " << spectral << " > 1; no orthogonal matrix has A^-1 as a block";
    throw InfeasibleEmbedding(msg.str());
  }

  const Matrix s = Matrix::Identity(m, m) - inv * inv.transpose();
  Matrix leading(m, 2 * m);
  leading.leftCols(m) = inv;
  leading.rightCols(m) = semidefinite_cholesky(0.5 * (s + s.transpose()));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(2 * m));
  std::iota(order.begin(), order.begin() + m, m);
  std::iota(order.begin() + m, order.end(), 0);
  return FullEmbedding{m, complete_orthonormal(leading, order)};
}

ReducedEmbedding embed_reduced(const Matrix& a, Eigen::Index k) {
  const Eigen::Index m = a.rows();
  if (k < 1 || k > m) throw std::out_of_range("target variable index out of range");
  const Matrix inv = linsys::inverse(a);
  const double r = inv.row(k - 1).norm();
  if (r > 1.0 + linsys::kFeasibilityTol) {
    std::ostringstream msg;
    msg << "row " << k << " of A^-1 has norm " << r << " > 1";
    throw InfeasibleEmbedding(msg.str());
  }
  Matrix first(1, m + 1);
  first.leftCols(m) = inv.row(k - 1);
  first(0, m) = std::sqrt(std::max(0.0, 1.0 - r * r));
  // Renormalize the boundary case r slightly above 1.
  first /= first.norm();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m + 1));
  std::iota(order.begin(), order.end(), 0);
  return ReducedEmbedding{k, complete_orthonormal(first, order)};
}

Vector apply_embedding(const FullEmbedding& e, const Vector& v) {
  return e.u * pad(v, e.m, e.dim());
}

Vector apply_embedding(const ReducedEmbedding& e, const Vector& v) {
  return e.u * pad(v, e.dim() - 1, e.dim());
}

double orthogonality_residual(const Matrix& u) {
  return (u * u.transpose() - Matrix::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff();
}

}  // namespace qlinsolve::embed
