// SPDX-License-Identifier: Apache-2.0
// Reference computations written without the library's SVD-based machinery.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "woldkit/linalg.hpp"

namespace oracle {

using woldkit::cplx;
using woldkit::Index;
using woldkit::Mat;

// Rank by Gaussian elimination with partial pivoting.
inline Index gauss_rank(Mat A, double tol = 1e-9) {
  Index rank = 0;
  const Index rows = A.rows(), cols = A.cols();
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index piv = rank;
    for (Index r = rank + 1; r < rows; ++r)
      if (std::abs(A(r, c)) > std::abs(A(piv, c))) piv = r;
    if (std::abs(A(piv, c)) <= tol) continue;
    A.row(piv).swap(A.row(rank));
    for (Index r = rank + 1; r < rows; ++r) {
      const cplx f = A(r, c) / A(rank, c);
      for (Index k = c; k < cols; ++k) A(r, k) -= f * A(rank, k);
    }
    ++rank;
  }
  return rank;
}

// Entrywise Kronecker product.
inline Mat kron(const Mat& A, const Mat& B) {
  Mat K = Mat::Zero(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      for (Index k = 0; k < B.rows(); ++k)
        for (Index l = 0; l < B.cols(); ++l) K(i * B.rows() + k, j * B.cols() + l) = A(i, j) * B(k, l);
  return K;
}

inline Mat identity(Index n) { return Mat::Identity(n, n); }

// Ṽ_n applied one tensor factor at a time: ξ_1 ⊗ ... ⊗ ξ_n ⊗ h ↦ Ṽ(ξ_1 ⊗ Ṽ(... Ṽ(ξ_n ⊗ h))).
inline Mat iterate_naive(const Mat& V, Index d, Index m, int n) {
  Mat cur = identity(m);  // m x (d^k m)
  for (int k = 1; k <= n; ++k) cur = V * kron(identity(d), cur);
  return cur;
}

// Subspace dimension of the column span.
inline Index span_dim(const Mat& A, double tol = 1e-9) { return gauss_rank(A, tol); }

// Standard basis vector.
inline Mat e(Index n, Index i) {
  Mat v = Mat::Zero(n, 1);
  v(i, 0) = 1.0;
  return v;
}

// Columns of the identity at the given indices.
inline Mat coords(Index n, const std::vector<Index>& idx) {
  Mat B = Mat::Zero(n, static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) B(idx[k], static_cast<Index>(k)) = 1.0;
  return B;
}

// True if the column spans of A and B coincide.
inline bool same_span(const Mat& A, const Mat& B, double tol = 1e-8) {
  Mat AB(A.rows(), A.cols() + B.cols());
  AB << A, B;
  const Index ra = span_dim(A, tol), rb = span_dim(B, tol), rab = span_dim(AB, tol);
  return ra == rb && ra == rab;
}

}  // namespace oracle
