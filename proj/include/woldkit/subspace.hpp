// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "woldkit/linalg.hpp"

namespace woldkit {

// A closed subspace of C^n held as an orthonormal basis; zero columns is {0}.
template <typename Scalar>
class BasicSubspace {
 public:
  using Matrix = DenseMatrix<Scalar>;

  BasicSubspace() = default;
  explicit BasicSubspace(Index ambient) : ambient_(ambient), basis_(ambient, 0) {}

  // Trusts that the columns are orthonormal.
  static BasicSubspace from_orthonormal(Matrix basis) {
    BasicSubspace s(basis.rows());
    s.basis_ = std::move(basis);
    return s;
  }
  static BasicSubspace zero(Index ambient) { return BasicSubspace(ambient); }
  static BasicSubspace full(Index ambient) {
    return from_orthonormal(Matrix::Identity(ambient, ambient));
  }

  Index ambient_dim() const noexcept { return ambient_; }
  Index dim() const noexcept { return basis_.cols(); }
  bool is_zero() const noexcept { return basis_.cols() == 0; }
  const Matrix& basis() const noexcept { return basis_; }

  Matrix projector() const { return basis_ * basis_.adjoint(); }

 private:
  Index ambient_ = 0;
  Matrix basis_;
};

using Subspace = BasicSubspace<cplx>;

namespace detail {
template <typename Scalar>
void same_ambient(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b) {
  if (a.ambient_dim() != b.ambient_dim())
    raise(ErrorKind::DimensionMismatch, "ambient dimensions " + std::to_string(a.ambient_dim()) +
                                            " and " + std::to_string(b.ambient_dim()));
}
}  // namespace detail

template <typename Derived>
BasicSubspace<typename Derived::Scalar> range(const Eigen::MatrixBase<Derived>& A,
                                              const TolerancePolicy& pol, double scale_hint = 0.0) {
  using M = PlainOf<Derived>;
  using S = BasicSubspace<typename Derived::Scalar>;
  if (A.size() == 0) return S::zero(A.rows());
  M a = A;
  Eigen::JacobiSVD<M> svd(a, Eigen::ComputeThinU);
  RankInfo info = rank_from_singular_values(svd.singularValues(), a.rows(), a.cols(), pol, scale_hint);
  return S::from_orthonormal(svd.matrixU().leftCols(info.rank));
}

template <typename Scalar>
BasicSubspace<Scalar> complement(const BasicSubspace<Scalar>& S) {
  using M = DenseMatrix<Scalar>;
  const Index n = S.ambient_dim();
  const Index k = S.dim();
  if (k == 0) return BasicSubspace<Scalar>::full(n);
  if (k >= n) return BasicSubspace<Scalar>::zero(n);
  Eigen::HouseholderQR<M> qr(S.basis());
  M Q = qr.householderQ() * M::Identity(n, n);
  return BasicSubspace<Scalar>::from_orthonormal(Q.rightCols(n - k));
}

template <typename Derived>
BasicSubspace<typename Derived::Scalar> kernel(const Eigen::MatrixBase<Derived>& A,
                                               const TolerancePolicy& pol, double scale_hint = 0.0) {
  PlainOf<Derived> adj = A.adjoint();
  return complement(range(adj, pol, scale_hint));
}

// Image of a subspace under A.
template <typename Derived, typename Scalar>
BasicSubspace<Scalar> image(const Eigen::MatrixBase<Derived>& A, const BasicSubspace<Scalar>& S,
                            const TolerancePolicy& pol) {
  if (A.cols() != S.ambient_dim()) raise(ErrorKind::DimensionMismatch, "image: operator/subspace");
  if (S.is_zero()) return BasicSubspace<Scalar>::zero(A.rows());
  return range(A * S.basis(), pol, opnorm(A));
}

// Columnwise residual of basis(a) against b.
template <typename Scalar>
double containment_residual(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b) {
  detail::same_ambient(a, b);
  if (a.is_zero()) return 0.0;
  DenseMatrix<Scalar> r = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  return r.colwise().norm().maxCoeff();
}

// a ⊆ b
template <typename Scalar>
bool contains(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b,
              const TolerancePolicy& pol) {
  return containment_residual(a, b) <= pol.sub;
}

template <typename Scalar>
bool equal(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b, const TolerancePolicy& pol) {
  return a.dim() == b.dim() && contains(a, b, pol) && contains(b, a, pol);
}

template <typename Scalar>
BasicSubspace<Scalar> intersect(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b,
                                const TolerancePolicy& pol) {
  using M = DenseMatrix<Scalar>;
  detail::same_ambient(a, b);
  if (a.is_zero() || b.is_zero()) return BasicSubspace<Scalar>::zero(a.ambient_dim());
  // (I - P_b) restricted to a; its near-null directions are the common ones.
  M r = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  Eigen::JacobiSVD<M> svd(r, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::vector<Index> keep;
  for (Index j = 0; j < a.dim(); ++j) {
    double sj = j < s.size() ? s(j) : 0.0;
    if (sj <= pol.sub) keep.push_back(j);
  }
  M y(a.dim(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) y.col(static_cast<Index>(c)) = svd.matrixV().col(keep[c]);
  return BasicSubspace<Scalar>::from_orthonormal(a.basis() * y);
}

template <typename Scalar>
BasicSubspace<Scalar> sum(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b,
                          const TolerancePolicy& pol) {
  using M = DenseMatrix<Scalar>;
  detail::same_ambient(a, b);
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  M r = b.basis() - a.basis() * (a.basis().adjoint() * b.basis());
  Eigen::JacobiSVD<M> svd(r, Eigen::ComputeThinU);
  Index k = 0;
  while (k < svd.singularValues().size() && svd.singularValues()(k) > pol.sub) ++k;
  if (k == 0) return a;
  M out(a.ambient_dim(), a.dim() + k);
  out << a.basis(), svd.matrixU().leftCols(k);
  // one QR pass removes the residual overlap left by round-off
  Eigen::HouseholderQR<M> qr(out);
  M q = qr.householderQ() * M::Identity(out.rows(), out.cols());
  return BasicSubspace<Scalar>::from_orthonormal(q);
}

template <typename Scalar>
DenseMatrix<Scalar> project(const BasicSubspace<Scalar>& S) {
  return S.projector();
}

// ||P_a P_b||, zero when the subspaces are orthogonal.
template <typename Scalar>
double overlap(const BasicSubspace<Scalar>& a, const BasicSubspace<Scalar>& b) {
  detail::same_ambient(a, b);
  if (a.is_zero() || b.is_zero()) return 0.0;
  return opnorm(a.basis().adjoint() * b.basis());
}

// C^copies ⊗ S inside C^copies ⊗ C^n.
template <typename Scalar>
BasicSubspace<Scalar> lift(Index copies, const BasicSubspace<Scalar>& S) {
  if (copies == 1) return S;
  BasicSubspace<Scalar> out = BasicSubspace<Scalar>::from_orthonormal(block_repeat(copies, S.basis()));
  return out;
}

template <typename Scalar>
double orthonormality_defect(const BasicSubspace<Scalar>& S) {
  if (S.is_zero()) return 0.0;
  return (S.basis().adjoint() * S.basis() - DenseMatrix<Scalar>::Identity(S.dim(), S.dim()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace woldkit
