// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <limits>

#include "woldkit/errors.hpp"
#include "woldkit/tolerance.hpp"

namespace woldkit {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
using PlainOf = DenseMatrix<typename Derived::Scalar>;

struct RankInfo {
  Index rank = 0;
  double cutoff = 0.0;
  double sigma_max = 0.0;
  bool near_cutoff = false;  // some singular value within a factor 10 of the cutoff
};

template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& A) {
  if (A.size() == 0) return Eigen::VectorXd();
  PlainOf<Derived> M = A;
  return Eigen::JacobiSVD<PlainOf<Derived>>(M).singularValues();
}

// Cutoff is tau_rank * max(rows, cols) * max(sigma_max, scale_hint). The hint lets
// callers supply a norm bound for products whose exact value may be zero.
inline RankInfo rank_from_singular_values(const Eigen::VectorXd& s, Index rows, Index cols,
                                          const TolerancePolicy& pol, double scale_hint = 0.0) {
  RankInfo info;
  info.sigma_max = s.size() ? s(0) : 0.0;
  double scale = std::max(info.sigma_max, scale_hint);
  info.cutoff = pol.rank * static_cast<double>(std::max(rows, cols)) * scale;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > info.cutoff) ++info.rank;
    if (info.cutoff > 0 && s(i) > info.cutoff / 10 && s(i) <= info.cutoff * 10) info.near_cutoff = true;
  }
  return info;
}

template <typename Derived>
RankInfo rank_info(const Eigen::MatrixBase<Derived>& A, const TolerancePolicy& pol,
                   double scale_hint = 0.0) {
  return rank_from_singular_values(singular_values(A), A.rows(), A.cols(), pol, scale_hint);
}

template <typename Derived>
double opnorm(const Eigen::MatrixBase<Derived>& A) {
  auto s = singular_values(A);
  return s.size() ? s(0) : 0.0;
}

template <typename Derived>
PlainOf<Derived> pinv(const Eigen::MatrixBase<Derived>& A, const TolerancePolicy& pol) {
  using M = PlainOf<Derived>;
  if (A.size() == 0) return M::Zero(A.cols(), A.rows());
  M a = A;
  Eigen::JacobiSVD<M> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RankInfo info = rank_from_singular_values(svd.singularValues(), a.rows(), a.cols(), pol);
  const Index r = info.rank;
  if (r == 0) return M::Zero(a.cols(), a.rows());
  Eigen::VectorXd inv = svd.singularValues().head(r).cwiseInverse();
  return svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).adjoint();
}

// Smallest singular value above the cutoff; +infinity marks the zero matrix.
template <typename Derived>
double reduced_min_modulus(const Eigen::MatrixBase<Derived>& A, const TolerancePolicy& pol,
                           double scale_hint = 0.0) {
  auto s = singular_values(A);
  RankInfo info = rank_from_singular_values(s, A.rows(), A.cols(), pol, scale_hint);
  if (info.rank == 0) return std::numeric_limits<double>::infinity();
  return s(info.rank - 1);
}

template <typename Derived>
PlainOf<Derived> hermitian_part(const Eigen::MatrixBase<Derived>& A) {
  PlainOf<Derived> h = (A + A.adjoint()) / 2.0;
  return h;
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<PlainOf<Derived>> es(hermitian_part(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <typename Derived>
double max_eigenvalue(const Eigen::MatrixBase<Derived>& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<PlainOf<Derived>> es(hermitian_part(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

// Operator inequality A >= 0 at slack tau_psd * scale.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& A, const TolerancePolicy& pol, double scale = 1.0) {
  return min_eigenvalue(A) >= -pol.psd * std::max(1.0, scale);
}

template <typename Derived>
PlainOf<Derived> psd_sqrt(const Eigen::MatrixBase<Derived>& A, const TolerancePolicy& pol) {
  using M = PlainOf<Derived>;
  if (A.rows() != A.cols()) raise(ErrorKind::DimensionMismatch, "psd_sqrt needs a square matrix");
  if (A.size() == 0) return M(0, 0);
  const double scale = std::max(1.0, opnorm(A));
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > pol.orth * scale)
    raise(ErrorKind::NotPSD, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<M> es(hermitian_part(A));
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam(0) < -pol.psd * scale)
    raise(ErrorKind::NotPSD, "minimum eigenvalue " + std::to_string(lam(0)));
  Eigen::VectorXd root = lam.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

// kron(I_copies, A) as an explicit block diagonal.
template <typename Derived>
PlainOf<Derived> block_repeat(Index copies, const Eigen::MatrixBase<Derived>& A) {
  PlainOf<Derived> out = PlainOf<Derived>::Zero(copies * A.rows(), copies * A.cols());
  for (Index j = 0; j < copies; ++j) out.block(j * A.rows(), j * A.cols(), A.rows(), A.cols()) = A;
  return out;
}

template <typename DA, typename DB>
PlainOf<DA> kron(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  PlainOf<DA> out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& A) {
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i)
      if (!std::isfinite(std::real(A(i, j))) || !std::isfinite(std::imag(A(i, j)))) return false;
  return true;
}

// Saturates at the Index maximum instead of overflowing.
inline Index ipow(Index base, Index exp) {
  Index r = 1;
  for (Index i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<Index>::max() / base) return std::numeric_limits<Index>::max();
    r *= base;
  }
  return r;
}

}  // namespace woldkit
