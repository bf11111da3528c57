// SPDX-License-Identifier: Apache-2.0
#include "woldkit/representation.hpp"

#include <algorithm>
#include <cmath>

namespace woldkit {

Representation::Representation(Index d_, Index m_, Mat v) : d(d_), m(m_), V(std::move(v)) {
  if (d < 1 || m < 1) raise(ErrorKind::ShapeError, "dim_E and dim_H must be positive");
  if (V.rows() != m || V.cols() != d * m)
    raise(ErrorKind::ShapeError, "V must be " + std::to_string(m) + " x " + std::to_string(d * m) +
                                     ", got " + std::to_string(V.rows()) + " x " + std::to_string(V.cols()));
  if (!all_finite(V)) raise(ErrorKind::ParseError, "V has non-finite entries");
}

int budget_depth(Index d, Index m, const TolerancePolicy& pol) {
  int n = 0;
  while (n < 64 && ipow(d, n + 1) <= static_cast<Index>(pol.max_columns) / m) ++n;
  return n;
}

void require_budget(Index d, int n, Index m, const TolerancePolicy& pol, const char* what) {
  Index p = ipow(d, n);
  if (p > static_cast<Index>(pol.max_columns) / std::max<Index>(m, 1) ||
      p * m > static_cast<Index>(pol.max_columns))
    raise(ErrorKind::BudgetExceeded, std::string(what) + ": " + std::to_string(d) + "^" + std::to_string(n) +
                                         " * " + std::to_string(m) + " exceeds " +
                                         std::to_string(pol.max_columns) + " columns");
}

Mat tensor_lift(int k, const Mat& A, Index d, const TolerancePolicy& pol) {
  if (k < 0) raise(ErrorKind::InvalidParams, "tensor_lift needs k >= 0");
  if (k == 0) return A;
  require_budget(d, k, std::max(A.rows(), A.cols()), pol, "tensor_lift");
  return block_repeat(ipow(d, k), A);
}

Mat compose_after(const Mat& Va, Index d, Index m, const Mat& X) {
  // Va is m x (d^a m); each m-column slice of Va is followed by X.
  const Index blocks = Va.cols() / m;
  Mat out(Va.rows(), blocks * X.cols());
  for (Index j = 0; j < blocks; ++j) out.middleCols(j * X.cols(), X.cols()) = Va.middleCols(j * m, m) * X;
  (void)d;
  return out;
}

namespace {

#ifndef NDEBUG
// Ṽ (I_E ⊗ X): the i-th m-column slice of Ṽ acts on the i-th copy of X.
Mat compose_before(const Mat& V, Index d, Index m, const Mat& X) {
  Mat out(V.rows(), d * X.cols());
  for (Index i = 0; i < d; ++i) out.middleCols(i * X.cols(), X.cols()) = V.middleCols(i * m, m) * X;
  return out;
}

void check_orders(const Representation& rep, const Mat& Vprev, const Mat& Vn, int n) {
  Mat other = compose_before(rep.V, rep.d, rep.m, Vprev);
  double scale = std::pow(opnorm(rep.V), n);
  if ((other - Vn).norm() > 1e-10 * std::max(scale, 1e-300) * std::sqrt(double(Vn.size())))
    raise(ErrorKind::IdentityViolated, "iterate_v recursion orders disagree at n=" + std::to_string(n));
}
#endif

}  // namespace

std::vector<Mat> iterate_v_sequence(const Representation& rep, int n_max, const TolerancePolicy& pol) {
  std::vector<Mat> out;
  if (n_max < 1) return out;
  require_budget(rep.d, n_max, rep.m, pol, "iterate_v");
  out.reserve(n_max);
  out.push_back(rep.V);
  for (int n = 2; n <= n_max; ++n) {
    out.push_back(compose_after(out.back(), rep.d, rep.m, rep.V));
#ifndef NDEBUG
    check_orders(rep, out[n - 2], out.back(), n);
#endif
  }
  return out;
}

Mat iterate_v(const Representation& rep, int n, const TolerancePolicy& pol) {
  if (n < 0) raise(ErrorKind::InvalidParams, "iterate_v needs n >= 0");
  if (n == 0) return Mat::Identity(rep.m, rep.m);
  return iterate_v_sequence(rep, n, pol).back();
}

CovarianceReport check_covariance(const Representation& rep) {
  CovarianceReport r;
  if (rep.sigma.size() != rep.phi.size())
    raise(ErrorKind::DimensionMismatch, "sigma and phi generator lists differ in length");
  const double vn = opnorm(rep.V);
  for (const auto& [label, s] : rep.sigma) {
    auto it = rep.phi.find(label);
    if (it == rep.phi.end()) raise(ErrorKind::DimensionMismatch, "phi has no generator '" + label + "'");
    const Mat& f = it->second;
    if (s.rows() != rep.m || s.cols() != rep.m || f.rows() != rep.d || f.cols() != rep.d)
      raise(ErrorKind::DimensionMismatch, "generator '" + label + "' has the wrong shape");
    Mat lhs = rep.V * kron(f, Mat::Identity(rep.m, rep.m));
    double res = opnorm(lhs - s * rep.V);
    r.residuals[label] = res;
    if (res > 1e-9 * vn) r.holds = false;
  }
  return r;
}

Representation block_sum(const Representation& a, const Representation& b) {
  if (a.d != b.d) raise(ErrorKind::DimensionMismatch, "block_sum needs equal dim_E");
  const Index d = a.d, m = a.m + b.m;
  Mat V = Mat::Zero(m, d * m);
  for (Index i = 0; i < d; ++i) {
    V.block(0, i * m, a.m, a.m) = a.V.middleCols(i * a.m, a.m);
    V.block(a.m, i * m + a.m, b.m, b.m) = b.V.middleCols(i * b.m, b.m);
  }
  Representation out(d, m, V);
  for (Index c : a.boundary) out.boundary.push_back((c / a.m) * m + c % a.m);
  for (Index c : b.boundary) out.boundary.push_back((c / b.m) * m + a.m + c % b.m);
  std::sort(out.boundary.begin(), out.boundary.end());
  auto depth = [](int x) { return x == 0 ? 1 << 30 : x; };
  int sd = std::min(depth(a.safe_depth), depth(b.safe_depth));
  out.safe_depth = sd == (1 << 30) ? 0 : sd;
  return out;
}

Subspace coordinate_block(Index ambient, Index offset, Index len) {
  Mat B = Mat::Zero(ambient, len);
  for (Index j = 0; j < len; ++j) B(offset + j, j) = 1.0;
  return Subspace::from_orthonormal(B);
}

}  // namespace woldkit
