// SPDX-License-Identifier: Apache-2.0
#include "woldkit/structure.hpp"

#include <algorithm>
#include <cmath>

namespace woldkit {

namespace {

// First k such that R_k = R_{k+1} = R_{k+2} = R_{k+3}, or 0.
int find_stable(const std::vector<Subspace>& r, const TolerancePolicy& pol) {
  for (std::size_t k = 0; k + 3 < r.size(); ++k) {
    if (equal(r[k], r[k + 1], pol) && equal(r[k + 1], r[k + 2], pol) && equal(r[k + 2], r[k + 3], pol))
      return static_cast<int>(k) + 1;
  }
  return 0;
}

Subspace range_with_info(const Mat& A, const TolerancePolicy& pol, double hint, bool* near) {
  if (A.size() == 0) return Subspace::zero(A.rows());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  RankInfo info = rank_from_singular_values(svd.singularValues(), A.rows(), A.cols(), pol, hint);
  if (near) *near = info.near_cutoff;
  return Subspace::from_orthonormal(svd.matrixU().leftCols(info.rank));
}

}  // namespace

RangeChain range_chain(const Representation& rep, const TolerancePolicy& pol, int min_steps) {
  RangeChain c;
  const double vn = opnorm(rep.V);
  const int max_n = budget_depth(rep.d, rep.m, pol);
  if (min_steps > max_n) require_budget(rep.d, min_steps, rep.m, pol, "range chain horizon");
  Mat Vn = rep.V;
  for (int n = 1;; ++n) {
    if (n > max_n) {
      if (c.stabilized_at == 0) require_budget(rep.d, n, rep.m, pol, "generalized range stabilization");
      break;
    }
    if (n > 1) Vn = compose_after(Vn, rep.d, rep.m, rep.V);
    bool near = false;
    c.ranges.push_back(range_with_info(Vn, pol, std::pow(vn, n), &near));
    c.near_cutoff.push_back(near);
    if (c.stabilized_at == 0) c.stabilized_at = find_stable(c.ranges, pol);
    if (c.stabilized_at != 0 && n >= min_steps) break;
  }
  return c;
}

Subspace generalized_range(const Representation& rep, const TolerancePolicy& pol) {
  return range_chain(rep, pol).limit();
}

Subspace algebraic_core(const Representation& rep, const TolerancePolicy& pol) {
  std::vector<Subspace> k{Subspace::full(rep.m)};
  const double vn = opnorm(rep.V);
  int stable = 0;
  for (Index it = 0; it < rep.m + 8 && stable == 0; ++it) {
    const Subspace& cur = k.back();
    Mat img = rep.V * block_repeat(rep.d, cur.basis());
    k.push_back(range(img, pol, vn));
    stable = find_stable(k, pol);
  }
  if (stable == 0) raise(ErrorKind::IdentityViolated, "algebraic core iteration did not stabilize");
  Subspace core = k[static_cast<std::size_t>(stable) - 1];
  Subspace fixed = range(Mat(rep.V * block_repeat(rep.d, core.basis())), pol, vn);
  if (!equal(fixed, core, pol)) raise(ErrorKind::IdentityViolated, "Ṽ(E ⊗ K) != K for the computed core");
  if (!equal(core, generalized_range(rep, pol), pol))
    raise(ErrorKind::IdentityViolated, "algebraic core differs from the generalized range");
  return core;
}

int default_horizon(const Representation& rep, const RangeChain& chain, const TolerancePolicy& pol) {
  int h = std::max(8, chain.stabilized_at + 4);
  return std::min(h, budget_depth(rep.d, rep.m, pol));
}

int default_horizon(const Representation& rep, const TolerancePolicy& pol) {
  return default_horizon(rep, range_chain(rep, pol), pol);
}

Subspace interior_kernel(const Representation& rep, const TolerancePolicy& pol) {
  const Index n = rep.cols();
  std::vector<bool> cut(static_cast<std::size_t>(n), false);
  for (Index c : rep.boundary) cut[static_cast<std::size_t>(c)] = true;
  std::vector<Index> keep;
  for (Index c = 0; c < n; ++c)
    if (!cut[static_cast<std::size_t>(c)]) keep.push_back(c);
  Mat Vi(rep.m, static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) Vi.col(static_cast<Index>(j)) = rep.V.col(keep[j]);
  Subspace k = kernel(Vi, pol);
  Mat B = Mat::Zero(n, k.dim());
  for (std::size_t j = 0; j < keep.size(); ++j) B.row(keep[j]) = k.basis().row(static_cast<Index>(j));
  return Subspace::from_orthonormal(B);
}

RegularityReport is_regular(const Representation& rep, const TolerancePolicy& pol, int horizon) {
  RegularityReport r;
  r.gamma = reduced_min_modulus(rep.V, pol);
  RangeChain chain = range_chain(rep, pol, horizon);
  r.stabilized_at = chain.stabilized_at;
  r.horizon = horizon > 0 ? horizon : default_horizon(rep, chain, pol);
  if (static_cast<int>(chain.ranges.size()) < r.horizon) chain = range_chain(rep, pol, r.horizon);

  const Subspace ker = kernel(rep.V, pol);
  r.kernel_residual = containment_residual(ker, lift(rep.d, chain.limit()));
  r.kernel_inclusion_holds = r.kernel_residual <= pol.sub;
  bool all = true;
  for (int m = 1; m <= r.horizon; ++m) {
    ConditionWitness w;
    w.m = m;
    w.residual = containment_residual(ker, lift(rep.d, chain.at(m)));
    w.holds = w.residual <= pol.sub;
    all = all && w.holds;
    r.per_m.push_back(w);
  }
  r.anomaly = all != r.kernel_inclusion_holds;

  r.boundary = rep.has_boundary();
  if (!r.boundary) {
    r.interior_holds = r.kernel_inclusion_holds;
    r.interior_depth = r.horizon;
  } else {
    const Subspace ik = interior_kernel(rep, pol);
    r.interior_depth = rep.safe_depth > 0 ? std::min(r.horizon, rep.safe_depth) : r.horizon;
    r.interior_holds = true;
    for (int m = 1; m <= r.interior_depth; ++m)
      if (!contains(ik, lift(rep.d, chain.at(m)), pol)) r.interior_holds = false;
  }
  return r;
}

double generalized_inverse_residual(const Representation& rep, const Mat& S) {
  const Mat& V = rep.V;
  double r1 = opnorm(V * S * V - V);
  double r2 = opnorm(S * V * S - S);
  return std::max(r1, r2);
}

namespace {
double ginv_tolerance(const Representation& rep, const Mat& S) {
  double a = std::max(1.0, opnorm(rep.V));
  double b = std::max(1.0, opnorm(S));
  return 1e-9 * a * a * b * b;
}
}  // namespace

GenInverse validate_generalized_inverse(const Representation& rep, const Mat& S, const TolerancePolicy&) {
  if (S.rows() != rep.cols() || S.cols() != rep.m)
    raise(ErrorKind::DimensionMismatch, "generalized inverse must be (d m) x m");
  double res = generalized_inverse_residual(rep, S);
  if (!(res <= ginv_tolerance(rep, S)))
    raise(ErrorKind::IdentityViolated, "generalized inverse residual " + std::to_string(res));
  return GenInverse{S, rep.d, rep.m};
}

GenInverse make_generalized_inverse(const Representation& rep, const Mat& Y, const TolerancePolicy& pol) {
  if (Y.rows() != rep.cols() || Y.cols() != rep.m) raise(ErrorKind::DimensionMismatch, "Y must be (d m) x m");
  Mat Vd = pinv(rep.V, pol);
  Mat S = Vd + (Mat::Identity(rep.cols(), rep.cols()) - Vd * rep.V) * Y * (rep.V * Vd);
  return validate_generalized_inverse(rep, S, pol);
}

namespace {

// (I_{E^{⊗k}} ⊗ S) X for X with row blocks of size m.
Mat apply_lifted(const Mat& S, Index m, const Mat& X) {
  const Index blocks = X.rows() / m;
  Mat out(blocks * S.rows(), X.cols());
  for (Index j = 0; j < blocks; ++j) out.middleRows(j * S.rows(), S.rows()) = S * X.middleRows(j * m, m);
  return out;
}

}  // namespace

Mat iterate_s(const GenInverse& S, int n, const TolerancePolicy& pol) {
  if (n < 0) raise(ErrorKind::InvalidParams, "iterate_s needs n >= 0");
  if (n == 0) return Mat::Identity(S.m, S.m);
  require_budget(S.d, n, S.m, pol, "iterate_s");
  Mat out = S.S;
  for (int k = 2; k <= n; ++k) out = apply_lifted(S.S, S.m, out);
#ifndef NDEBUG
  if (n >= 2) {
    // (I_E ⊗ S^(n-1)) S must give the same product.
    Mat prev = S.S;
    for (int k = 2; k <= n - 1; ++k) prev = apply_lifted(S.S, S.m, prev);
    Mat other(out.rows(), S.m);
    for (Index i = 0; i < S.d; ++i)
      other.middleRows(i * prev.rows(), prev.rows()) = prev * S.S.middleRows(i * S.m, S.m);
    double scale = std::pow(std::max(1.0, opnorm(S.S)), n);
    if ((other - out).norm() > 1e-9 * scale * std::sqrt(double(out.size())))
      raise(ErrorKind::IdentityViolated, "S^(n) composition orders disagree");
  }
#endif
  return out;
}

BiregularityReport is_biregular(const Representation& rep, const GenInverse& S, int horizon,
                                const TolerancePolicy& pol) {
  RegularityReport reg = is_regular(rep, pol);
  if (!reg.regular()) raise(ErrorKind::NotRegular, "bi-regularity needs a regular representation");
  BiregularityReport b;
  int h = horizon > 0 ? horizon : reg.horizon;
  h = std::min(h, budget_depth(rep.d, rep.m, pol));
  b.boundary = rep.has_boundary();
  b.depth = (b.boundary && rep.safe_depth > 0) ? std::min(h, rep.safe_depth) : h;
  const Subspace kerS = kernel(S.S, pol);
  const double sn = opnorm(S.S);
  Mat Sk = S.S;
  for (int k = 1; k <= b.depth; ++k) {
    if (k > 1) Sk = apply_lifted(S.S, S.m, Sk);
    Subspace lifted = lift(ipow(rep.d, k), kerS);
    Subspace rk = range(Sk, pol, std::pow(sn, k));
    ConditionWitness w;
    w.m = k;
    w.residual = containment_residual(lifted, rk);
    w.holds = w.residual <= pol.sub;
    b.holds = b.holds && w.holds;
    b.per_m.push_back(w);
  }
  return b;
}

Mat dagger_iterate(const Representation& rep, int n, const TolerancePolicy& pol) {
  return iterate_s(GenInverse{pinv(rep.V, pol), rep.d, rep.m}, n, pol);
}

bool is_n_dagger(const Representation& rep, int n, const TolerancePolicy& pol) {
  Mat P = pinv(iterate_v(rep, n, pol), pol);
  Mat D = dagger_iterate(rep, n, pol);
  return opnorm(D - P) <= 1e-8 * std::max(1.0, opnorm(P));
}

bool is_hyper_dagger(const Representation& rep, int horizon, const TolerancePolicy& pol) {
  if (horizon <= 0) horizon = default_horizon(rep, pol);
  for (int n = 1; n <= horizon; ++n)
    if (!is_n_dagger(rep, n, pol)) return false;
  return true;
}

bool r_infty_fixedpoint_check(const Representation& rep, const GenInverse& S, int horizon,
                              const TolerancePolicy& pol) {
  RegularityReport reg = is_regular(rep, pol);
  if (!reg.regular()) raise(ErrorKind::NotRegular, "fixed-point characterization needs regularity");
  const Subspace rinf = generalized_range(rep, pol);
  const int h = horizon > 0 ? horizon : reg.horizon;
  require_budget(rep.d, h, rep.m, pol, "fixed-point horizon");
  Subspace fixed = Subspace::full(rep.m);
  Mat Vn = rep.V, Sn = S.S;
  const Mat I = Mat::Identity(rep.m, rep.m);
  bool basis_fixed = true;
  for (int n = 1; n <= h; ++n) {
    if (n > 1) {
      Vn = compose_after(Vn, rep.d, rep.m, rep.V);
      Sn = apply_lifted(S.S, S.m, Sn);
    }
    Mat T = Vn * Sn;
    const double scale = std::max(1.0, opnorm(Vn) * opnorm(Sn));
    if (!rinf.is_zero() && (T * rinf.basis() - rinf.basis()).colwise().norm().maxCoeff() > pol.sub * scale)
      basis_fixed = false;
    fixed = intersect(fixed, kernel(Mat(I - T), pol, scale), pol);
  }
  return basis_fixed && equal(fixed, rinf, pol);
}

bool s_invariance_check(const Representation& rep, const GenInverse& S, const TolerancePolicy& pol) {
  const Subspace rinf = generalized_range(rep, pol);
  return contains(image(S.S, rinf, pol), lift(rep.d, rinf), pol);
}

KernelIntersection kernel_intersection_identity(const Representation& rep, int a, int b,
                                                const TolerancePolicy& pol) {
  if (a < 1 || b < 1) raise(ErrorKind::InvalidParams, "kernel intersection identity needs a, b >= 1");
  const double vn = opnorm(rep.V);
  Mat Va = iterate_v(rep, a, pol);
  Mat Vb = iterate_v(rep, b, pol);
  Mat Vab = iterate_v(rep, a + b, pol);
  Mat L = tensor_lift(b, Va, rep.d, pol);
  KernelIntersection k;
  k.lhs = image(L, kernel(Vab, pol, std::pow(vn, a + b)), pol);
  k.rhs = intersect(kernel(Vb, pol, std::pow(vn, b)), range(L, pol, std::pow(vn, a)), pol);
  k.equal = equal(k.lhs, k.rhs, pol);
  return k;
}

HatMap hat_map_check(const Representation& rep, int n, const TolerancePolicy& pol) {
  if (n < 1) raise(ErrorKind::InvalidParams, "hat map needs n >= 1");
  const double vn = opnorm(rep.V);
  auto seq = iterate_v_sequence(rep, n + 1, pol);
  const Mat& Vn = seq[static_cast<std::size_t>(n) - 1];
  Subspace dom = lift(ipow(rep.d, n), complement(range(rep.V, pol, vn)));
  Subspace cod = intersect(range(Vn, pol, std::pow(vn, n)),
                           complement(range(seq.back(), pol, std::pow(vn, n + 1))), pol);
  HatMap h;
  h.domain_dim = dom.dim();
  h.codomain_dim = cod.dim();
  if (h.domain_dim != h.codomain_dim) return h;
  if (h.domain_dim == 0) {
    h.invertible = true;
    return h;
  }
  Mat M = cod.basis().adjoint() * Vn * dom.basis();
  h.invertible = rank_info(M, pol, std::pow(vn, n)).rank == h.domain_dim;
  return h;
}

}  // namespace woldkit
