// SPDX-License-Identifier: Apache-2.0
#include "woldkit/wold.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace woldkit {

Subspace wandering_space(const Representation& rep, const TolerancePolicy& pol) {
  return kernel(Mat(rep.V.adjoint()), pol);
}

Subspace wandering_dagger(const Representation& rep, const TolerancePolicy& pol) { return kernel(rep.V, pol); }

namespace {

Subspace forward(const Representation& rep, const Subspace& X, const TolerancePolicy& pol) {
  if (X.is_zero()) return Subspace::zero(rep.m);
  return range(Mat(rep.V * block_repeat(rep.d, X.basis())), pol, opnorm(rep.V));
}

bool same_dim_equal(const Subspace& a, const Subspace& b, const TolerancePolicy& pol) {
  return a.dim() == b.dim() && equal(a, b, pol);
}

}  // namespace

std::vector<Subspace> forward_translates(const Representation& rep, const Subspace& S, int n_max,
                                         const TolerancePolicy& pol) {
  if (S.ambient_dim() != rep.m) raise(ErrorKind::DimensionMismatch, "subspace must live in H");
  std::vector<Subspace> out;
  Subspace X = S;
  for (int n = 1; n <= n_max; ++n) {
    X = forward(rep, X, pol);
    out.push_back(X);
  }
  return out;
}

bool is_wandering(const Representation& rep, const Subspace& S, int horizon, const TolerancePolicy& pol) {
  if (horizon <= 0) horizon = default_horizon(rep, pol);
  for (const auto& X : forward_translates(rep, S, horizon, pol))
    if (overlap(S, X) > pol.sub) return false;
  return true;
}

Subspace generated_subspace(const Representation& rep, const Subspace& S, const TolerancePolicy& pol) {
  if (S.ambient_dim() != rep.m) raise(ErrorKind::DimensionMismatch, "subspace must live in H");
  Subspace join = S, X = S;
  int steady = 0;
  for (Index it = 0; it < rep.m + 4 && steady < 2; ++it) {
    X = forward(rep, X, pol);
    Subspace next = sum(join, X, pol);
    steady = same_dim_equal(next, join, pol) ? steady + 1 : 0;
    join = next;
    if (X.is_zero()) break;
  }
  return join;
}

namespace {

double restriction_defects(const Mat& B, const Subspace& target, double* iso, double* co) {
  const Index q = B.cols();
  *iso = q ? opnorm(Mat(B.adjoint() * B - Mat::Identity(q, q))) : 0.0;
  *co = opnorm(Mat(B * B.adjoint() - project(target)));
  return std::max(*iso, *co);
}

}  // namespace

WoldResult wold_decompose(const Representation& rep, const std::vector<double>& d_seq, int horizon,
                          const TolerancePolicy& pol, bool enforce) {
  WoldResult r;
  r.boundary = rep.has_boundary();
  r.regularity = is_regular(rep, pol, horizon);
  r.horizon = r.regularity.horizon;
  r.gamma = gamma(rep, pol);
  auto fail = [&](const std::string& what) {
    if (enforce) raise(ErrorKind::PreconditionFailed, what);
    r.failed_preconditions.push_back(what);
  };
  if (!r.regularity.regular()) fail("regular");
  if (!gamma_at_least_one(rep, pol)) fail("gamma >= 1");
  if (r.failed_preconditions.empty()) {
    r.growth = check_growth(rep, d_seq, growth_horizon(rep, r.horizon), pol);
    if (!r.growth.holds()) fail("growth condition");
  }

  const Index m = rep.m, d = rep.d;
  r.W = wandering_space(rep, pol);
  r.W_dagger = wandering_dagger(rep, pol);
  r.Rinf = generalized_range(rep, pol);
  r.bracketW = generated_subspace(rep, r.W, pol);

  const Mat I = Mat::Identity(m, m);
  const Mat PW = project(r.bracketW), PR = project(r.Rinf);
  r.projector_sum_residual = opnorm(Mat(PW + PR - I));
  r.projector_product_residual = opnorm(Mat(PW * PR));
  r.orthogonal = overlap(r.bracketW, r.Rinf) <= pol.sub;
  {
    Mat both(m, r.bracketW.dim() + r.Rinf.dim());
    both << r.bracketW.basis(), r.Rinf.basis();
    r.spans_H = both.cols() >= m && rank_info(both, pol, 1.0).rank == m;
  }

  const Subspace ER = lift(d, r.Rinf);
  const Mat Vd = pinv(rep.V, pol);
  r.reduces = contains(image(rep.V, ER, pol), r.Rinf, pol) &&
              contains(image(Mat(rep.V.adjoint()), r.Rinf, pol), ER, pol);

  if (r.Rinf.is_zero()) {
    r.dagger_equals_adjoint_on_Rinf = true;
    r.unitary_restriction = true;
    r.isometric_on_Rinf = true;
    r.fully_coisometric_on_Rinf = true;
  } else {
    const Mat& BR = r.Rinf.basis();
    Mat diff = (Vd - rep.V.adjoint()) * BR;
    Mat Vr = rep.V * ER.basis();
    Mat restricted_dagger = ER.basis() * pinv(Vr, pol) * BR;
    double adj = diff.colwise().norm().maxCoeff();
    double rd = (restricted_dagger - Vd * BR).colwise().norm().maxCoeff();
    r.dagger_equals_adjoint_on_Rinf = std::max(adj, rd) <= 1e-8;

    Subspace dom = intersect(ER, complement(r.W_dagger), pol);
    double iso = 0, co = 0;
    r.restriction_residual = restriction_defects(Mat(rep.V * dom.basis()), r.Rinf, &iso, &co);
    r.unitary_restriction = r.restriction_residual <= 1e-8;

    Mat small = BR.adjoint() * Vr;  // Ṽ restricted to E ⊗ R∞, in R∞ coordinates
    const Index k = small.rows();
    r.isometric_on_Rinf = opnorm(Mat(small.adjoint() * small - Mat::Identity(small.cols(), small.cols()))) <= 1e-8;
    r.fully_coisometric_on_Rinf = opnorm(Mat(small * small.adjoint() - Mat::Identity(k, k))) <= 1e-8;
  }

  if (r.regularity.regular()) r.biregular = is_biregular(rep, GenInverse{Vd, d, m}, r.horizon, pol).holds;
  r.hyper_dagger = is_hyper_dagger(rep, std::min(r.horizon, budget_depth(d, m, pol)), pol);
  return r;
}

DualityCheck duality_corollary_check(const Representation& rep, int horizon, const TolerancePolicy& pol) {
  WoldResult w = wold_decompose(rep, {}, horizon, pol, true);
  DualityCheck c;
  Subspace join = Subspace::zero(rep.m);
  const int h = std::min(w.horizon, budget_depth(rep.d, rep.m, pol));
  const double dn = std::max(1.0, opnorm(pinv(rep.V, pol)));
  for (int n = 1; n <= h; ++n)
    join = sum(join, kernel(dagger_iterate(rep, n, pol), pol, std::pow(dn, n)), pol);
  c.kernels_join = equal(join, w.bracketW, pol);
  Subspace dual_rinf = generalized_range(dagger_dual(rep, pol), pol);
  c.dual_range = equal(complement(dual_rinf), w.bracketW, pol);
  return c;
}

KernelSpan kernel_span_check(const Representation& rep, int n, const TolerancePolicy& pol) {
  if (n < 1) raise(ErrorKind::InvalidParams, "kernel span check needs n >= 1");
  KernelSpan k;
  const Subspace W = wandering_space(rep, pol);
  const Subspace Wd = wandering_dagger(rep, pol);
  const double vn = std::max(1.0, opnorm(rep.V));
  const double dn = std::max(1.0, opnorm(pinv(rep.V, pol)));

  Subspace span1 = Subspace::zero(rep.m);
  for (int i = 0; i < n; ++i) {
    Subspace lifted = lift(ipow(rep.d, i), W);
    span1 = sum(span1, image(iterate_v(rep, i, pol), lifted, pol), pol);
  }
  k.dagger_kernel_inclusion = contains(kernel(dagger_iterate(rep, n, pol), pol, std::pow(dn, n)), span1, pol);

  const Index N = ipow(rep.d, n) * rep.m;
  Subspace span2 = Subspace::zero(N);
  for (int i = 0; i < n; ++i) {
    Subspace slice = lift(ipow(rep.d, n - i - 1), Wd);
    Mat map = block_repeat(ipow(rep.d, n - i), dagger_iterate(rep, i, pol));
    span2 = sum(span2, image(map, slice, pol), pol);
  }
  k.kernel_equality = equal(kernel(iterate_v(rep, n, pol), pol, std::pow(vn, n)), span2, pol);
  k.regular = is_regular(rep, pol).kernel_inclusion_holds;
  return k;
}

InvariantWandering invariant_to_wandering(const Representation& rep, const Subspace& K, const TolerancePolicy& pol) {
  if (K.ambient_dim() != rep.m) raise(ErrorKind::DimensionMismatch, "subspace must live in H");
  Subspace VK = forward(rep, K, pol);
  if (!contains(VK, K, pol)) raise(ErrorKind::NotInvariant, "Ṽ(E ⊗ K) is not contained in K");
  InvariantWandering out;
  out.W = intersect(K, complement(VK), pol);
  out.regenerates = equal(generated_subspace(rep, out.W, pol), K, pol);
  return out;
}

Representation cauchy_dual(const Representation& rep, const TolerancePolicy& pol) {
  if (!kernel(rep.V, pol).is_zero()) raise(ErrorKind::NotLeftInvertible, "Ṽ has a nontrivial kernel");
  const Mat G = rep.V.adjoint() * rep.V;
  Mat Vp = rep.V * G.inverse();
  const double scale = std::max(1.0, opnorm(rep.V)) * std::max(1.0, opnorm(Vp));
  const Mat Gi = G.inverse();
  if (opnorm(Mat(Vp * G - rep.V)) > 1e-9 * scale * std::max(1.0, opnorm(G)) ||
      opnorm(Mat(Vp.adjoint() * Vp - Gi)) > 1e-9 * scale * std::max(1.0, opnorm(Gi)))
    raise(ErrorKind::IdentityViolated, "Cauchy dual identities fail");
  Representation out(rep.d, rep.m, Vp);
  out.boundary = rep.boundary;
  out.safe_depth = rep.safe_depth;
  return out;
}

Representation dagger_dual(const Representation& rep, const TolerancePolicy& pol) {
  Representation out(rep.d, rep.m, Mat(pinv(rep.V, pol).adjoint()));
  out.boundary = rep.boundary;
  out.safe_depth = rep.safe_depth;
  return out;
}

double intertwiner_residual(const Representation& rep, const Mat& A) {
  if (A.rows() != rep.m || A.cols() != rep.m) raise(ErrorKind::DimensionMismatch, "A must be m x m");
  return opnorm(Mat(A * rep.V - rep.V * block_repeat(rep.d, A)));
}

bool check_intertwiner(const Representation& rep, const Mat& A) {
  return intertwiner_residual(rep, A) <= 1e-9 * std::max(1.0, opnorm(A)) * std::max(1.0, opnorm(rep.V));
}

const char* to_string(Purity p) noexcept {
  switch (p) {
    case Purity::pure: return "pure";
    case Purity::not_pure: return "not_pure";
    case Purity::undecided: return "undecided";
  }
  return "?";
}

Purity is_pure_contraction(const Mat& A, long horizon, double tol) {
  if (A.rows() != A.cols()) raise(ErrorKind::DimensionMismatch, "A must be square");
  if (A.size() == 0) return Purity::pure;
  if (opnorm(A) > 1.0 + 1e-10) raise(ErrorKind::NotContraction, "‖A‖ exceeds 1");
  Eigen::ComplexEigenSolver<Mat> es(A, false);
  if (es.eigenvalues().cwiseAbs().maxCoeff() < 1.0 - tol) return Purity::pure;

  Mat P = A;
  Mat prev = P * P.adjoint();
  double prev_step = std::numeric_limits<double>::infinity();
  for (long n = 2; n <= horizon; n *= 2) {
    P = P * P;
    Mat T = P * P.adjoint();
    const double size = opnorm(T);
    if (size <= tol) return Purity::pure;
    const double step = opnorm(Mat(T - prev));
    if (step <= tol && prev_step <= tol) return Purity::not_pure;
    prev_step = step;
    prev = std::move(T);
  }
  return Purity::undecided;
}

PureEquivalence pure_equivalence_harness(const Representation& rep, const Mat& A, long horizon,
                                         const TolerancePolicy& pol) {
  PureEquivalence out;
  out.left_invertible = kernel(rep.V, pol).is_zero();
  out.interior_left_invertible = rep.has_boundary() && interior_kernel(rep, pol).is_zero();
  if (!out.left_invertible && !out.interior_left_invertible)
    raise(ErrorKind::PreconditionFailed, "left invertible");
  const Representation dual = out.left_invertible ? cauchy_dual(rep, pol) : dagger_dual(rep, pol);
  const Subspace W = wandering_space(rep, pol);
  if (generated_subspace(rep, W, pol).dim() != rep.m) raise(ErrorKind::PreconditionFailed, "GWS property");
  if (generated_subspace(dual, wandering_space(dual, pol), pol).dim() != rep.m)
    raise(ErrorKind::PreconditionFailed, "GWS property of the dual");
  if (!check_intertwiner(rep, A)) raise(ErrorKind::PreconditionFailed, "A intertwines the representation");

  out.full = is_pure_contraction(A, horizon);
  Mat C = W.basis().adjoint() * A * W.basis();
  out.compressed = is_pure_contraction(C, horizon);
  out.disagreement = out.decided() && out.full != out.compressed;
  return out;
}

InvariantWitness invariant_witness(const Representation& rep, const Subspace& K, const TolerancePolicy& pol) {
  if (K.is_zero() || K.dim() == rep.m) raise(ErrorKind::InvalidParams, "K must be nontrivial and proper");
  const Subspace W = wandering_space(rep, pol);
  if (overlap(W, K) > pol.sub) raise(ErrorKind::PreconditionFailed, "W ⊥ K");
  const Representation dual = kernel(rep.V, pol).is_zero() ? cauchy_dual(rep, pol) : dagger_dual(rep, pol);
  const Mat PK = project(K);
  const int h = budget_depth(rep.d, rep.m, pol);
  for (int n = 1; n <= std::min<int>(h, static_cast<int>(rep.m) + 1); ++n) {
    Mat M = PK * iterate_v(dual, n, pol) * lift(ipow(rep.d, n), W).basis();
    if (M.cols() == 0 || opnorm(M) <= pol.sub) continue;
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
    InvariantWitness out;
    out.level = n;
    out.h1 = svd.matrixU().col(0);
    Vec img = lift(rep.d, K).basis().adjoint() * (rep.V.adjoint() * out.h1);
    out.residual = img.norm() / out.h1.norm();
    return out;
  }
  raise(ErrorKind::PreconditionFailed, "no dual translate of W meets K");
}

}  // namespace woldkit
