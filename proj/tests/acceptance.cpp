// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion.
#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/LU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "woldkit/generate.hpp"
#include "woldkit/growth.hpp"
#include "woldkit/shifts.hpp"
#include "woldkit/structure.hpp"
#include "woldkit/wold.hpp"

using namespace woldkit;

namespace {

// Pinned thresholds.
constexpr double kPenroseTol = 1e-9;
constexpr double kGammaTol = 1e-8;
constexpr double kGenInvTol = 1e-8;
constexpr double kNormIdentityTol = 1e-7;
constexpr double kTelescopeTol = 1e-8;
constexpr double kProjectorTol = 1e-8;
constexpr double kScalarTol = 1e-9;
constexpr double kDecidedFraction = 0.8;
constexpr double kSpanTol = 1e-8;

const TolerancePolicy kPol{};

struct Outcome {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Oracle helpers built on Eigen decompositions other than the library's SVD path.
Mat cod_pinv(const Mat& A) {
  if (A.size() == 0) return Mat::Zero(A.cols(), A.rows());
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  cod.setThreshold(1e-11);
  return cod.pseudoInverse();
}

Mat lifted(Index copies, const Mat& A) { return oracle::kron(oracle::identity(copies), A); }

Index ipow_(Index b, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// (I_{E^{⊗(n-1)}} ⊗ S) ⋯ (I_E ⊗ S) S
Mat iterate_product(const Mat& S, Index d, int n) {
  Mat out = oracle::identity(S.cols());
  for (int k = 0; k < n; ++k) out = lifted(ipow_(d, k), S) * out;
  return out;
}

Mat orthonormal_columns(const Mat& A, double tol = 1e-9) {
  const Index r = oracle::gauss_rank(A, tol);
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  return Mat(qr.householderQ()).leftCols(r);
}

Mat null_basis(const Mat& A) {
  Eigen::FullPivLU<Mat> lu(A);
  lu.setThreshold(1e-10);
  Mat K = lu.kernel();
  if (lu.rank() == A.cols()) return Mat::Zero(A.cols(), 0);
  return orthonormal_columns(K);
}

// Column span of B contained in the column span of A.
bool span_contains(const Mat& A, const Mat& B, double tol) {
  if (B.cols() == 0) return true;
  Mat AB(A.rows(), A.cols() + B.cols());
  AB << A, B;
  return oracle::gauss_rank(AB, tol) == oracle::gauss_rank(A, tol);
}

double spectral_radius(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Mat> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Mat polynomial_in(Rng& rng, const Mat& V) {
  const Index m = V.rows();
  Mat A = Mat::Zero(m, m), P = Mat::Identity(m, m);
  const int deg = static_cast<int>(rng.integer(1, 3));
  for (int k = 0; k <= deg; ++k) {
    A += rng.cnormal() * P;
    P = P * V;
  }
  return A / std::max(1.0, opnorm(A));
}

// 1. Moore-Penrose identities and gamma(A)|A+| = 1.
Outcome moore_penrose() {
  Outcome o;
  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const Index r = rng.integer(1, 12), c = rng.integer(1, 20);
    const Index k = t % 3 == 0 ? rng.integer(0, std::min(r, c) - 1) : std::min(r, c);
    const Mat A = rng.uniform(0.2, 5.0) * random_rank_matrix(rng, r, c, k);
    const Mat P = pinv(A, kPol);
    const double tol = kPenroseTol * std::max(1.0, opnorm(A));
    o.check((A * P * A - A).norm() <= tol, "AA+A at case " + std::to_string(t));
    o.check((P * A * P - P).norm() <= tol, "A+AA+ at case " + std::to_string(t));
    o.check((Mat((A * P).adjoint()) - A * P).norm() <= tol, "AA+ Hermitian at case " + std::to_string(t));
    o.check((Mat((P * A).adjoint()) - P * A).norm() <= tol, "A+A Hermitian at case " + std::to_string(t));
    o.check((P - cod_pinv(A)).norm() <= 1e-8 * std::max(1.0, opnorm(P)), "differs from COD pseudoinverse at case " + std::to_string(t));
    o.check(oracle::gauss_rank(A, 1e-8 * std::max(1.0, opnorm(A))) == k, "constructed rank not realized at case " + std::to_string(t));
    if (k > 0) {
      const double g = reduced_min_modulus(A, kPol);
      o.check(std::abs(g * opnorm(P) - 1.0) <= kGammaTol, "gamma(A)|A+| = " + num(g * opnorm(P)));
    }
  }
  return o;
}

// 2. Kernel intersection identity and agreement of the regularity tests.
Outcome kernel_intersection() {
  Outcome o;
  Rng rng(202);
  int regular = 0;
  for (int t = 0; t < 50; ++t) {
    const Index d = rng.integer(1, 3), m = rng.integer(1, 4);
    const Index rank = t % 2 ? rng.integer(0, m) : -1;
    const Representation rep = random_representation(rng, d, m, rank);
    for (auto [a, b] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}})
      o.check(kernel_intersection_identity(rep, a, b, kPol).equal,
              "identity fails at (" + std::to_string(a) + "," + std::to_string(b) + ") case " + std::to_string(t));
    const RegularityReport rr = is_regular(rep, kPol);
    bool per_m = true;
    for (const auto& w : rr.per_m) per_m = per_m && w.holds;
    o.check(per_m == rr.kernel_inclusion_holds, "per-m verdicts disagree at case " + std::to_string(t));
    o.check(!rr.anomaly, "anomaly at case " + std::to_string(t));
    // Oracle: R∞ = R(Ṽ_{m+1}) and the kernel inclusion by rank counting.
    const double scale = std::max(1.0, std::pow(opnorm(rep.V), static_cast<double>(m + 1)));
    const Mat Vn = oracle::iterate_naive(rep.V, d, m, static_cast<int>(m + 1));
    const Mat rinf = orthonormal_columns(Vn, 1e-9 * scale);
    const bool oracle_inclusion = span_contains(lifted(d, rinf), null_basis(rep.V), kSpanTol);
    o.check(oracle_inclusion == rr.kernel_inclusion_holds, "kernel inclusion disagrees with oracle at case " + std::to_string(t));
    regular += rr.regular();
  }
  o.check(regular > 0 && regular < 50, "instance pool lacks both verdicts");
  return o;
}

// 3. Iterated generalized inverses.
Outcome generalized_inverses() {
  Outcome o;
  Rng rng(303);
  int done = 0, biregular = 0;
  for (int t = 0; done < 50 && t < 500; ++t) {
    Representation rep = t % 2 ? random_block_instance(rng, rng.integer(1, 2)).rep
                               : random_representation(rng, rng.integer(1, 3), rng.integer(1, 4));
    if (rep.has_boundary()) rep = Representation(rep.d, rep.m, rep.V);
    if (!is_regular(rep, kPol).regular()) continue;
    ++done;
    for (int s = 0; s < 5; ++s) {
      const GenInverse S = make_generalized_inverse(rep, random_matrix(rng, rep.cols(), rep.m), kPol);
      const bool bi = is_biregular(rep, S, 3, kPol).holds;
      biregular += bi;
      for (int n = 1; n <= 3; ++n) {
        const Mat Vn = oracle::iterate_naive(rep.V, rep.d, rep.m, n);
        const Mat Sn = iterate_product(S.S, rep.d, n);
        o.check((Sn - iterate_s(S, n, kPol)).norm() <= 1e-9 * std::max(1.0, Sn.norm()), "S^(n) differs from oracle");
        const double r1 = opnorm(Mat(Vn * Sn * Vn - Vn));
        o.check(r1 <= kGenInvTol * opnorm(Vn), "V_n S^(n) V_n residual " + num(r1 / opnorm(Vn)) + " at n=" + std::to_string(n));
        if (bi) {
          const double r2 = opnorm(Mat(Sn * Vn * Sn - Sn));
          o.check(r2 <= kGenInvTol * opnorm(Sn), "S^(n) V_n S^(n) residual " + num(r2 / opnorm(Sn)));
        }
      }
    }
  }
  o.check(done == 50, "only " + std::to_string(done) + " regular instances");
  o.check(biregular > 0, "no bi-regular pair exercised");
  return o;
}

// 4. Norm identity and telescoping identities, computed from oracle matrices.
Outcome norm_identities() {
  Outcome o;
  Rng rng(404);
  for (int t = 0; t < 25; ++t) {
    const Index m = rng.integer(1, 4);
    const Representation rep = random_left_invertible(rng, 1, m, 1.05, 3.0);
    const Index d = rep.d;
    o.check(gamma(rep, kPol) > 1.0, "gamma <= 1 at case " + std::to_string(t));
    const Mat Vd = cod_pinv(rep.V);
    const Mat PW = oracle::identity(m) - rep.V * Vd;
    const Mat PWd = oracle::identity(d * m) - Vd * rep.V;
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(rep.V.adjoint() * rep.V - Vd * rep.V));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const Mat D = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    for (int n = 1; n <= 4; ++n) {
      for (Index b = 0; b < m; ++b) {
        const Mat h = oracle::e(m, b);
        double total = (iterate_product(Vd, d, n) * h).squaredNorm();
        for (int i = 0; i < n; ++i) total += (lifted(ipow_(d, i), PW) * iterate_product(Vd, d, i) * h).squaredNorm();
        for (int i = 1; i <= n; ++i) total += (lifted(ipow_(d, i - 1), D) * iterate_product(Vd, d, i) * h).squaredNorm();
        o.check(std::abs(total - 1.0) <= kNormIdentityTol, "norm identity off by " + num(total - 1.0) + " at n=" + std::to_string(n));
      }
      Mat rhs = Mat::Zero(m, m);
      for (int i = 0; i < n; ++i)
        rhs += oracle::iterate_naive(rep.V, d, m, i) * lifted(ipow_(d, i), PW) * iterate_product(Vd, d, i);
      const Mat lhs = oracle::identity(m) - oracle::iterate_naive(rep.V, d, m, n) * iterate_product(Vd, d, n);
      o.check(opnorm(Mat(lhs - rhs)) <= kTelescopeTol, "range telescoping residual " + num(opnorm(Mat(lhs - rhs))));
      const Index N = ipow_(d, n) * m;
      Mat krhs = Mat::Zero(N, N);
      for (int i = 0; i < n; ++i) {
        const Index outer = ipow_(d, n - i);
        krhs += lifted(outer, iterate_product(Vd, d, i)) * lifted(ipow_(d, n - i - 1), PWd) *
                lifted(outer, oracle::iterate_naive(rep.V, d, m, i));
      }
      const Mat klhs = oracle::identity(N) - iterate_product(Vd, d, n) * oracle::iterate_naive(rep.V, d, m, n);
      o.check(opnorm(Mat(klhs - krhs)) <= kTelescopeTol, "kernel telescoping residual " + num(opnorm(Mat(klhs - krhs))));
      o.check(norm_identity_residual(rep, n, kPol) <= kNormIdentityTol, "library norm identity residual");
    }
  }
  return o;
}

// 5. Splitting of constructed block instances.
Outcome wold_blocks() {
  Outcome o;
  Rng rng(505);
  for (int t = 0; t < 25; ++t) {
    const BlockInstance bi = random_block_instance(rng, rng.integer(1, 2));
    const WoldResult w = wold_decompose(bi.rep, {}, 0, kPol, false);
    const std::string at = " at case " + std::to_string(t);
    o.check(w.failed_preconditions.empty(), "precondition fails" + at);
    o.check(w.projector_sum_residual <= kProjectorTol, "P_[W] + P_Rinf != I" + at);
    o.check(w.projector_product_residual <= kProjectorTol, "P_[W] P_Rinf != 0" + at);
    o.check(w.reduces && w.dagger_equals_adjoint_on_Rinf && w.unitary_restriction, "diagnostics" + at);
    std::vector<Index> wi, ri;
    for (const auto& b : bi.blocks)
      for (Index k = 0; k < b.size; ++k) (b.wandering ? wi : ri).push_back(b.offset + k);
    const Mat Wb = oracle::coords(bi.rep.m, wi), Rb = oracle::coords(bi.rep.m, ri);
    o.check(w.bracketW.dim() == Wb.cols() && (wi.empty() || oracle::same_span(w.bracketW.basis(), Wb, kSpanTol)),
            "[W] differs from the shift blocks" + at);
    o.check(w.Rinf.dim() == Rb.cols() && (ri.empty() || oracle::same_span(w.Rinf.basis(), Rb, kSpanTol)),
            "Rinf differs from the unitary blocks" + at);
  }
  return o;
}

// 6. Concave instances.
Outcome concave() {
  Outcome o;
  Rng rng(606);
  for (int t = 0; t < 25; ++t) {
    const Representation rep = random_concave(rng, 1, rng.integer(1, 5));
    const std::string at = " at case " + std::to_string(t);
    o.check(check_concave(rep, kPol), "not concave" + at);
    o.check(check_expansive(rep, kPol), "not expansive" + at);
    const Mat G = rep.V.adjoint() * rep.V - oracle::identity(rep.cols());
    Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
    o.check(es.eigenvalues()(0) >= -1e-9, "oracle: V*V - I not PSD" + at);
    const WoldResult w = wold_decompose(rep, {}, 0, kPol, false);
    o.check(w.failed_preconditions.empty(), "precondition fails" + at);
    o.check(w.decomposes() && w.isometric_on_Rinf && w.fully_coisometric_on_Rinf, "restriction diagnostics" + at);
  }
  return o;
}

// 7. Purity of an intertwiner against purity of its compression to W.
Outcome purity() {
  Outcome o;
  Rng rng(707);
  int decided = 0;
  const int total = 50;
  for (int t = 0; t < total; ++t) {
    const bool scalar = t % 3 == 0;
    const Index d = scalar ? rng.integer(1, 2) : 1;
    const int L = static_cast<int>(rng.integer(2, d == 1 ? 5 : 2));
    const Representation rep =
        build_unilateral_shift(random_unilateral_spec(rng, d, L, 1, t % 2 ? WeightKind::unit : WeightKind::scaled), kPol);
    Mat A;
    if (scalar) {
      const double r = rng.integer(0, 1) ? 1.0 : rng.uniform(0.0, 0.99);
      A = std::polar(r, rng.uniform(0.0, 6.283185307179586)) * Mat::Identity(rep.m, rep.m);
    } else {
      A = polynomial_in(rng, rep.V);
    }
    const PureEquivalence pe = pure_equivalence_harness(rep, A, 1L << 20, kPol);
    const std::string at = " at case " + std::to_string(t);
    o.check(!pe.disagreement, "decided disagreement" + at);
    decided += pe.decided();
    // Oracle: a finite matrix is pure exactly when its spectral radius is below one.
    const double rho = spectral_radius(A);
    if (pe.full != Purity::undecided && std::abs(rho - 1.0) > 1e-6)
      o.check((pe.full == Purity::pure) == (rho < 1.0), "purity verdict contradicts spectral radius" + at);
    const Mat Q = null_basis(Mat(rep.V.adjoint()));
    const double rho_w = spectral_radius(Mat(Q.adjoint() * A * Q));
    if (pe.compressed != Purity::undecided && std::abs(rho_w - 1.0) > 1e-6)
      o.check((pe.compressed == Purity::pure) == (rho_w < 1.0), "compressed verdict contradicts spectral radius" + at);
  }
  o.check(decided >= kDecidedFraction * total, "only " + std::to_string(decided) + " of 50 decided");
  if (o.ok) o.detail = std::to_string(decided) + "/50 decided";
  return o;
}

// 8. Scalar closed forms.
Outcome scalar_forms() {
  Outcome o;
  const auto seq = minimal_growth_sequence(Representation(1, 1, Mat::Constant(1, 1, 2.0)), 3, kPol);
  for (int m = 1; m <= 3; ++m) {
    const double want = (std::pow(4.0, m) - 1.0) / 3.0;
    o.check(std::abs(seq[m - 1] - want) <= kScalarTol * want, "growth sequence at m=" + std::to_string(m) + " is " + num(seq[m - 1]));
  }
  for (double c : {1.1, 2.0}) {
    UnilateralSpec u;
    u.d = 1;
    u.L = 5;
    u.p = 1;
    for (int k = 0; k < u.L; ++k) u.Z.push_back(Mat::Constant(1, 1, c));
    const auto rpt = check_unilateral_weight_condition(u, {}, 4, 1, kPol);
    for (int k = 1; k <= 4; ++k) {
      const double want = (std::pow(c, 2 * k) - 1) / (c * c - 1);
      o.check(std::abs(rpt.minimal_d[k - 1] - want) <= kScalarTol * want,
              "weight condition at c=" + num(c) + " k=" + std::to_string(k));
    }
  }
  return o;
}

// 9. Truncated bilateral shifts.
Outcome bilateral() {
  Outcome o;
  for (Index n : {1, 2}) {
    const int M = 3;
    const Index h = 2 * M + 1;
    BilateralSpec spec;
    spec.n = n;
    spec.M = M;
    spec.w.assign(static_cast<std::size_t>(n), std::vector<double>(h, 1.0));
    for (auto& row : spec.w) row[M] = 0.0;
    check_condition_i(spec);
    const Representation rep = build_bilateral_shift(spec, kPol).rep;
    const std::string at = " at n=" + std::to_string(n);
    std::vector<Index> e0;
    for (Index i = 0; i < n; ++i) e0.push_back(i * h + M);
    const Mat K = interior_kernel(rep, kPol).basis();
    o.check(K.cols() == n && oracle::same_span(K, oracle::coords(rep.cols(), e0), kSpanTol), "interior kernel" + at);
    o.check(is_regular(rep, kPol).regular(), "not regular" + at);
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        o.check(opnorm(Mat(rep.V.middleCols(a * h, h).adjoint() * rep.V.middleCols(b * h, h))) == 0.0, "ranges overlap" + at);
    const PipelineResult pr = shift_pipeline(spec, kPol);
    o.check(pr.condition_holds && pr.assertions_hold, "pipeline" + at);
    o.check(std::any_of(pr.notes.begin(), pr.notes.end(), [](const std::string& s) { return s.rfind("boundary", 0) == 0; }),
            "no boundary label" + at);
  }
  return o;
}

// 10. CLI golden files, determinism and exit codes.
int run(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli() {
  Outcome o;
  const std::string bin = WOLDKIT_BIN, fx = WOLDKIT_FIXTURES, work = WOLDKIT_WORK;
  run("mkdir -p '" + work + "'");
  const std::string in_fx = "cd '" + fx + "' && '" + bin + "' ";
  const std::string quiet = " >/dev/null 2>&1";
  o.check(run(in_fx + "analyze truncated_shift.json --out '" + work + "/ts.json'" + quiet) == 0, "analyze exit code");
  o.check(slurp(work + "/ts.json") == slurp(fx + "/truncated_shift.report.json"), "truncated shift report differs from golden");
  o.check(run(in_fx + "analyze malformed.json" + quiet) == 1, "malformed input exit code");
  o.check(run(in_fx + "analyze contraction.json" + quiet) == 2, "precondition failure exit code");
  o.check(run(in_fx + "generate bilateral --params n=1,M=3,weights=unit --out '" + work + "/b.json'" + quiet) == 0, "generate exit code");
  o.check(slurp(work + "/b.json") == slurp(fx + "/bilateral_n1_M3.json"), "bilateral spec differs from golden");
  for (const char* kind : {"random", "left-invertible", "expansive", "concave", "unilateral", "block"}) {
    const std::string a = work + "/g1.json", b = work + "/g2.json";
    run(in_fx + "generate " + kind + " --seed 5 --out '" + a + "'" + quiet);
    run(in_fx + "generate " + kind + " --seed 5 --out '" + b + "'" + quiet);
    const std::string sa = slurp(a);
    o.check(!sa.empty() && sa == slurp(b), std::string("generate ") + kind + " not byte-identical");
    run(in_fx + "analyze '" + a + "' --out '" + work + "/r1.json'" + quiet);
    run(in_fx + "analyze '" + a + "' --out '" + work + "/r2.json'" + quiet);
    o.check(slurp(work + "/r1.json") == slurp(work + "/r2.json"), std::string("analyze of ") + kind + " not byte-identical");
  }
  o.check(run(in_fx + "verify all --count 2 --seed 1 --out '" + work + "/v1.json'" + quiet) == 0, "verify exit code");
  run(in_fx + "verify all --count 2 --seed 1 --threads 1 --out '" + work + "/v2.json'" + quiet);
  o.check(slurp(work + "/v1.json") == slurp(work + "/v2.json"), "verify report depends on thread count");
  o.check(run(in_fx + "verify concave-expansive --count 3 --tol-psd 1e-30" + quiet) == 1, "corrupted tolerance exit code");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "Moore-Penrose identities", 5, moore_penrose},
      {2, "kernel intersection and regularity agreement", 30, kernel_intersection},
      {3, "iterated generalized inverses", 60, generalized_inverses},
      {4, "norm and telescoping identities", 30, norm_identities},
      {5, "splitting of block instances", 60, wold_blocks},
      {6, "concave instances split", 30, concave},
      {7, "purity transfer", 60, purity},
      {8, "scalar closed forms", 10, scalar_forms},
      {9, "truncated bilateral shifts", 10, bilateral},
      {10, "CLI determinism and exit codes", 10, cli},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget_s) o.check(false, "runtime " + num(secs) + " s over " + num(c.budget_s) + " s");
    std::printf("%s %2d %-46s %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.empty() ? "" : "  ",
                o.detail.c_str());
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
