// SPDX-License-Identifier: Apache-2.0
#include "woldkit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "woldkit/generate.hpp"
#include "woldkit/wold.hpp"

namespace woldkit {

namespace {

thread_local Json last_instance;

// Remembers the instance so an exception can still report it.
const Json& track(Json j) {
  last_instance = std::move(j);
  return last_instance;
}

CaseResult fail(std::string why, Json inst) { return {CaseStatus::failed, std::move(why), std::move(inst), true}; }
CaseResult filtered(std::string why, Json inst) { return {CaseStatus::filtered, std::move(why), std::move(inst), true}; }
CaseResult pass(Json inst) { return {CaseStatus::passed, "", std::move(inst), true}; }

#define EXPECT_OR_FAIL(cond, what)     \
  do {                                 \
    if (!(cond)) return fail(what, j); \
  } while (0)

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

Json matrix_instance(const Mat& A) {
  return {{"rows", A.rows()}, {"cols", A.cols()}, {"A", matrix_to_json(A)}};
}

CaseResult pseudoinverse_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Index r = rng.integer(1, 12), c = rng.integer(1, 20);
  const Index k = rng.integer(0, std::min(r, c));
  const Mat A = rng.uniform(0.2, 5.0) * random_rank_matrix(rng, r, c, k);
  const Json j = track(matrix_instance(A));
  const Mat P = pinv(A, pol);
  const double nA = opnorm(A), tol = 1e-9 * std::max(1.0, nA) * std::max(1.0, opnorm(P));
  EXPECT_OR_FAIL(opnorm(Mat(A * P * A - A)) <= tol, "A A+ A != A");
  EXPECT_OR_FAIL(opnorm(Mat(P * A * P - P)) <= tol, "A+ A A+ != A+");
  EXPECT_OR_FAIL(opnorm(Mat((A * P).adjoint() - A * P)) <= tol, "A A+ not Hermitian");
  EXPECT_OR_FAIL(opnorm(Mat((P * A).adjoint() - P * A)) <= tol, "A+ A not Hermitian");
  if (k > 0) {
    const double g = reduced_min_modulus(A, pol);
    EXPECT_OR_FAIL(std::abs(g * opnorm(P) - 1.0) <= 1e-8, "gamma(A) * |A+| = " + fmt(g * opnorm(P)));
  }
  return pass(j);
}

Representation small_random_rep(Rng& rng) {
  const Index d = rng.integer(1, 3), m = rng.integer(1, 4);
  const Index rank = rng.integer(0, 2) == 0 ? rng.integer(0, m) : -1;
  return random_representation(rng, d, m, rank);
}

CaseResult kernel_intersection_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Representation rep = small_random_rep(rng);
  const Json j = track(to_json(rep));
  for (auto [a, b] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
    const auto ki = kernel_intersection_identity(rep, a, b, pol);
    EXPECT_OR_FAIL(ki.equal, "kernel intersection identity fails at (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  const auto rr = is_regular(rep, pol);
  EXPECT_OR_FAIL(!rr.anomaly, "condition witnesses disagree with the kernel inclusion");
  bool all = true;
  for (const auto& w : rr.per_m) all = all && w.holds;
  EXPECT_OR_FAIL(all == rr.kernel_inclusion_holds, "per-m verdicts disagree with the kernel inclusion");
  return pass(j);
}

CaseResult generalized_inverse_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Index d = rng.integer(1, 3), m = rng.integer(1, 4);
  const Representation rep = random_representation(rng, d, m);
  const Json j = track(to_json(rep));
  if (!is_regular(rep, pol).regular()) return filtered("not regular", j);
  for (int s = 0; s < 5; ++s) {
    const GenInverse S = make_generalized_inverse(rep, random_matrix(rng, d * m, m), pol);
    const BiregularityReport br = is_biregular(rep, S, 3, pol);
    for (int n = 1; n <= 3; ++n) {
      const Mat Vn = iterate_v(rep, n, pol), Sn = iterate_s(S, n, pol);
      const double r1 = opnorm(Mat(Vn * Sn * Vn - Vn));
      EXPECT_OR_FAIL(r1 <= 1e-8 * opnorm(Vn) * std::max(1.0, opnorm(Sn) * opnorm(Vn)),
                     "V_n S^(n) V_n != V_n at n=" + std::to_string(n) + " residual " + fmt(r1));
      if (br.holds) {
        const double r2 = opnorm(Mat(Sn * Vn * Sn - Sn));
        EXPECT_OR_FAIL(r2 <= 1e-8 * opnorm(Sn) * std::max(1.0, opnorm(Sn) * opnorm(Vn)),
                       "S^(n) V_n S^(n) != S^(n) at n=" + std::to_string(n));
      }
    }
    EXPECT_OR_FAIL(s_invariance_check(rep, S, pol), "range of S^(n) not invariant");
  }
  return pass(j);
}

CaseResult norm_identity_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Representation rep = random_left_invertible(rng, 1, rng.integer(1, 4), 1.05, 3.0);
  const Json j = track(to_json(rep));
  EXPECT_OR_FAIL(gamma(rep, pol) > 1.0, "gamma <= 1");
  for (int n = 1; n <= 4; ++n) {
    EXPECT_OR_FAIL(norm_identity_residual(rep, n, pol) <= 1e-7, "norm identity fails at n=" + std::to_string(n));
    EXPECT_OR_FAIL(range_telescoping_residual(rep, n, pol) <= 1e-8, "range telescoping fails at n=" + std::to_string(n));
    EXPECT_OR_FAIL(kernel_telescoping_residual(rep, n, pol) <= 1e-8, "kernel telescoping fails at n=" + std::to_string(n));
  }
  return pass(j);
}

Subspace blocks_span(const BlockInstance& bi, bool wandering) {
  Subspace s = Subspace::zero(bi.rep.m);
  for (const auto& b : bi.blocks)
    if (b.wandering == wandering) s = sum(s, coordinate_block(bi.rep.m, b.offset, b.size), TolerancePolicy{});
  return s;
}

CaseResult wold_case(std::uint64_t seed, int index, const TolerancePolicy& pol) {
  Rng rng(seed);
  if (index % 4 == 3) {
    const Representation rep = small_random_rep(rng);
    const Json j = track(to_json(rep));
    const WoldResult w = wold_decompose(rep, {}, 0, pol, false);
    if (!w.failed_preconditions.empty()) return filtered("fails " + w.failed_preconditions.front(), j);
    if (w.growth.pattern != "bounded") return filtered("divergence of the reciprocal sum is not evident", j);
    EXPECT_OR_FAIL(w.decomposes() && w.reduces && w.unitary_restriction, "splitting fails on a pooled instance");
    return pass(j);
  }
  const BlockInstance bi = random_block_instance(rng, rng.integer(1, 2));
  const Json j = track(to_json(bi.rep));
  const WoldResult w = wold_decompose(bi.rep, {}, 0, pol, false);
  EXPECT_OR_FAIL(w.failed_preconditions.empty(), "constructed instance fails a hypothesis");
  EXPECT_OR_FAIL(w.projector_sum_residual <= 1e-8, "P_[W] + P_Rinf != I");
  EXPECT_OR_FAIL(w.projector_product_residual <= 1e-8, "P_[W] P_Rinf != 0");
  EXPECT_OR_FAIL(w.reduces, "Rinf does not reduce");
  EXPECT_OR_FAIL(w.dagger_equals_adjoint_on_Rinf, "dagger differs from adjoint on Rinf");
  EXPECT_OR_FAIL(w.unitary_restriction, "restriction to Rinf is not unitary");
  EXPECT_OR_FAIL(w.biregular, "not bi-regular");
  EXPECT_OR_FAIL(equal(w.bracketW, blocks_span(bi, true), pol), "[W] differs from the shift blocks");
  EXPECT_OR_FAIL(equal(w.Rinf, blocks_span(bi, false), pol), "Rinf differs from the unitary block");
  return pass(j);
}

CaseResult concave_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Representation rep = random_concave(rng, 1, rng.integer(1, 5));
  const Json j = track(to_json(rep));
  EXPECT_OR_FAIL(check_concave(rep, pol), "generator output is not concave");
  EXPECT_OR_FAIL(check_expansive(rep, pol), "concave but not expansive");
  const WoldResult w = wold_decompose(rep, {}, 0, pol, false);
  EXPECT_OR_FAIL(w.failed_preconditions.empty(), "concave instance fails " +
                                                     (w.failed_preconditions.empty() ? "" : w.failed_preconditions.front()));
  EXPECT_OR_FAIL(w.decomposes(), "no orthogonal splitting");
  EXPECT_OR_FAIL(w.isometric_on_Rinf && w.fully_coisometric_on_Rinf, "restriction to Rinf not isometric and co-isometric");
  return pass(j);
}

CaseResult purity_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const bool scalar = rng.integer(0, 2) == 0;
  const Index d = scalar ? rng.integer(1, 2) : 1;
  const int L = static_cast<int>(rng.integer(2, d == 1 ? 5 : 2));
  const WeightKind wk = rng.integer(0, 1) ? WeightKind::unit : WeightKind::scaled;
  const Representation rep = build_unilateral_shift(random_unilateral_spec(rng, d, L, 1, wk), pol);
  const Index m = rep.m;
  Mat A;
  if (scalar) {
    const double theta = rng.uniform(0.0, 6.283185307179586);
    const double r = rng.integer(0, 1) ? 1.0 : rng.uniform(0.0, 0.99);
    A = std::polar(r, theta) * Mat::Identity(m, m);
  } else {
    // Polynomial in the shift, scaled into the unit ball.
    A = Mat::Zero(m, m);
    Mat P = Mat::Identity(m, m);
    const int deg = static_cast<int>(rng.integer(1, 3));
    for (int k = 0; k <= deg; ++k) {
      A += rng.cnormal() * P;
      P = P * rep.V;
    }
    A /= std::max(1.0, opnorm(A));
  }
  Json j = to_json(rep);
  j["A"] = matrix_to_json(A);
  track(j);
  const PureEquivalence pe = pure_equivalence_harness(rep, A, 1L << 20, pol);
  EXPECT_OR_FAIL(!pe.disagreement, std::string("purity of A is ") + to_string(pe.full) + " but the compression is " +
                                       to_string(pe.compressed));
  CaseResult out = pass(j);
  out.decided = pe.decided();
  return out;
}

CaseResult scalar_closed_form_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const double c = rng.uniform(1.05, 3.0);
  const Json j = track({{"c", c}});
  const auto seq = minimal_growth_sequence(Representation(1, 1, Mat::Constant(1, 1, c)), 3, pol);
  for (int m = 1; m <= 3; ++m) {
    const double want = (std::pow(c, 2 * m) - 1) / (c * c - 1);
    EXPECT_OR_FAIL(std::abs(seq[m - 1] - want) <= 1e-9 * want, "scalar growth sequence off at m=" + std::to_string(m));
  }
  UnilateralSpec u;
  u.d = 1;
  u.L = 5;
  u.p = 1;
  for (int k = 0; k < u.L; ++k) u.Z.push_back(Mat::Constant(1, 1, c));
  const auto rpt = check_unilateral_weight_condition(u, {}, 4, 1, pol);
  for (int k = 1; k <= 4; ++k) {
    const double want = (std::pow(c, 2 * k) - 1) / (c * c - 1);
    EXPECT_OR_FAIL(std::abs(rpt.minimal_d[k - 1] - want) <= 1e-9 * want, "weight condition off at k=" + std::to_string(k));
  }
  return pass(j);
}

CaseResult bilateral_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Index n = rng.integer(1, 3);
  const int M = static_cast<int>(rng.integer(2, 4));
  const BilateralSpec spec = random_bilateral_spec(rng, n, M, rng.integer(0, 1) == 0);
  const Json j = track(to_json(spec));
  const Representation rep = build_bilateral_shift(spec, pol).rep;
  const Index h = 2 * M + 1;
  Subspace expect = Subspace::zero(rep.cols());
  for (Index i = 0; i < n; ++i) expect = sum(expect, coordinate_block(rep.cols(), i * h + M, 1), pol);
  EXPECT_OR_FAIL(equal(interior_kernel(rep, pol), expect, pol), "interior kernel is not the span of the e_0 columns");
  EXPECT_OR_FAIL(is_regular(rep, pol).regular(), "not regular");
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      const double x = opnorm(Mat(rep.V.middleCols(a * h, h).adjoint() * rep.V.middleCols(b * h, h)));
      EXPECT_OR_FAIL(x <= pol.orth, "ranges of S_i and S_j overlap");
    }
  const PipelineResult pr = shift_pipeline(spec, pol);
  EXPECT_OR_FAIL(pr.condition_holds, "weight conditions fail");
  EXPECT_OR_FAIL(pr.assertions_hold, "pipeline assertions fail");
  EXPECT_OR_FAIL(std::any_of(pr.notes.begin(), pr.notes.end(),
                             [](const std::string& s) { return s.rfind("boundary", 0) == 0; }),
                 "no boundary label");
  return pass(j);
}

CaseResult unilateral_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Index d = rng.integer(1, 2);
  const int L = static_cast<int>(rng.integer(1, d == 1 ? 5 : 3));
  const WeightKind wk = static_cast<WeightKind>(rng.integer(0, 2));
  const UnilateralSpec spec = random_unilateral_spec(rng, d, L, rng.integer(1, 2), wk);
  const Json j = track(to_json(spec));
  const PipelineResult pr = shift_pipeline(spec, pol);
  EXPECT_OR_FAIL(pr.condition_holds, "weight condition fails");
  EXPECT_OR_FAIL(pr.assertions_hold, "Rinf != 0 or [W] != H");
  return pass(j);
}

CaseResult tensor_lift_case(std::uint64_t seed, int, const TolerancePolicy& pol) {
  Rng rng(seed);
  const Index d = rng.integer(1, 3);
  const Mat A = random_rank_matrix(rng, rng.integer(1, 3), rng.integer(1, 3), rng.integer(0, 3));
  const int a = static_cast<int>(rng.integer(0, 2)), b = static_cast<int>(rng.integer(0, 2));
  const Json j = track({{"d", d}, {"a", a}, {"b", b}, {"A", matrix_instance(A)}});
  const Mat lhs = tensor_lift(a, tensor_lift(b, A, d, pol), d, pol);
  EXPECT_OR_FAIL((lhs - tensor_lift(a + b, A, d, pol)).norm() == 0.0, "lift composition law fails");
  if (A.norm() > 0)
    EXPECT_OR_FAIL(std::abs(reduced_min_modulus(lhs, pol) - reduced_min_modulus(A, pol)) <= 1e-12 * opnorm(A),
                   "gamma changes under lifting");
  return pass(j);
}

}  // namespace

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"pseudoinverse", "Penrose identities and gamma(A)|A+| = 1", pseudoinverse_case},
      {"tensor-lift", "lift composition law and gamma under lifting", tensor_lift_case},
      {"kernel-intersection", "kernel intersection identity and agreement of regularity tests", kernel_intersection_case},
      {"generalized-inverse-powers", "iterated generalized inverses of regular representations", generalized_inverse_case},
      {"norm-identity", "norm identity and telescoping identities for left-invertible representations", norm_identity_case},
      {"wold-splitting", "orthogonal splitting H = [W] + Rinf with unitary restriction", wold_case},
      {"concave-expansive", "concave representations are expansive and split", concave_case},
      {"purity-transfer", "purity of an intertwiner matches purity of its compression to W", purity_case},
      {"scalar-closed-forms", "closed-form minimal growth constants in the scalar case", scalar_closed_form_case},
      {"bilateral-shift", "kernel, regularity and pipeline of truncated bilateral shifts", bilateral_case},
      {"unilateral-shift", "truncated unilateral shifts are analytic and generated by W", unilateral_case},
  };
  return all;
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t suite, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

bool VerifyReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteOutcome& s) { return s.failed == 0; });
}

Json VerifyReport::to_json(const VerifyOptions& opts) const {
  Json j;
  j["tool"] = {{"name", "woldkit"}, {"version", WOLDKIT_VERSION}};
  j["seed"] = opts.seed;
  j["count"] = opts.count;
  j["tolerance"] = {{"rank", opts.pol.rank}, {"orth", opts.pol.orth}, {"psd", opts.pol.psd}, {"sub", opts.pol.sub},
                    {"max_columns", opts.pol.max_columns}};
  Json arr = Json::array();
  for (const auto& s : suites) {
    Json e;
    e["suite"] = s.name;
    e["passed"] = s.passed;
    e["failed"] = s.failed;
    e["filtered"] = s.filtered;
    e["undecided"] = s.undecided;
    Json f = Json::array();
    for (const auto& x : s.failures)
      f.push_back({{"index", x.index}, {"seed", x.seed}, {"detail", x.detail}, {"instance", x.instance}});
    e["failures"] = f;
    arr.push_back(e);
  }
  j["suites"] = arr;
  j["all_passed"] = all_passed();
  return j;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  for (const auto& s : suites) {
    os << (s.failed == 0 ? "PASS " : "FAIL ") << s.name << "  passed=" << s.passed << " failed=" << s.failed
       << " filtered=" << s.filtered;
    if (s.undecided) os << " undecided=" << s.undecided;
    os << "\n";
    for (const auto& f : s.failures)
      os << "  case " << f.index << " (seed " << f.seed << "): " << f.detail << "\n    " << f.instance.dump() << "\n";
  }
  return os.str();
}

VerifyReport run_verify(const VerifyOptions& opts) {
  if (opts.count < 0) raise(ErrorKind::InvalidParams, "count must be non-negative");
  std::vector<std::size_t> chosen;
  const auto& all = suites();
  if (opts.names.empty()) {
    for (std::size_t i = 0; i < all.size(); ++i) chosen.push_back(i);
  } else {
    for (const auto& n : opts.names) {
      auto it = std::find_if(all.begin(), all.end(), [&](const Suite& s) { return n == s.name; });
      if (it == all.end()) raise(ErrorKind::InvalidParams, "unknown suite \"" + n + "\"");
      chosen.push_back(static_cast<std::size_t>(it - all.begin()));
    }
  }

  struct Job {
    std::size_t suite;
    int index;
    std::uint64_t seed;
    CaseResult result;
  };
  std::vector<Job> jobs;
  for (std::size_t s : chosen)
    for (int i = 0; i < opts.count; ++i) jobs.push_back({s, i, case_seed(opts.seed, s, i), {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      Job& job = jobs[k];
      last_instance = Json();
      try {
        job.result = all[job.suite].run(job.seed, job.index, opts.pol);
      } catch (const std::exception& e) {
        job.result = {CaseStatus::failed, std::string("exception: ") + e.what(), last_instance, true};
      }
    }
  };
  unsigned nt = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  VerifyReport rpt;
  for (std::size_t s : chosen) {
    SuiteOutcome o;
    o.name = all[s].name;
    for (const Job& job : jobs) {
      if (job.suite != s) continue;
      switch (job.result.status) {
        case CaseStatus::passed: ++o.passed; break;
        case CaseStatus::filtered: ++o.filtered; break;
        case CaseStatus::failed:
          ++o.failed;
          o.failures.push_back({job.index, job.seed, job.result.detail, job.result.instance});
          break;
      }
      if (job.result.status != CaseStatus::failed && !job.result.decided) ++o.undecided;
    }
    rpt.suites.push_back(std::move(o));
  }
  return rpt;
}

}  // namespace woldkit
