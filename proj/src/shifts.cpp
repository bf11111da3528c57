// SPDX-License-Identifier: Apache-2.0
#include "woldkit/shifts.hpp"

#include <algorithm>
#include <cmath>

namespace woldkit {

void validate(const UnilateralSpec& spec) {
  if (spec.d < 1 || spec.L < 1 || spec.p < 1) raise(ErrorKind::InvalidParams, "unilateral spec needs d, L, p >= 1");
  if (static_cast<int>(spec.Z.size()) != spec.L)
    raise(ErrorKind::ShapeError, "expected " + std::to_string(spec.L) + " weight matrices, got " +
                                     std::to_string(spec.Z.size()));
  for (int k = 1; k <= spec.L; ++k) {
    const Mat& Z = spec.Z[static_cast<std::size_t>(k) - 1];
    const Index s = ipow(spec.d, k);
    if (Z.rows() != s || Z.cols() != s)
      raise(ErrorKind::ShapeError, "Z_" + std::to_string(k) + " must be " + std::to_string(s) + " x " + std::to_string(s));
    if (!all_finite(Z)) raise(ErrorKind::ParseError, "Z_" + std::to_string(k) + " has non-finite entries");
  }
}

void validate(const BilateralSpec& spec) {
  if (spec.n < 1 || spec.M < 1) raise(ErrorKind::InvalidParams, "bilateral spec needs n, M >= 1");
  if (static_cast<Index>(spec.w.size()) != spec.n)
    raise(ErrorKind::ShapeError, "weight table needs " + std::to_string(spec.n) + " rows");
  for (const auto& row : spec.w) {
    if (static_cast<int>(row.size()) != 2 * spec.M + 1)
      raise(ErrorKind::ShapeError, "each weight row needs " + std::to_string(2 * spec.M + 1) + " entries");
    for (double x : row)
      if (!std::isfinite(x)) raise(ErrorKind::ParseError, "non-finite weight");
  }
}

Index level_offset(const UnilateralSpec& spec, int k) {
  Index off = 0;
  for (int j = 0; j < k; ++j) off += ipow(spec.d, j) * spec.p;
  return off;
}

Index unilateral_dim(const UnilateralSpec& spec) { return level_offset(spec, spec.L + 1); }

Representation build_unilateral_shift(const UnilateralSpec& spec, const TolerancePolicy& pol) {
  validate(spec);
  const Index m = unilateral_dim(spec), d = spec.d, p = spec.p;
  if (d * m > static_cast<Index>(pol.max_columns))
    raise(ErrorKind::BudgetExceeded, "unilateral shift needs " + std::to_string(d * m) + " columns");
  Mat V = Mat::Zero(m, d * m);
  std::vector<Index> boundary;
  for (int k = 0; k <= spec.L; ++k) {
    const Index dk = ipow(d, k), off = level_offset(spec, k);
    for (Index r = 0; r < d; ++r)
      for (Index eta = 0; eta < dk; ++eta)
        for (Index c = 0; c < p; ++c) {
          const Index col = r * m + off + eta * p + c;
          if (k == spec.L) {
            boundary.push_back(col);
            continue;
          }
          const Mat& Z = spec.Z[static_cast<std::size_t>(k)];
          const Index next = level_offset(spec, k + 1);
          for (Index s = 0; s < dk * d; ++s) V(next + s * p + c, col) = Z(s, r * dk + eta);
        }
  }
  Representation rep(d, m, V);
  std::sort(boundary.begin(), boundary.end());
  rep.boundary = std::move(boundary);
  rep.safe_depth = spec.L;
  return rep;
}

Mat z_product(const UnilateralSpec& spec, int n) {
  if (n < 0 || n > spec.L) raise(ErrorKind::InvalidParams, "z_product needs 0 <= n <= L");
  const Index size = ipow(spec.d, n);
  Mat out = Mat::Identity(size, size);
  for (int j = 0; j < n; ++j) out = out * block_repeat(ipow(spec.d, j), spec.Z[static_cast<std::size_t>(n - j) - 1]);
  return out;
}

UnilateralConditionReport check_unilateral_weight_condition(const UnilateralSpec& spec, const std::vector<double>& d_seq,
                                                            int k_max, int n_max, const TolerancePolicy& pol) {
  validate(spec);
  UnilateralConditionReport rpt;
  rpt.gamma_hypothesis = true;
  for (int k = 1; k <= spec.L; ++k) {
    const Mat& Z = spec.Z[static_cast<std::size_t>(k) - 1];
    if (rank_info(Z, pol).rank < Z.rows()) raise(ErrorKind::NotInvertible, "Z_" + std::to_string(k) + " is singular");
    double g = reduced_min_modulus(Z, pol);
    rpt.gamma_z.push_back(g);
    if (g < 1.0 - 1e-10) rpt.gamma_hypothesis = false;
  }
  rpt.holds = true;
  for (int k = 1; k <= k_max; ++k) {
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      if (k + n > spec.L || ipow(spec.d, k + n) > static_cast<Index>(pol.max_columns)) {
        ++rpt.skipped;
        continue;
      }
      ++rpt.covered;
      const Mat Zn = z_product(spec, n);
      const Mat inner = block_repeat(ipow(spec.d, k), Zn).inverse();
      const Mat Zkn = z_product(spec, k + n);
      const Mat one = block_repeat(spec.d, Zn).inverse();
      const Mat Z1n = z_product(spec, 1 + n);
      const Index N = ipow(spec.d, k + n);
      const Mat I = Mat::Identity(N, N);
      Mat C = inner.adjoint() * Zkn.adjoint() * Zkn * inner - I;
      Mat G1 = one.adjoint() * Z1n.adjoint() * Z1n * one;
      Mat B = block_repeat(ipow(spec.d, k - 1), G1) - I;
      Multiplier mu = minimal_psd_multiplier(B, C, pol, std::max(opnorm(B), opnorm(C)));
      UnilateralPair pr;
      pr.k = k;
      pr.n = n;
      pr.minimal_d = mu.value;
      pr.psd_residual = mu.residual;
      if (static_cast<std::size_t>(k) <= d_seq.size()) {
        double dk = d_seq[static_cast<std::size_t>(k) - 1];
        pr.psd_residual = min_eigenvalue(Mat(dk * B - C));
        pr.supplied_ok = pr.psd_residual >= -pol.psd * std::max({1.0, std::abs(dk) * opnorm(B), opnorm(C)});
        if (!pr.supplied_ok) rpt.holds = false;
      }
      worst = std::max(worst, mu.value);
      rpt.pairs.push_back(pr);
    }
    rpt.minimal_d.push_back(worst);
    if (static_cast<std::size_t>(k) > d_seq.size() && !std::isfinite(worst)) rpt.holds = false;
  }
  return rpt;
}

BilateralBuild build_bilateral_shift(const BilateralSpec& spec, const TolerancePolicy& pol) {
  validate(spec);
  const Index m = 2 * spec.M + 1, n = spec.n;
  if (n * m > static_cast<Index>(pol.max_columns))
    raise(ErrorKind::BudgetExceeded, "bilateral shift needs " + std::to_string(n * m) + " columns");
  Mat V = Mat::Zero(m, n * m);
  BilateralBuild out;
  std::vector<Index> boundary;
  for (Index i = 1; i <= n; ++i)
    for (long mm = -spec.M; mm <= spec.M; ++mm) {
      const Index col = (i - 1) * m + (mm + spec.M);
      IndexMapEntry e{i, mm, static_cast<long>(i) + static_cast<long>(n) * mm, false};
      e.in_window = spec.in_window(e.target);
      const double w = spec.weight(i, mm);
      if (e.in_window)
        V(e.target + spec.M, col) = w;
      else if (w != 0.0)
        boundary.push_back(col);
      out.g.push_back(e);
    }
  out.rep = Representation(n, m, V);
  out.rep.boundary = std::move(boundary);
  out.rep.safe_depth = spec.M;
  return out;
}

void check_condition_i(const BilateralSpec& spec) {
  validate(spec);
  for (Index i = 1; i <= spec.n; ++i)
    for (long m = -spec.M; m <= spec.M; ++m) {
      const double w = spec.weight(i, m);
      const bool ok = m < 0 ? w == 1.0 : (m == 0 ? w == 0.0 : w >= 1.0);
      if (!ok)
        raise(ErrorKind::ConditionIViolated,
              "w(" + std::to_string(i) + "," + std::to_string(m) + ") = " + std::to_string(w));
    }
}

BilateralConditionReport check_bilateral_weight_condition(const BilateralSpec& spec, const std::vector<double>& d_seq,
                                                          int k_max, ProductMode mode) {
  check_condition_i(spec);
  BilateralConditionReport rpt;
  rpt.holds = true;
  const Index n = spec.n;
  for (int k = 1; k <= k_max; ++k) {
    double need = 0.0;
    const bool supplied = static_cast<std::size_t>(k) <= d_seq.size();
    const double dk = supplied ? d_seq[static_cast<std::size_t>(k) - 1] : 0.0;
    std::vector<Index> tuple(static_cast<std::size_t>(k), 1);
    const long total = static_cast<long>(ipow(n, k));
    for (long code = 0; code < total; ++code) {
      long c = code;
      for (int l = k - 1; l >= 0; --l) {
        tuple[static_cast<std::size_t>(l)] = 1 + c % n;
        c /= n;
      }
      for (long m = -spec.M; m <= spec.M; ++m) {
        if (m == 0) continue;
        // The orbit visits m, then i_k + n m, then i_{k-1} + n(i_k + n m), ...
        long idx = m;
        double prod = 1.0;
        bool inside = true;
        for (int q = 0; q < k; ++q) {
          if (!spec.in_window(idx)) {
            inside = false;
            break;
          }
          const Index i = tuple[static_cast<std::size_t>(k - 1 - q)];
          const double w = spec.weight(i, idx);
          prod *= w * w;
          idx = static_cast<long>(i) + static_cast<long>(n) * idx;
        }
        if (!inside) {
          ++rpt.skipped;
          continue;
        }
        ++rpt.checked;
        const double wk = spec.weight(tuple.back(), m);
        if (mode == ProductMode::as_printed) prod *= wk * wk;
        const double lhs = prod - 1.0;
        const double mult = wk * wk - 1.0;
        const double slack = 1e-12 * std::max(1.0, std::abs(lhs));
        if (mult > 1e-14) {
          need = std::max(need, lhs / mult);
        } else if (lhs > slack) {
          need = kInfeasible;
        }
        const double rhs = (supplied ? dk : need) * mult;
        if (lhs > rhs + slack * std::max(1.0, std::abs(rhs))) {
          rpt.violations.push_back({tuple, m, lhs, rhs});
          rpt.holds = false;
        }
      }
    }
    rpt.minimal_d.push_back(need);
    if (!std::isfinite(need) && !supplied) rpt.holds = false;
  }
  return rpt;
}

namespace {

PipelineResult run_common(const std::string& kind, Representation rep, const TolerancePolicy& pol) {
  PipelineResult r;
  r.kind = kind;
  r.rep = std::move(rep);
  r.regularity = is_regular(r.rep, pol);
  r.gamma = gamma(r.rep, pol);
  r.wold = wold_decompose(r.rep, {}, r.regularity.horizon, pol, false);
  r.growth = r.wold.growth;
  if (r.growth.levels.empty())
    r.growth = check_growth(r.rep, {}, growth_horizon(r.rep, r.regularity.horizon), pol);
  for (const auto& f : r.wold.failed_preconditions) r.notes.push_back("precondition failed: " + f);
  if (r.rep.has_boundary()) r.notes.push_back("boundary: verdicts use the interior of the truncated model");
  return r;
}

}  // namespace

PipelineResult shift_pipeline(const UnilateralSpec& spec, const TolerancePolicy& pol) {
  PipelineResult r = run_common("unilateral", build_unilateral_shift(spec, pol), pol);
  auto cond = check_unilateral_weight_condition(spec, {}, spec.L, spec.L, pol);
  r.condition_holds = cond.holds && cond.gamma_hypothesis;
  const bool rinf_zero = r.wold.Rinf.is_zero();
  const bool gws = r.wold.bracketW.dim() == r.rep.m;
  r.assertions_hold = !r.condition_holds || (rinf_zero && gws);
  if (!r.condition_holds) r.notes.push_back("weight inequality or γ(Z_k) >= 1 fails; assertions not applied");
  return r;
}

PipelineResult shift_pipeline(const BilateralSpec& spec, const TolerancePolicy& pol) {
  PipelineResult r = run_common("bilateral", build_bilateral_shift(spec, pol).rep, pol);
  try {
    auto cond = check_bilateral_weight_condition(spec, {}, std::max(1, spec.M));
    r.condition_holds = cond.holds;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ConditionIViolated) throw;
    r.notes.push_back(e.what());
    r.condition_holds = false;
  }
  r.assertions_hold = !r.condition_holds || (r.wold.reduces && r.wold.unitary_restriction);
  if (!r.condition_holds) r.notes.push_back("weight conditions fail; assertions not applied");
  return r;
}

}  // namespace woldkit
