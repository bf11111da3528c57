// SPDX-License-Identifier: Apache-2.0
#include "woldkit/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "woldkit/structure.hpp"

namespace woldkit {

double gamma(const Representation& rep, const TolerancePolicy& pol) { return reduced_min_modulus(rep.V, pol); }

bool gamma_at_least_one(const Representation& rep, const TolerancePolicy& pol) {
  return gamma(rep, pol) >= 1.0 - 1e-10;
}

namespace {

Mat defect_square(const Representation& rep, const TolerancePolicy& pol) {
  return hermitian_part(Mat(rep.V.adjoint() * rep.V - pinv(rep.V, pol) * rep.V));
}

double max_abs(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

}  // namespace

Mat defect_operator(const Representation& rep, const TolerancePolicy& pol) {
  return psd_sqrt(defect_square(rep, pol), pol);
}

Multiplier minimal_psd_multiplier(const Mat& B0, const Mat& C0, const TolerancePolicy& pol, double scale) {
  if (B0.rows() != C0.rows() || B0.cols() != C0.cols() || B0.rows() != B0.cols())
    raise(ErrorKind::DimensionMismatch, "multiplier needs square matrices of equal size");
  const Mat B = hermitian_part(B0), C = hermitian_part(C0);
  Multiplier out;
  if (B.size() == 0) {
    out.feasible = true;
    out.value = 0.0;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(B);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Mat& U = es.eigenvectors();
  Eigen::SelfAdjointEigenSolver<Mat> ec(C, Eigen::EigenvaluesOnly);
  const double s = std::max({1.0, scale, lam.cwiseAbs().maxCoeff(), ec.eigenvalues().cwiseAbs().maxCoeff()});
  const double tol = pol.psd * s;
  auto f = [&](double t) { return min_eigenvalue(Mat(t * B - C)); };
  auto accept = [&](double t) {
    out.feasible = true;
    out.value = t;
    out.residual = f(t);
    return out;
  };

  if (lam(0) < -tol) {
    // t ↦ λ_min(tB − C) is concave; locate its peak, then the first crossing of −tol.
    if (f(0.0) >= -tol) return accept(0.0);
    double hi = 1.0;
    while (hi < 1e12 && f(hi) > f(hi / 2)) hi *= 2;
    double a = 0.0, b = hi;
    for (int it = 0; it < 200; ++it) {
      double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
      if (f(m1) < f(m2)) a = m1; else b = m2;
    }
    const double peak = (a + b) / 2;
    if (f(peak) < -tol) {
      out.residual = f(peak);
      return out;
    }
    double lo = 0.0, up = peak;
    for (int it = 0; it < 200; ++it) {
      double mid = (lo + up) / 2;
      if (f(mid) >= -tol) up = mid; else lo = mid;
    }
    return accept(up);
  }

  std::vector<Index> r_idx, k_idx;
  for (Index i = 0; i < lam.size(); ++i) (lam(i) > tol ? r_idx : k_idx).push_back(i);
  Mat R(B.rows(), static_cast<Index>(r_idx.size())), K(B.rows(), static_cast<Index>(k_idx.size()));
  for (std::size_t j = 0; j < r_idx.size(); ++j) R.col(static_cast<Index>(j)) = U.col(r_idx[j]);
  for (std::size_t j = 0; j < k_idx.size(); ++j) K.col(static_cast<Index>(j)) = U.col(k_idx[j]);

  Mat Kneg(B.rows(), 0);
  Eigen::VectorXd neg;
  if (K.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> ek(hermitian_part(Mat(K.adjoint() * C * K)));
    const Eigen::VectorXd& mu = ek.eigenvalues();
    if (mu(mu.size() - 1) > tol) {
      out.residual = -mu(mu.size() - 1);
      return out;
    }
    Mat Kq = K * ek.eigenvectors();
    std::vector<Index> zero_idx, neg_idx;
    for (Index i = 0; i < mu.size(); ++i) (mu(i) < -tol ? neg_idx : zero_idx).push_back(i);
    Mat K0(B.rows(), static_cast<Index>(zero_idx.size()));
    for (std::size_t j = 0; j < zero_idx.size(); ++j) K0.col(static_cast<Index>(j)) = Kq.col(zero_idx[j]);
    Kneg.resize(B.rows(), static_cast<Index>(neg_idx.size()));
    neg.resize(static_cast<Index>(neg_idx.size()));
    for (std::size_t j = 0; j < neg_idx.size(); ++j) {
      Kneg.col(static_cast<Index>(j)) = Kq.col(neg_idx[j]);
      neg(static_cast<Index>(j)) = mu(neg_idx[j]);
    }
    if (R.cols() > 0 && K0.cols() > 0 && opnorm(Mat(R.adjoint() * C * K0)) > pol.sub * s) {
      out.residual = f(0.0);
      return out;
    }
  }
  if (R.cols() == 0) return accept(0.0);

  Mat G = R.adjoint() * C * R;
  if (Kneg.cols() > 0) {
    Mat CRK = R.adjoint() * C * Kneg;
    G += CRK * (-neg).cwiseInverse().asDiagonal() * CRK.adjoint();
  }
  Eigen::VectorXd inv_sqrt(static_cast<Index>(r_idx.size()));
  for (std::size_t j = 0; j < r_idx.size(); ++j) inv_sqrt(static_cast<Index>(j)) = 1.0 / std::sqrt(lam(r_idx[j]));
  Mat H = inv_sqrt.asDiagonal() * G * inv_sqrt.asDiagonal();
  return accept(std::max(0.0, max_eigenvalue(H)));
}

Mat growth_operator(const Representation& rep, int m, double dm, const TolerancePolicy& pol) {
  if (m < 1) raise(ErrorKind::InvalidParams, "growth levels start at m = 1");
  require_budget(rep.d, m, rep.m, pol, "growth operator");
  const Index copies = ipow(rep.d, m - 1);
  Mat P = block_repeat(copies, Mat(pinv(rep.V, pol) * rep.V));
  Mat Vm = iterate_v(rep, m, pol);
  return hermitian_part(Mat(dm * block_repeat(copies, defect_square(rep, pol)) + P - Vm.adjoint() * Vm));
}

bool GrowthReport::all_feasible() const {
  return std::all_of(levels.begin(), levels.end(), [](const GrowthLevel& l) { return l.feasible; });
}

bool GrowthReport::holds() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const GrowthLevel& l) { return l.has_supplied ? l.supplied_ok : l.feasible; });
}

namespace {

std::string classify(const std::vector<double>& d) {
  std::vector<double> v;
  for (double x : d)
    if (std::isfinite(x) && x > 0) v.push_back(x);
  if (v.size() < 3) return "unknown";
  if (v.back() <= v.front() * (1 + 1e-9) + 1e-12) return "bounded";
  double min_ratio = kInfeasible;
  for (std::size_t i = 1; i < v.size(); ++i) min_ratio = std::min(min_ratio, v[i] / v[i - 1]);
  if (min_ratio >= 1.2) return "geometric";
  return "subgeometric";
}

}  // namespace

GrowthReport check_growth(const Representation& rep, const std::vector<double>& d_seq, int m_max,
                          const TolerancePolicy& pol) {
  if (m_max < 1) raise(ErrorKind::InvalidParams, "growth horizon must be positive");
  require_budget(rep.d, m_max, rep.m, pol, "growth check");
  GrowthReport rpt;
  rpt.horizon = m_max;
  const Mat D2 = defect_square(rep, pol);
  const Mat Pv = pinv(rep.V, pol) * rep.V;
  const double vn = std::max(1.0, opnorm(rep.V));
  auto seq = iterate_v_sequence(rep, m_max, pol);
  std::vector<double> used;
  for (int m = 1; m <= m_max; ++m) {
    const Index copies = ipow(rep.d, m - 1);
    Mat B = block_repeat(copies, D2);
    Mat P = block_repeat(copies, Pv);
    const Mat& Vm = seq[static_cast<std::size_t>(m) - 1];
    Mat C = hermitian_part(Mat(Vm.adjoint() * Vm - P));
    const double scale = std::pow(vn, 2 * m);
    Multiplier mu = minimal_psd_multiplier(B, C, pol, scale);
    GrowthLevel lv;
    lv.m = m;
    lv.feasible = mu.feasible;
    lv.minimal_d = mu.value;
    lv.psd_residual = mu.residual;
    if (static_cast<std::size_t>(m) <= d_seq.size()) {
      lv.has_supplied = true;
      lv.supplied_d = d_seq[static_cast<std::size_t>(m) - 1];
      lv.psd_residual = min_eigenvalue(Mat(lv.supplied_d * B - C));
      lv.supplied_ok = lv.supplied_d >= 0 &&
                       lv.psd_residual >= -pol.psd * std::max(scale, max_abs(lv.supplied_d, 1.0) * scale);
    }
    rpt.levels.push_back(lv);
    used.push_back(lv.has_supplied ? lv.supplied_d : lv.minimal_d);
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (j >= 1) acc += used[j] == 0.0 ? kInfeasible : 1.0 / used[j];
    rpt.partial_sums.push_back(acc);
  }
  std::vector<double> mins;
  for (const auto& l : rpt.levels) mins.push_back(l.minimal_d);
  rpt.pattern = classify(mins);
  std::ostringstream os;
  os << "partial sum of 1/d_m for 2<=m<=" << m_max << " is " << (rpt.partial_sums.empty() ? 0.0 : rpt.partial_sums.back())
     << "; minimal d_m growth looks " << rpt.pattern;
  if (rpt.pattern == "geometric") os << " (a geometric tail has a convergent reciprocal sum)";
  os << "; not a certificate";
  rpt.divergence_note = os.str();
  return rpt;
}

std::vector<double> minimal_growth_sequence(const Representation& rep, int m_max, const TolerancePolicy& pol) {
  std::vector<double> out;
  for (const auto& l : check_growth(rep, {}, m_max, pol).levels) out.push_back(l.minimal_d);
  return out;
}

int growth_horizon(const Representation& rep, int horizon, Index dense_dim) {
  int h = 0;
  while (h < horizon && ipow(rep.d, h + 1) * rep.m <= dense_dim) ++h;
  return std::max(h, 1);
}

bool check_concave(const Representation& rep, const TolerancePolicy& pol) {
  Mat A = block_repeat(rep.d, rep.V);
  Mat V2 = iterate_v(rep, 2, pol);
  const Index n = A.cols();
  Mat M = 2.0 * A.adjoint() * A - V2.adjoint() * V2 - Mat::Identity(n, n);
  return is_psd(M, pol, std::pow(std::max(1.0, opnorm(rep.V)), 4));
}

bool check_expansive(const Representation& rep, const TolerancePolicy& pol) {
  const Index n = rep.cols();
  Mat M = rep.V.adjoint() * rep.V - Mat::Identity(n, n);
  return is_psd(M, pol, std::pow(std::max(1.0, opnorm(rep.V)), 2));
}

bool gamma_product_bound_check(const Representation& rep, int n_max, const TolerancePolicy& pol) {
  if (!is_regular(rep, pol).regular()) raise(ErrorKind::NotRegular, "γ product bound needs a regular representation");
  const double g = gamma(rep, pol);
  auto seq = iterate_v_sequence(rep, n_max, pol);
  for (int n = 1; n <= n_max; ++n) {
    double lhs = reduced_min_modulus(seq[static_cast<std::size_t>(n) - 1], pol, std::pow(opnorm(rep.V), n));
    double rhs = std::pow(g, n);
    if (lhs < rhs - 1e-8 * std::max(1.0, rhs)) return false;
  }
  return true;
}

FormVerdicts growth_form_verdicts(const Representation& rep, int k, double dk, double c, const TolerancePolicy& pol) {
  if (k < 1) raise(ErrorKind::InvalidParams, "k must be positive");
  const Index copies = ipow(rep.d, k - 1);
  const Mat Vk = iterate_v(rep, k, pol);
  const Mat VkV = Vk.adjoint() * Vk;
  const Mat A = block_repeat(copies, rep.V);
  const Index n = A.cols();
  const double vn = std::max(1.0, opnorm(rep.V));
  const double scale = std::max({1.0, std::abs(dk) * vn * vn, std::abs(c), std::pow(vn, 2 * k)});

  FormVerdicts v;
  Mat full = dk * block_repeat(copies, defect_square(rep, pol)) +
             c * block_repeat(copies, Mat(pinv(rep.V, pol) * rep.V)) - VkV;
  v.full_min = min_eigenvalue(full);
  v.full = v.full_min >= -pol.psd * scale;

  Subspace dom = lift(copies, complement(kernel(rep.V, pol)));
  if (dom.is_zero()) {
    v.restricted = true;
    return v;
  }
  Mat inner = dk * (A.adjoint() * A - Mat::Identity(n, n)) + c * Mat::Identity(n, n) - VkV;
  v.restricted_min = min_eigenvalue(Mat(dom.basis().adjoint() * inner * dom.basis()));
  v.restricted = v.restricted_min >= -pol.psd * scale;
  return v;
}

double concave_level_margin(const Representation& rep, int k, const TolerancePolicy& pol) {
  const Mat A = block_repeat(ipow(rep.d, k - 1), rep.V);
  const Mat Vk = iterate_v(rep, k, pol);
  const Index n = A.cols();
  Mat M = Mat::Identity(n, n) + double(k) * (A.adjoint() * A - Mat::Identity(n, n)) - Vk.adjoint() * Vk;
  return min_eigenvalue(M);
}

double norm_identity_residual(const Representation& rep, int n, const TolerancePolicy& pol) {
  const Mat Vd = pinv(rep.V, pol);
  const Mat D = defect_operator(rep, pol);
  const Mat PW = Mat::Identity(rep.m, rep.m) - rep.V * Vd;
  Mat G = Mat::Zero(rep.m, rep.m);
  for (int i = 0; i <= n; ++i) {
    Mat T = dagger_iterate(rep, i, pol);
    if (i < n) {
      Mat X = block_repeat(ipow(rep.d, i), PW) * T;
      G += X.adjoint() * X;
    } else {
      G += T.adjoint() * T;
    }
    if (i >= 1) {
      Mat Z = block_repeat(ipow(rep.d, i - 1), D) * T;
      G += Z.adjoint() * Z;
    }
  }
  return opnorm(Mat(G - Mat::Identity(rep.m, rep.m)));
}

double range_telescoping_residual(const Representation& rep, int n, const TolerancePolicy& pol) {
  const Mat Vd = pinv(rep.V, pol);
  const Mat PW = Mat::Identity(rep.m, rep.m) - rep.V * Vd;
  Mat lhs = Mat::Identity(rep.m, rep.m) - iterate_v(rep, n, pol) * dagger_iterate(rep, n, pol);
  Mat rhs = Mat::Zero(rep.m, rep.m);
  for (int i = 0; i < n; ++i)
    rhs += iterate_v(rep, i, pol) * block_repeat(ipow(rep.d, i), PW) * dagger_iterate(rep, i, pol);
  return opnorm(Mat(lhs - rhs));
}

double kernel_telescoping_residual(const Representation& rep, int n, const TolerancePolicy& pol) {
  const Mat Vd = pinv(rep.V, pol);
  const Index dm = rep.cols();
  const Mat PWd = Mat::Identity(dm, dm) - Vd * rep.V;
  const Index N = ipow(rep.d, n) * rep.m;
  Mat lhs = Mat::Identity(N, N) - dagger_iterate(rep, n, pol) * iterate_v(rep, n, pol);
  Mat rhs = Mat::Zero(N, N);
  for (int i = 0; i < n; ++i) {
    const Index outer = ipow(rep.d, n - i);
    rhs += block_repeat(outer, dagger_iterate(rep, i, pol)) * block_repeat(ipow(rep.d, n - i - 1), PWd) *
           block_repeat(outer, iterate_v(rep, i, pol));
  }
  return opnorm(Mat(lhs - rhs));
}

}  // namespace woldkit
