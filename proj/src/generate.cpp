// SPDX-License-Identifier: Apache-2.0
#include "woldkit/generate.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <sstream>

namespace woldkit {

Mat random_matrix(Rng& rng, Index rows, Index cols) {
  Mat A(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) A(r, c) = rng.cnormal();
  return A;
}

Mat random_unitary(Rng& rng, Index n) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(rng, n, n));
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR();
  for (Index i = 0; i < n; ++i) {
    const double a = std::abs(R(i, i));
    if (a > 0) Q.col(i) *= R(i, i) / a;
  }
  return Q;
}

Mat random_rank_matrix(Rng& rng, Index rows, Index cols, Index rank) {
  rank = std::clamp<Index>(rank, 0, std::min(rows, cols));
  const Mat U = random_unitary(rng, rows).leftCols(rank);
  const Mat W = random_unitary(rng, cols).leftCols(rank);
  Eigen::VectorXd s(rank);
  for (Index i = 0; i < rank; ++i) s(i) = rng.uniform(0.5, 2.0);
  return U * s.cast<cplx>().asDiagonal() * W.adjoint();
}

Mat random_coisometry(Rng& rng, Index m, Index cols) {
  return random_unitary(rng, cols).topRows(m);
}

Mat nearest_unitary(const Mat& X) {
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Representation random_representation(Rng& rng, Index d, Index m, Index rank) {
  if (d < 1 || m < 1) raise(ErrorKind::InvalidParams, "d and m must be positive");
  if (rank < 0) return Representation(d, m, random_matrix(rng, m, d * m));
  return Representation(d, m, random_rank_matrix(rng, m, d * m, rank));
}

Representation random_left_invertible(Rng& rng, Index d, Index m, double s_min, double s_max) {
  if (d != 1) raise(ErrorKind::InvalidParams, "a left-invertible m x (d m) matrix needs d = 1");
  if (m < 1 || !(s_min > 0) || s_max < s_min) raise(ErrorKind::InvalidParams, "bad left-invertible parameters");
  const Mat U = random_unitary(rng, m), W = random_unitary(rng, m);
  Eigen::VectorXd s(m);
  for (Index i = 0; i < m; ++i) s(i) = rng.uniform(s_min, s_max);
  return Representation(1, m, U * s.cast<cplx>().asDiagonal() * W.adjoint());
}

Representation random_expansive(Rng& rng, Index d, Index m) {
  if (d != 1) raise(ErrorKind::InvalidParams, "an expansive m x (d m) matrix needs d = 1");
  return random_left_invertible(rng, d, m, 1.0, 2.5);
}

Representation random_concave(Rng& rng, Index d, Index m, double perturbation) {
  if (d != 1) raise(ErrorKind::InvalidParams, "a concave m x (d m) matrix needs d = 1");
  if (m < 1) raise(ErrorKind::InvalidParams, "m must be positive");
  const Mat U = random_unitary(rng, m);
  // Hermitian perturbation of the generator, then back onto the unitaries.
  Mat Hm = random_matrix(rng, m, m);
  Hm = hermitian_part(Hm);
  const Mat X = U * (Mat::Identity(m, m) + perturbation * Hm);
  return Representation(1, m, nearest_unitary(X));
}

UnilateralSpec random_unilateral_spec(Rng& rng, Index d, int L, Index p, WeightKind kind) {
  if (d < 1 || L < 1 || p < 1) raise(ErrorKind::InvalidParams, "d, L, p must be positive");
  UnilateralSpec s;
  s.d = d;
  s.L = L;
  s.p = p;
  for (int k = 1; k <= L; ++k) {
    const Index n = ipow(d, k);
    switch (kind) {
      case WeightKind::unit: s.Z.push_back(random_unitary(rng, n)); break;
      case WeightKind::scaled: s.Z.push_back(rng.uniform(1.1, 2.0) * random_unitary(rng, n)); break;
      case WeightKind::diagonal: {
        Eigen::VectorXd w(n);
        for (Index i = 0; i < n; ++i) w(i) = rng.uniform(1.1, 2.0);
        s.Z.push_back(w.cast<cplx>().asDiagonal());
        break;
      }
    }
  }
  return s;
}

BilateralSpec random_bilateral_spec(Rng& rng, Index n, int M, bool unit) {
  if (n < 1 || M < 1) raise(ErrorKind::InvalidParams, "n and M must be positive");
  BilateralSpec s;
  s.n = n;
  s.M = M;
  for (Index i = 1; i <= n; ++i) {
    std::vector<double> row;
    for (int m = -M; m <= M; ++m) row.push_back(m < 0 ? 1.0 : (m == 0 ? 0.0 : (unit ? 1.0 : rng.uniform(1.0, 2.0))));
    s.w.push_back(std::move(row));
  }
  return s;
}

BlockInstance random_block_instance(Rng& rng, Index d) {
  if (d < 1) raise(ErrorKind::InvalidParams, "d must be positive");
  const int L = d == 1 ? static_cast<int>(rng.integer(2, 4)) : 2;
  const Representation shift = build_unilateral_shift(random_unilateral_spec(rng, d, L, 1, WeightKind::unit));
  const Index um = rng.integer(1, 3);
  const Representation unitary(d, um, d == 1 ? random_unitary(rng, um) : random_coisometry(rng, um, d * um));
  const int Lw = d == 1 ? static_cast<int>(rng.integer(1, 3)) : 1;
  const WeightKind wk = rng.integer(0, 1) == 0 ? WeightKind::scaled : WeightKind::diagonal;
  const Representation weighted = build_unilateral_shift(random_unilateral_spec(rng, d, Lw, 1, wk));

  BlockInstance out;
  out.rep = block_sum(block_sum(shift, unitary), weighted);
  out.blocks.push_back({"shift", 0, shift.m, true});
  out.blocks.push_back({"unitary", shift.m, um, false});
  out.blocks.push_back({"weighted", shift.m + um, weighted.m, true});
  return out;
}

Params::Params(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) raise(ErrorKind::InvalidParams, "expected key=value, got \"" + item + "\"");
    kv_[item.substr(0, eq)] = item.substr(eq + 1);
  }
}

long Params::integer(const std::string& key, long fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    raise(ErrorKind::InvalidParams, key + " must be an integer");
  }
}

double Params::real(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    raise(ErrorKind::InvalidParams, key + " must be a number");
  }
}

std::string Params::text(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

Instance generate(const std::string& kind, const Params& params, std::uint64_t seed) {
  Rng rng(seed);
  const Index d = params.integer("d", 1), m = params.integer("m", 2);
  if (kind == "random") return random_representation(rng, d, m, params.integer("rank", -1));
  if (kind == "left-invertible")
    return random_left_invertible(rng, d, m, params.real("smin", 1.0), params.real("smax", 3.0));
  if (kind == "expansive") return random_expansive(rng, d, m);
  if (kind == "concave") return random_concave(rng, d, m, params.real("eps", 0.3));
  if (kind == "unilateral") {
    const std::string w = params.text("weights", "unit");
    WeightKind wk = WeightKind::unit;
    if (w == "scaled") wk = WeightKind::scaled;
    else if (w == "diagonal") wk = WeightKind::diagonal;
    else if (w != "unit") raise(ErrorKind::InvalidParams, "weights must be unit, scaled or diagonal");
    return random_unilateral_spec(rng, d, static_cast<int>(params.integer("L", 3)), params.integer("p", 1), wk);
  }
  if (kind == "bilateral") {
    const std::string w = params.text("weights", "unit");
    if (w != "unit" && w != "random") raise(ErrorKind::InvalidParams, "weights must be unit or random");
    return random_bilateral_spec(rng, params.integer("n", 1), static_cast<int>(params.integer("M", 3)), w == "unit");
  }
  if (kind == "block") return random_block_instance(rng, d).rep;
  raise(ErrorKind::InvalidParams, "unknown kind \"" + kind + "\"");
}

}  // namespace woldkit
