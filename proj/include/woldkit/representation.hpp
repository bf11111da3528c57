// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "woldkit/subspace.hpp"

namespace woldkit {

// Ṽ : E ⊗ H -> H as an m x (d*m) matrix. Column index of ξ_a ⊗ h_b is a*m + b.
struct Representation {
  Index d = 1;
  Index m = 1;
  Mat V;
  std::map<std::string, Mat> sigma;  // m x m images of generators
  std::map<std::string, Mat> phi;    // d x d images of generators
  // Columns of E ⊗ H whose image was dropped by a finite truncation, and the
  // iteration depth up to which the truncated model is faithful (0 = no limit).
  std::vector<Index> boundary;
  int safe_depth = 0;

  Representation() = default;
  Representation(Index d_, Index m_, Mat v);

  bool has_boundary() const noexcept { return !boundary.empty(); }
  Index cols() const noexcept { return d * m; }
};

// kron(I_{d^k}, A)
Mat tensor_lift(int k, const Mat& A, Index d, const TolerancePolicy& pol = {});

// Ṽ_n of shape m x (d^n m); n = 0 gives the identity on H.
Mat iterate_v(const Representation& rep, int n, const TolerancePolicy& pol = {});

// Ṽ_1 .. Ṽ_{n_max}, built incrementally.
std::vector<Mat> iterate_v_sequence(const Representation& rep, int n_max, const TolerancePolicy& pol = {});

// Ṽ_a · (I_{E^{⊗a}} ⊗ X) for X of shape m x (d^b m), giving Ṽ_{a+b} when X = Ṽ_b.
Mat compose_after(const Mat& Va, Index d, Index m, const Mat& X);

struct CovarianceReport {
  bool holds = true;
  std::map<std::string, double> residuals;
};
CovarianceReport check_covariance(const Representation& rep);

// Largest n with d^n * m within the column budget.
int budget_depth(Index d, Index m, const TolerancePolicy& pol);
void require_budget(Index d, int n, Index m, const TolerancePolicy& pol, const char* what);

// Direct sum of representations over the same E. The H coordinates of b follow those of a.
Representation block_sum(const Representation& a, const Representation& b);

// Subspace of H spanned by coordinates [offset, offset+len).
Subspace coordinate_block(Index ambient, Index offset, Index len);

}  // namespace woldkit
