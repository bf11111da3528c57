// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "woldkit/wold.hpp"

namespace woldkit {

// Fock shift truncated at level L; H = ⊕_{k=0}^{L} E^{⊗k} ⊗ C^p.
struct UnilateralSpec {
  Index d = 1;
  int L = 1;
  Index p = 1;
  std::vector<Mat> Z;  // Z[k-1] = Z_k of size d^k x d^k, k = 1..L
};

// Bilateral shift on span{e_j : |j| ≤ M}, S_i e_m = w_{i,m} e_{i+nm}.
struct BilateralSpec {
  Index n = 1;
  int M = 1;
  std::vector<std::vector<double>> w;  // w[i-1][m+M]

  double weight(Index i, long m) const { return w[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(m + M)]; }
  bool in_window(long j) const { return j >= -M && j <= M; }
};

void validate(const UnilateralSpec& spec);
void validate(const BilateralSpec& spec);

// Offset of level k inside H.
Index level_offset(const UnilateralSpec& spec, int k);
Index unilateral_dim(const UnilateralSpec& spec);

Representation build_unilateral_shift(const UnilateralSpec& spec, const TolerancePolicy& pol = {});
// Z^{(n)} = Z_n (I_E ⊗ Z_{n−1}) ⋯ (I_{E^{⊗n−1}} ⊗ Z_1); n = 0 gives the 1 x 1 identity.
Mat z_product(const UnilateralSpec& spec, int n);

struct UnilateralPair {
  int k = 0;
  int n = 0;
  double minimal_d = kInfeasible;
  double psd_residual = 0.0;  // at the supplied d_k when given
  bool supplied_ok = true;
};
struct UnilateralConditionReport {
  std::vector<UnilateralPair> pairs;
  std::vector<double> minimal_d;  // per k, maximum over n
  std::vector<double> gamma_z;    // γ(Z_k)
  bool gamma_hypothesis = false;  // every γ(Z_k) ≥ 1
  bool holds = false;             // supplied values hold, or every k is feasible
  int covered = 0;
  int skipped = 0;
};
UnilateralConditionReport check_unilateral_weight_condition(const UnilateralSpec& spec,
                                                            const std::vector<double>& d_seq, int k_max,
                                                            int n_max, const TolerancePolicy& pol = {});

struct IndexMapEntry {
  Index i = 0;
  long m = 0;
  long target = 0;
  bool in_window = false;
};
struct BilateralBuild {
  Representation rep;
  std::vector<IndexMapEntry> g;
};
BilateralBuild build_bilateral_shift(const BilateralSpec& spec, const TolerancePolicy& pol = {});

enum class ProductMode { orbit, as_printed };

struct BilateralViolation {
  std::vector<Index> tuple;
  long m = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};
struct BilateralConditionReport {
  std::vector<double> minimal_d;  // per k
  std::vector<BilateralViolation> violations;
  long checked = 0;
  long skipped = 0;  // tuples with an intermediate index outside the window
  bool holds = false;
};
// Throws ConditionIViolated naming (i, m) when the sign pattern of the weights is wrong.
void check_condition_i(const BilateralSpec& spec);
BilateralConditionReport check_bilateral_weight_condition(const BilateralSpec& spec, const std::vector<double>& d_seq,
                                                          int k_max, ProductMode mode = ProductMode::orbit);

struct PipelineResult {
  std::string kind;
  Representation rep;
  RegularityReport regularity;
  double gamma = 0.0;
  GrowthReport growth;
  WoldResult wold;
  bool condition_holds = false;
  bool assertions_hold = false;
  std::vector<std::string> notes;
};
PipelineResult shift_pipeline(const UnilateralSpec& spec, const TolerancePolicy& pol = {});
PipelineResult shift_pipeline(const BilateralSpec& spec, const TolerancePolicy& pol = {});

}  // namespace woldkit
