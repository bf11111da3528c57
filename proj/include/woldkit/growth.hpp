// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "woldkit/representation.hpp"

namespace woldkit {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

double gamma(const Representation& rep, const TolerancePolicy& pol = {});
bool gamma_at_least_one(const Representation& rep, const TolerancePolicy& pol = {});

// D_Ṽ = (Ṽ*Ṽ − Ṽ†Ṽ)^{1/2}, (d m) x (d m). Throws NotPSD when γ(Ṽ) < 1.
Mat defect_operator(const Representation& rep, const TolerancePolicy& pol = {});

struct Multiplier {
  bool feasible = false;
  double value = kInfeasible;  // smallest t >= 0 with tB − C >= 0
  double residual = 0.0;       // λ_min(tB − C) at the returned t
};
// B, C Hermitian of equal size; `scale` sets the PSD slack.
Multiplier minimal_psd_multiplier(const Mat& B, const Mat& C, const TolerancePolicy& pol, double scale = 1.0);

struct GrowthLevel {
  int m = 0;
  bool feasible = false;
  double minimal_d = kInfeasible;
  double psd_residual = 0.0;  // λ_min(M(d)) at the supplied d, else at minimal_d
  bool has_supplied = false;
  double supplied_d = 0.0;
  bool supplied_ok = false;
};

struct GrowthReport {
  int horizon = 0;
  std::vector<GrowthLevel> levels;
  std::vector<double> partial_sums;  // Σ_{2 ≤ j ≤ m} 1/d_j over the used sequence
  std::string pattern;               // "bounded", "geometric", "subgeometric", "unknown"
  std::string divergence_note;

  bool all_feasible() const;
  // Supplied values hold where given; minimal values exist elsewhere.
  bool holds() const;
};

// M(d_m) = d_m (A*A − P) + P − Ṽ_m*Ṽ_m with A = I_{E^{⊗m−1}} ⊗ Ṽ and P = I_{E^{⊗m−1}} ⊗ Ṽ†Ṽ.
Mat growth_operator(const Representation& rep, int m, double dm, const TolerancePolicy& pol = {});
GrowthReport check_growth(const Representation& rep, const std::vector<double>& d_seq, int m_max,
                          const TolerancePolicy& pol = {});
std::vector<double> minimal_growth_sequence(const Representation& rep, int m_max, const TolerancePolicy& pol = {});

// Largest level m ≤ horizon whose d^m m operator stays within dense_dim.
int growth_horizon(const Representation& rep, int horizon, Index dense_dim = 256);

bool check_concave(const Representation& rep, const TolerancePolicy& pol = {});
bool check_expansive(const Representation& rep, const TolerancePolicy& pol = {});
bool gamma_product_bound_check(const Representation& rep, int n_max, const TolerancePolicy& pol = {});

// Two equivalent forms of the growth inequality with constant c: over all of E^{⊗k} ⊗ H
// and restricted to E^{⊗k−1} ⊗ N(Ṽ)^⊥.
struct FormVerdicts {
  bool full = false;
  bool restricted = false;
  double full_min = 0.0;
  double restricted_min = 0.0;
};
FormVerdicts growth_form_verdicts(const Representation& rep, int k, double dk, double c,
                                  const TolerancePolicy& pol = {});

// λ_min of I + k (A_k*A_k − I) − Ṽ_k*Ṽ_k.
double concave_level_margin(const Representation& rep, int k, const TolerancePolicy& pol = {});

// ‖Σ_i X_i*X_i − I‖ for the orthogonal pieces of h under P_W, D_Ṽ and Ṽ^{†(n)}.
double norm_identity_residual(const Representation& rep, int n, const TolerancePolicy& pol = {});
// ‖(I − Ṽ_nṼ^{†(n)}) − Σ Ṽ_i(I ⊗ P_W)Ṽ^{†(i)}‖
double range_telescoping_residual(const Representation& rep, int n, const TolerancePolicy& pol = {});
// ‖(I − Ṽ^{†(n)}Ṽ_n) − Σ (I ⊗ Ṽ^{†(i)})(I ⊗ P_{W†})(I ⊗ Ṽ_i)‖
double kernel_telescoping_residual(const Representation& rep, int n, const TolerancePolicy& pol = {});

}  // namespace woldkit
