// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "woldkit/growth.hpp"
#include "woldkit/structure.hpp"

namespace woldkit {

// W = N(Ṽ*)
Subspace wandering_space(const Representation& rep, const TolerancePolicy& pol = {});
// W† = N(Ṽ)
Subspace wandering_dagger(const Representation& rep, const TolerancePolicy& pol = {});

// Ṽ_n(E^{⊗n} ⊗ S), built as Ṽ(E ⊗ previous).
std::vector<Subspace> forward_translates(const Representation& rep, const Subspace& S, int n_max,
                                         const TolerancePolicy& pol = {});
bool is_wandering(const Representation& rep, const Subspace& S, int horizon, const TolerancePolicy& pol = {});
// [S]_Ṽ = ⋁_n Ṽ_n(E^{⊗n} ⊗ S)
Subspace generated_subspace(const Representation& rep, const Subspace& S, const TolerancePolicy& pol = {});

struct WoldResult {
  Subspace W;
  Subspace W_dagger;
  Subspace bracketW;
  Subspace Rinf;
  bool orthogonal = false;
  bool spans_H = false;
  bool reduces = false;
  bool unitary_restriction = false;
  bool dagger_equals_adjoint_on_Rinf = false;
  bool isometric_on_Rinf = false;
  bool fully_coisometric_on_Rinf = false;
  bool biregular = false;
  bool hyper_dagger = false;  // when set, the splitting is the unique one of its kind
  bool boundary = false;
  double projector_sum_residual = 0.0;      // ‖P_[W] + P_R∞ − I‖
  double projector_product_residual = 0.0;  // ‖P_[W] P_R∞‖
  double restriction_residual = 0.0;
  int horizon = 0;
  double gamma = 0.0;
  RegularityReport regularity;
  GrowthReport growth;
  std::vector<std::string> failed_preconditions;

  bool decomposes() const { return orthogonal && spans_H; }
};

// Throws PreconditionFailed naming the first violated hypothesis unless enforce is false,
// in which case failures are listed and the diagnostics are still computed.
WoldResult wold_decompose(const Representation& rep, const std::vector<double>& d_seq = {}, int horizon = 0,
                          const TolerancePolicy& pol = {}, bool enforce = true);

struct DualityCheck {
  bool kernels_join = false;   // [W] = ⋁ N(Ṽ^{†(n)})
  bool dual_range = false;     // [W] = R∞(Ṽ†*)^⊥
  bool holds() const { return kernels_join && dual_range; }
};
DualityCheck duality_corollary_check(const Representation& rep, int horizon = 0, const TolerancePolicy& pol = {});

struct KernelSpan {
  bool dagger_kernel_inclusion = false;  // N(Ṽ^{†(n)}) ⊆ ⋁_{i<n} Ṽ_i(E^{⊗i} ⊗ W)
  bool kernel_equality = false;          // N(Ṽ_n) = ⋁_{i<n} (I ⊗ Ṽ^{†(i)})(E^{⊗n−i−1} ⊗ W†)
  bool regular = false;
  bool holds() const { return dagger_kernel_inclusion && (!regular || kernel_equality); }
};
KernelSpan kernel_span_check(const Representation& rep, int n, const TolerancePolicy& pol = {});

struct InvariantWandering {
  Subspace W;
  bool regenerates = false;  // [W]_Ṽ = K
};
// K ⊖ Ṽ(E ⊗ K); throws NotInvariant.
InvariantWandering invariant_to_wandering(const Representation& rep, const Subspace& K, const TolerancePolicy& pol = {});

// Ṽ(Ṽ*Ṽ)^{-1}; throws NotLeftInvertible.
Representation cauchy_dual(const Representation& rep, const TolerancePolicy& pol = {});
// Ṽ†*, which agrees with the Cauchy dual when Ṽ is left invertible.
Representation dagger_dual(const Representation& rep, const TolerancePolicy& pol = {});

double intertwiner_residual(const Representation& rep, const Mat& A);
bool check_intertwiner(const Representation& rep, const Mat& A);

enum class Purity { pure, not_pure, undecided };
const char* to_string(Purity p) noexcept;

// Horizon is the largest power n for which AⁿA*ⁿ is formed (by repeated squaring).
Purity is_pure_contraction(const Mat& A, long horizon = 1L << 20, double tol = 1e-9);

struct PureEquivalence {
  Purity full = Purity::undecided;
  Purity compressed = Purity::undecided;
  bool left_invertible = false;
  bool interior_left_invertible = false;
  bool disagreement = false;
  bool decided() const { return full != Purity::undecided && compressed != Purity::undecided; }
};
PureEquivalence pure_equivalence_harness(const Representation& rep, const Mat& A, long horizon = 1L << 20,
                                         const TolerancePolicy& pol = {});

// A nonzero h₁ ∈ K with Ṽ*h₁ ∈ E ⊗ K^⊥, built from the first dual translate of W that meets K.
struct InvariantWitness {
  Vec h1;
  int level = 0;
  double residual = 0.0;  // ‖(I_E ⊗ P_K)Ṽ*h₁‖ / ‖h₁‖
};
InvariantWitness invariant_witness(const Representation& rep, const Subspace& K, const TolerancePolicy& pol = {});

}  // namespace woldkit
