// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "woldkit/representation.hpp"

namespace woldkit {

// The decreasing chain R(Ṽ_1) ⊇ R(Ṽ_2) ⊇ ...
struct RangeChain {
  std::vector<Subspace> ranges;  // ranges[n-1] = R(Ṽ_n)
  std::vector<bool> near_cutoff;
  int stabilized_at = 0;  // first n with R(Ṽ_n) = R(Ṽ_{n+1}) = R(Ṽ_{n+2})

  const Subspace& limit() const { return ranges[stabilized_at - 1]; }
  // R(Ṽ_n); past the computed steps the chain is constant.
  const Subspace& at(int n) const {
    return ranges[static_cast<std::size_t>(std::min<int>(n, static_cast<int>(ranges.size())) - 1)];
  }
};

// Computes at least `min_steps` ranges and continues until stabilization.
RangeChain range_chain(const Representation& rep, const TolerancePolicy& pol = {}, int min_steps = 0);

Subspace generalized_range(const Representation& rep, const TolerancePolicy& pol = {});

// Greatest fixed point K = Ṽ(E ⊗ K), iterated from K = H. Throws IdentityViolated if
// it disagrees with generalized_range.
Subspace algebraic_core(const Representation& rep, const TolerancePolicy& pol = {});

// max(8, stabilization + 4) clamped to the column budget.
int default_horizon(const Representation& rep, const RangeChain& chain, const TolerancePolicy& pol = {});
int default_horizon(const Representation& rep, const TolerancePolicy& pol = {});

struct ConditionWitness {
  int m = 0;
  bool holds = false;
  double residual = 0.0;
};

struct RegularityReport {
  bool range_closed = true;
  double gamma = 0.0;
  bool kernel_inclusion_holds = false;
  double kernel_residual = 0.0;
  std::vector<ConditionWitness> per_m;  // N(Ṽ) ⊆ E ⊗ R(Ṽ_m)
  bool anomaly = false;                 // per-m verdicts disagree with the inclusion
  int stabilized_at = 0;
  int horizon = 0;
  // Truncated models: the same inclusion for the kernel of the non-boundary columns,
  // witnessed for m up to interior_depth.
  bool boundary = false;
  bool interior_holds = false;
  int interior_depth = 0;

  bool regular() const noexcept { return boundary ? interior_holds : kernel_inclusion_holds; }
};

RegularityReport is_regular(const Representation& rep, const TolerancePolicy& pol = {}, int horizon = 0);

// Kernel of Ṽ restricted to the columns outside rep.boundary, as a subspace of E ⊗ H.
Subspace interior_kernel(const Representation& rep, const TolerancePolicy& pol = {});

struct GenInverse {
  Mat S;  // (d m) x m
  Index d = 1;
  Index m = 1;
};

// S = Ṽ† + (I − Ṽ†Ṽ) Y ṼṼ†
GenInverse make_generalized_inverse(const Representation& rep, const Mat& Y, const TolerancePolicy& pol = {});
// Accepts S only if ṼSṼ = Ṽ and SṼS = S.
GenInverse validate_generalized_inverse(const Representation& rep, const Mat& S, const TolerancePolicy& pol = {});
double generalized_inverse_residual(const Representation& rep, const Mat& S);

// S^(n) = (I_{E^{⊗n−1}} ⊗ S) ⋯ (I_E ⊗ S) S, shape (d^n m) x m; n = 0 gives the identity.
Mat iterate_s(const GenInverse& S, int n, const TolerancePolicy& pol = {});

struct BiregularityReport {
  std::vector<ConditionWitness> per_m;  // N(I_{E^{⊗m}} ⊗ S) ⊆ R(S^(m))
  bool holds = true;
  bool boundary = false;
  int depth = 0;
};
BiregularityReport is_biregular(const Representation& rep, const GenInverse& S, int horizon = 0,
                                const TolerancePolicy& pol = {});

// Ṽ^{†(n)}
Mat dagger_iterate(const Representation& rep, int n, const TolerancePolicy& pol = {});
bool is_n_dagger(const Representation& rep, int n, const TolerancePolicy& pol = {});
bool is_hyper_dagger(const Representation& rep, int horizon, const TolerancePolicy& pol = {});

bool r_infty_fixedpoint_check(const Representation& rep, const GenInverse& S, int horizon = 0,
                              const TolerancePolicy& pol = {});
bool s_invariance_check(const Representation& rep, const GenInverse& S, const TolerancePolicy& pol = {});

// (I_{E^{⊗b}} ⊗ Ṽ_a) N(Ṽ_{a+b})  versus  N(Ṽ_b) ∩ (I_{E^{⊗b}} ⊗ Ṽ_a)(E^{⊗(a+b)} ⊗ H)
struct KernelIntersection {
  Subspace lhs;
  Subspace rhs;
  bool equal = false;
};
KernelIntersection kernel_intersection_identity(const Representation& rep, int a, int b,
                                                const TolerancePolicy& pol = {});

// ξ ∈ E^{⊗n} ⊗ R(Ṽ)^⊥  ↦  P_{R(Ṽ_n) ⊖ R(Ṽ_{n+1})} Ṽ_n ξ
struct HatMap {
  Index domain_dim = 0;
  Index codomain_dim = 0;
  bool invertible = false;
};
HatMap hat_map_check(const Representation& rep, int n, const TolerancePolicy& pol = {});

}  // namespace woldkit
