// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "woldkit/io.hpp"

namespace woldkit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  cplx cnormal() {
    const double re = normal();
    return {re, normal()};
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

Mat random_matrix(Rng& rng, Index rows, Index cols);
// Rank exactly `rank` (generically), with singular values in [0.5, 2].
Mat random_rank_matrix(Rng& rng, Index rows, Index cols, Index rank);
Mat random_unitary(Rng& rng, Index n);
// Orthonormal rows, m x (d m).
Mat random_coisometry(Rng& rng, Index m, Index cols);
// Polar factor U W* of X = U Σ W*.
Mat nearest_unitary(const Mat& X);

Representation random_representation(Rng& rng, Index d, Index m, Index rank = -1);
// d = 1 only; singular values drawn from [s_min, s_max].
Representation random_left_invertible(Rng& rng, Index d, Index m, double s_min = 1.0, double s_max = 3.0);
Representation random_expansive(Rng& rng, Index d, Index m);
Representation random_concave(Rng& rng, Index d, Index m, double perturbation = 0.3);

enum class WeightKind { unit, scaled, diagonal };
UnilateralSpec random_unilateral_spec(Rng& rng, Index d, int L, Index p, WeightKind kind);
BilateralSpec random_bilateral_spec(Rng& rng, Index n, int M, bool unit);

struct Block {
  std::string kind;  // "shift", "unitary", "weighted"
  Index offset = 0;
  Index size = 0;
  bool wandering = false;  // part of [W] rather than R∞
};
struct BlockInstance {
  Representation rep;
  std::vector<Block> blocks;
};
// Direct sum of a truncated shift, a unitary (or co-isometric) block and a weighted truncated shift.
BlockInstance random_block_instance(Rng& rng, Index d);

// "key=value,key=value"
class Params {
 public:
  Params() = default;
  explicit Params(const std::string& text);
  long integer(const std::string& key, long fallback) const;
  double real(const std::string& key, double fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;

 private:
  std::map<std::string, std::string> kv_;
};

// Kinds: random, left-invertible, expansive, concave, unilateral, bilateral, block.
Instance generate(const std::string& kind, const Params& params, std::uint64_t seed);

}  // namespace woldkit
