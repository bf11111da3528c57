// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "woldkit/generate.hpp"
#include "woldkit/subspace.hpp"

using namespace woldkit;

namespace {

Mat diag(std::initializer_list<double> v) {
  Mat D = Mat::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) D(i, i) = x, ++i;
  return D;
}

const TolerancePolicy kPol;

}  // namespace

TEST(Pinv, IdentityAndZero) {
  EXPECT_TRUE(pinv(Mat(Mat::Identity(2, 2)), kPol).isApprox(Mat::Identity(2, 2)));
  Mat Z = pinv(Mat(Mat::Zero(2, 3)), kPol);
  EXPECT_EQ(Z.rows(), 3);
  EXPECT_EQ(Z.cols(), 2);
  EXPECT_EQ(Z.norm(), 0.0);
}

TEST(Pinv, DiagonalWithZero) {
  EXPECT_LE((pinv(diag({2, 0}), kPol) - diag({0.5, 0})).norm(), 1e-14);
}

TEST(Pinv, PenroseOnRankDeficient) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const Index r = rng.integer(1, 8), c = rng.integer(1, 8);
    const Mat A = random_rank_matrix(rng, r, c, rng.integer(0, std::min(r, c)));
    const Mat P = pinv(A, kPol);
    EXPECT_LE((A * P * A - A).norm(), 1e-10);
    EXPECT_LE((P * A * P - P).norm(), 1e-9);
    EXPECT_LE(((A * P).adjoint() - A * P).norm(), 1e-10);
    EXPECT_LE(((P * A).adjoint() - P * A).norm(), 1e-10);
    EXPECT_EQ(rank_info(A, kPol).rank, oracle::gauss_rank(A));
  }
}

TEST(ReducedMinModulus, Examples) {
  EXPECT_TRUE(std::isinf(reduced_min_modulus(Mat(Mat::Zero(2, 2)), kPol)));
  EXPECT_DOUBLE_EQ(reduced_min_modulus(diag({3, 0}), kPol), 3.0);
  Mat col = Mat::Zero(2, 1);
  col(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(reduced_min_modulus(col, kPol), 1.0);
}

TEST(PsdSqrt, Examples) {
  EXPECT_TRUE(psd_sqrt(Mat(Mat::Identity(3, 3)), kPol).isApprox(Mat::Identity(3, 3)));
  EXPECT_LE((psd_sqrt(diag({4, 0}), kPol) - diag({2, 0})).norm(), 1e-12);
  try {
    psd_sqrt(diag({-1, 1}), kPol);
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(Subspace, KernelAndIntersection) {
  Subspace k = kernel(diag({1, 0}), kPol);
  ASSERT_EQ(k.dim(), 1);
  EXPECT_NEAR(std::abs(k.basis()(1, 0)), 1.0, 1e-14);

  Subspace a = Subspace::from_orthonormal(oracle::coords(3, {0, 1}));
  Subspace b = Subspace::from_orthonormal(oracle::coords(3, {1, 2}));
  Subspace c = intersect(a, b, kPol);
  ASSERT_EQ(c.dim(), 1);
  EXPECT_TRUE(oracle::same_span(c.basis(), oracle::e(3, 1)));
}

TEST(Subspace, DimensionFormulaAgainstElimination) {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const Index n = 6;
    // Shared directions make nontrivial intersections likely.
    const Mat common = random_matrix(rng, n, rng.integer(0, 2));
    Mat A(n, common.cols() + rng.integer(0, 2)), B(n, common.cols() + rng.integer(0, 2));
    A << common, random_matrix(rng, n, A.cols() - common.cols());
    B << common, random_matrix(rng, n, B.cols() - common.cols());
    const Subspace sa = range(A, kPol), sb = range(B, kPol);
    const Subspace s = sum(sa, sb, kPol), i = intersect(sa, sb, kPol);
    Mat AB(n, A.cols() + B.cols());
    AB << A, B;
    EXPECT_EQ(s.dim(), oracle::span_dim(AB));
    EXPECT_EQ(sa.dim() + sb.dim(), s.dim() + i.dim());
    EXPECT_LE(orthonormality_defect(s), 1e-12);
    EXPECT_LE(orthonormality_defect(i), 1e-12);
    EXPECT_TRUE(contains(i, sa, kPol));
    EXPECT_TRUE(contains(i, sb, kPol));
  }
}

TEST(Subspace, ComplementAndProjector) {
  Rng rng(3);
  const Subspace s = range(random_matrix(rng, 5, 2), kPol);
  const Subspace c = complement(s);
  EXPECT_EQ(c.dim(), 3);
  EXPECT_LE(overlap(s, c), 1e-12);
  EXPECT_LE((project(s) + project(c) - Mat::Identity(5, 5)).norm(), 1e-12);
}

TEST(Kron, BlockRepeatMatchesKronecker) {
  Rng rng(2);
  const Mat A = random_matrix(rng, 2, 3);
  EXPECT_LE((block_repeat(4, A) - oracle::kron(oracle::identity(4), A)).norm(), 0.0);
  const Mat B = random_matrix(rng, 3, 2);
  EXPECT_LE((kron(A, B) - oracle::kron(A, B)).norm(), 1e-14);
}
