// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "woldkit/generate.hpp"
#include "woldkit/io.hpp"
#include "woldkit/verify.hpp"

using namespace woldkit;

namespace {
ErrorKind kind_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorKind::InvalidParams;
}
}  // namespace

TEST(Io, RepresentationRoundTrip) {
  Rng rng(1);
  Representation rep = random_representation(rng, 2, 3);
  rep.sigma["a"] = random_matrix(rng, 3, 3);
  rep.phi["a"] = random_matrix(rng, 2, 2);
  const Instance back = parse_instance(dump(to_json(rep)));
  const auto& r = std::get<Representation>(back);
  EXPECT_EQ(r.d, 2);
  EXPECT_EQ(r.m, 3);
  EXPECT_EQ((r.V - rep.V).norm(), 0.0);
  EXPECT_EQ((r.sigma.at("a") - rep.sigma.at("a")).norm(), 0.0);
  EXPECT_EQ((r.phi.at("a") - rep.phi.at("a")).norm(), 0.0);
}

TEST(Io, BoundaryRoundTrip) {
  Rng rng(2);
  const Representation rep = build_unilateral_shift(random_unilateral_spec(rng, 2, 2, 1, WeightKind::unit));
  const auto r = std::get<Representation>(parse_instance(dump(to_json(rep))));
  EXPECT_EQ(r.boundary, rep.boundary);
  EXPECT_EQ(r.safe_depth, rep.safe_depth);
}

TEST(Io, SpecRoundTrip) {
  Rng rng(3);
  const UnilateralSpec u = random_unilateral_spec(rng, 2, 2, 2, WeightKind::diagonal);
  const auto ub = std::get<UnilateralSpec>(parse_instance(dump(to_json(u))));
  ASSERT_EQ(ub.Z.size(), 2u);
  EXPECT_EQ((ub.Z[1] - u.Z[1]).norm(), 0.0);
  EXPECT_EQ(ub.p, 2);
  const BilateralSpec b = random_bilateral_spec(rng, 2, 3, false);
  const auto bb = std::get<BilateralSpec>(parse_instance(dump(to_json(b))));
  EXPECT_EQ(bb.w, b.w);
}

TEST(Io, Errors) {
  EXPECT_EQ(kind_of(R"({"dim_E":1,"dim_H":2,"V":[[1,0],[0,0],[0,0]]})"), ErrorKind::ShapeError);
  EXPECT_EQ(kind_of(R"({"dim_E":1,"dim_H":1,"V":[[NaN,0]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"dim_E":1,"dim_H":1,"V":[["x",0]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"dim_E":1,"V":[[1,0]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"kind":"bilateral","n":1,"M":2,"w":[]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"kind":"bilateral","n":1,"M":2,"w":[[1,1,0,1]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"kind":"unilateral","d":1,"L":2,"Z":[[[1,0]]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"kind":"torus"})"), ErrorKind::ParseError);
}

TEST(Io, SyntaxErrorLocation) {
  try {
    parse_instance("{\n  \"dim_E\": 1,\n  \"dim_H\": ,\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
  }
}

TEST(Generate, Deterministic) {
  for (const char* kind : {"random", "left-invertible", "concave", "unilateral", "bilateral", "block"}) {
    const std::string a = dump(to_json(generate(kind, Params("d=1,m=3,L=2"), 42)));
    const std::string b = dump(to_json(generate(kind, Params("d=1,m=3,L=2"), 42)));
    const std::string c = dump(to_json(generate(kind, Params("d=1,m=3,L=2"), 43)));
    EXPECT_EQ(a, b) << kind;
    if (std::string(kind) != "bilateral") EXPECT_NE(a, c) << kind;
  }
  EXPECT_THROW(generate("expansive", Params("d=2,m=2"), 7), Error);
  EXPECT_THROW(generate("nope", Params(""), 7), Error);
  EXPECT_THROW(Params("d"), Error);
  EXPECT_THROW(generate("random", Params("d=x"), 1), Error);
}

TEST(Generate, ExpansiveOutputIsExpansive) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rep = std::get<Representation>(generate("expansive", Params("d=1,m=2"), seed));
    EXPECT_TRUE(check_expansive(rep));
  }
}

TEST(Verify, ParallelAggregationIsDeterministic) {
  VerifyOptions a;
  a.count = 4;
  a.seed = 9;
  a.threads = 1;
  a.names = {"pseudoinverse", "kernel-intersection", "bilateral-shift"};
  VerifyOptions b = a;
  b.threads = 4;
  EXPECT_EQ(dump(run_verify(a).to_json(a)), dump(run_verify(b).to_json(b)));
  VerifyOptions bad = a;
  bad.names = {"no-such-suite"};
  EXPECT_THROW(run_verify(bad), Error);
}

TEST(Verify, CaseSeedsDiffer) {
  EXPECT_NE(case_seed(1, 0, 0), case_seed(1, 0, 1));
  EXPECT_NE(case_seed(1, 0, 0), case_seed(1, 1, 0));
  EXPECT_NE(case_seed(1, 0, 0), case_seed(2, 0, 0));
  EXPECT_EQ(case_seed(5, 3, 7), case_seed(5, 3, 7));
}
