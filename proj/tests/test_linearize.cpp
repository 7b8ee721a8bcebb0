#include <gtest/gtest.h>

#include "evosym/linearize.hpp"

using namespace evosym;

namespace {

std::vector<VectorField> basis(const std::string& s, const Context& ctx = Context{}) {
  return parse_basis(s, ctx);
}

}  // namespace

TEST(Linearize, CombinationWitness) {
  // <Dx, x Dx + u Du, u Dx, -u Du>: the triple <Dx, u Dx, x Dx> obtained
  // from e1, e3, e2+e4 is rank-one, three-dimensional, solvable.
  Context ctx;
  LinearizeResult r =
      flag_linearizing(basis("Dx ; x*Dx + u*Du ; u*Dx ; -u*Du"), ctx, 0);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.reason, "rank1_solvable_3d(e1, e3, e2+e4)");
}

TEST(Linearize, TranslationsNotFlagged) {
  Context ctx;
  LinearizeResult r = flag_linearizing(basis("Dt ; Dx ; Du"), ctx, 0);
  EXPECT_FALSE(r.flagged);
  EXPECT_TRUE(r.reason.empty());
}

TEST(Linearize, PureRankOneTriple) {
  Context ctx;
  LinearizeResult r = flag_linearizing(basis("Du ; x*Du ; x^2*Du ; Dx"), ctx, 0);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.reason, "rank1_solvable_3d(e1, e2, e3)");
}

TEST(Linearize, AbelianFour) {
  // four commuting independent fields of generic pointwise rank two: no
  // rank-one triple exists, the abelian branch fires.
  Context ctx;
  LinearizeResult r = flag_linearizing(basis("Dx ; Du ; t*Dx ; t*Du"), ctx, 0);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.reason, "abelian_ge4(e1, e2, e3, e4)");
}

TEST(Linearize, SolvableRankTwoNotFlagged) {
  Context ctx;
  EXPECT_FALSE(flag_linearizing(basis("Dx ; x*Dx ; u*Du"), ctx, 0).flagged);
  EXPECT_FALSE(flag_linearizing(basis("Dx ; Du ; x*Dx + u*Du"), ctx, 0).flagged);
  // worked A_{3.3}(+)A_1 case is not linearizing
  Context qctx;
  qctx.declare_param("q", "");
  EXPECT_FALSE(
      flag_linearizing(basis("Dx ; Dt ; t*Dx - Du ; Dt - u*Dx + q*Du", qctx), qctx, 0)
          .flagged);
}

TEST(Linearize, SmallBasesNeverFlagged) {
  Context ctx;
  EXPECT_FALSE(flag_linearizing(basis("Du ; x*Du"), ctx, 0).flagged);
  EXPECT_FALSE(flag_linearizing({}, ctx, 0).flagged);
}

TEST(Linearize, DeterministicAcrossSeeds) {
  Context ctx;
  auto b = basis("Dx ; x*Dx + u*Du ; u*Dx ; -u*Du");
  for (std::uint64_t s : {1ull, 7ull, 123456789ull}) {
    LinearizeResult r = flag_linearizing(b, ctx, s);
    EXPECT_TRUE(r.flagged);
    EXPECT_EQ(r.reason, "rank1_solvable_3d(e1, e3, e2+e4)");
  }
}
