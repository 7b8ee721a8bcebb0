#include <gtest/gtest.h>

#include "evosym/vectorfield.hpp"

using namespace evosym;

namespace {

Context plain_ctx() { return Context{}; }

VectorField vf(const std::string& s) { return parse_vf(s, plain_ctx()); }

// Deterministic random degree-<=2 polynomial coefficients, built as source
// text so the parser is exercised along the way.
std::string rand_poly(std::uint64_t& state, bool t_only) {
  auto next = [&state] {
    state = splitmix64(state);
    return state;
  };
  std::vector<std::string> monos =
      t_only ? std::vector<std::string>{"1", "t", "t^2"}
             : std::vector<std::string>{"1", "t",   "x",   "u",  "t*x",
                                        "t*u", "x*u", "t^2", "x^2", "u^2"};
  std::string out;
  for (const auto& m : monos) {
    long c = static_cast<long>(next() % 5) - 2;
    if (c == 0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + std::to_string(c) + ")*" + m;
  }
  return out.empty() ? "0" : out;
}

VectorField rand_field(std::uint64_t& state) {
  std::string a = rand_poly(state, true);
  std::string b = rand_poly(state, false);
  std::string c = rand_poly(state, false);
  return vf("(" + a + ")*Dt + (" + b + ")*Dx + (" + c + ")*Du");
}

}  // namespace

TEST(VectorField, ParsePrintRoundTrip) {
  Context ctx;
  for (const std::string s : {"Dt", "t*Dt + x*Dx", "-(1+x^2)*Dx - x*u*Du",
                              "x*Du", "t*u*Dx + (u^2 - 1)*Du", "0*Dt"}) {
    VectorField f = parse_vf(s, ctx);
    VectorField g = parse_vf(print_vf(f), ctx);
    EXPECT_TRUE(vf_structurally_zero(vf_sub(f, g))) << s << " -> " << print_vf(f);
  }
  EXPECT_EQ(print_vf(vf("0*Dt")), "0");
  EXPECT_EQ(print_vf(vf("Dt")), "Dt");
}

TEST(VectorField, ParseRejectsMalformed) {
  Context ctx;
  EXPECT_THROW(parse_vf("x*Dx + u", ctx), VfError);       // term without direction
  EXPECT_THROW(parse_vf("Dx*Dt", ctx), VfError);          // two directions in a term
  EXPECT_THROW(parse_vf("Dx^2", ctx), VfError);           // quadratic direction
  EXPECT_THROW(parse_vf("1/(1+Dt)", ctx), VfError);       // direction in denominator
  EXPECT_THROW(parse_vf("x*Dt", ctx), VfError);           // a must depend on t only
  EXPECT_THROW(parse_vf("u1*Dx", ctx), VfError);          // no jet variables allowed
}

TEST(VectorField, BracketExamples) {
  Context ctx;
  // [d/dt, t d/dt + x d/dx] = d/dt
  VectorField r = bracket(vf("Dt"), vf("t*Dt + x*Dx"));
  EXPECT_EQ(print_vf(r), "Dt");
  // [d/dx, x d/dx] = d/dx
  EXPECT_EQ(print_vf(bracket(vf("Dx"), vf("x*Dx"))), "Dx");
  // [d/du, x d/du] = 0
  EXPECT_TRUE(vf_structurally_zero(bracket(vf("Du"), vf("x*Du"))));
  // [x d/dx, x^2 d/dx] = x^2 d/dx
  EXPECT_EQ(print_vf(bracket(vf("x*Dx"), vf("x^2*Dx"))), "x^2*Dx");
}

TEST(VectorField, BracketAntisymmetryRandom) {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  std::vector<VectorField> fields;
  for (int i = 0; i < 200; ++i) fields.push_back(rand_field(state));
  for (int i = 0; i < 200; ++i) {
    const VectorField& X = fields[i];
    const VectorField& Y = fields[(i + 1) % 200];
    VectorField s = vf_add(bracket(X, Y), bracket(Y, X));
    ASSERT_TRUE(vf_structurally_zero(s)) << "pair " << i;
  }
}

TEST(VectorField, BracketJacobiRandom) {
  std::uint64_t state = 0x2545f4914f6cdd1dull;
  for (int i = 0; i < 100; ++i) {
    VectorField X = rand_field(state);
    VectorField Y = rand_field(state);
    VectorField Z = rand_field(state);
    VectorField s = vf_add(vf_add(bracket(X, bracket(Y, Z)), bracket(Y, bracket(Z, X))),
                           bracket(Z, bracket(X, Y)));
    ASSERT_TRUE(vf_structurally_zero(s)) << "triple " << i;
  }
}

TEST(VectorField, BracketBilinearity) {
  Context ctx;
  std::uint64_t state = 77;
  for (int i = 0; i < 20; ++i) {
    VectorField X = rand_field(state);
    VectorField Y = rand_field(state);
    VectorField Z = rand_field(state);
    // [X, Y+Z] = [X,Y] + [X,Z]
    VectorField lhs = bracket(X, vf_add(Y, Z));
    VectorField rhs = vf_add(bracket(X, Y), bracket(X, Z));
    ASSERT_TRUE(vf_structurally_zero(vf_sub(lhs, rhs)));
    // [2X, Y] = 2[X, Y]
    Expr two = make_num(2);
    VectorField l2 = bracket(vf_scale(two, X), Y);
    VectorField r2 = vf_scale(two, bracket(X, Y));
    ASSERT_TRUE(vf_structurally_zero(vf_sub(l2, r2)));
  }
}

TEST(VectorField, GenericRankExamples) {
  Context ctx;
  std::vector<VectorField> one = {vf("Du"), vf("x*Du")};
  EXPECT_EQ(generic_rank(one, ctx, 0), 1);

  std::vector<VectorField> three = {vf("Dt"), vf("Dx"), vf("Du")};
  EXPECT_EQ(generic_rank(three, ctx, 0), 3);

  std::vector<VectorField> two = {vf("Dx"), vf("t*Dt + x*Dx"), vf("t*u*Dx")};
  EXPECT_EQ(generic_rank(two, ctx, 0), 2);

  std::vector<VectorField> zero = {vf("0*Dt")};
  EXPECT_EQ(generic_rank(zero, ctx, 0), 0);
}

TEST(VectorField, GenericRankInvariance) {
  Context ctx;
  std::vector<VectorField> basis = {vf("Dx"), vf("t*Dt + x*Dx"), vf("t*u*Dx"),
                                    vf("u*Du")};
  int r = generic_rank(basis, ctx, 1);
  EXPECT_EQ(r, 3);
  // scaling rows by nonzero constants
  std::vector<VectorField> scaled = {vf_scale(make_num(rat(5, 7)), basis[0]),
                                     vf_scale(make_num(-3), basis[1]),
                                     vf_scale(make_num(2), basis[2]),
                                     vf_scale(make_num(rat(-1, 9)), basis[3])};
  EXPECT_EQ(generic_rank(scaled, ctx, 99), r);
  // permutation
  std::vector<VectorField> perm = {basis[2], basis[0], basis[3], basis[1]};
  EXPECT_EQ(generic_rank(perm, ctx, 1234), r);
  // different seeds agree
  EXPECT_EQ(generic_rank(basis, ctx, 42), r);
}

TEST(VectorField, WedgeExamples) {
  Context ctx;
  EXPECT_TRUE(wedge_is_zero(vf("Dx"), vf("t*Dt + x*Dx"), vf("t*u*Dx"), ctx, 0));
  EXPECT_FALSE(wedge_is_zero(vf("Dt"), vf("Dx"), vf("Du"), ctx, 0));
  EXPECT_TRUE(wedge_is_zero(vf("Dx"), vf("x*Dx"), vf("x^2*Dx"), ctx, 0));
}

TEST(VectorField, VfApplyAndIsZero) {
  Context ctx;
  // (t Dt + x Dx) applied to t*x is 2*t*x
  VectorField X = vf("t*Dt + x*Dx");
  Expr e = parse_expr("t*x", ctx);
  Expr applied = vf_apply(X, e);
  EXPECT_TRUE(structurally_zero(sub(applied, parse_expr("2*t*x", ctx))));

  ZeroResult z = vf_is_zero(vf_sub(vf("x*Du"), vf("x*Du")), ctx, 0);
  EXPECT_EQ(z.verdict, Verdict::Zero);
  ZeroResult nz = vf_is_zero(vf_sub(vf("x*Du"), vf("u*Du")), ctx, 0);
  EXPECT_EQ(nz.verdict, Verdict::NonZero);
  EXPECT_NE(nz.witness.find("Du-component"), std::string::npos);
}

TEST(VectorField, ParseBasisSplitsOnSemicolons) {
  Context ctx;
  auto fields = parse_basis("Du ; x*Du", ctx);
  ASSERT_EQ(fields.size(), 2u);
  EXPECT_EQ(print_vf(fields[0]), "Du");
  EXPECT_EQ(print_vf(fields[1]), "x*Du");
}
