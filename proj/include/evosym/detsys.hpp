#pragma once

#include <string>
#include <vector>

#include "evosym/vectorfield.hpp"

namespace evosym {

/// u_t = F(t,x,u,u1,u2) * u3 + G(t,x,u,u1,u2).
struct EvolutionEquation {
  Expr F;
  Expr G;
};

struct DetsysError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// F and G may depend on t,x,u,u1,u2 but never on u3.
inline void validate_equation(const EvolutionEquation& eq) {
  if (depends_on(eq.F, Var::u3) || depends_on(eq.G, Var::u3))
    throw DetsysError("F and G must not depend on u3");
}

/// True admissible equations have F != 0; F = 0 degenerates to second order.
inline bool admissible(const EvolutionEquation& eq) {
  return !structurally_zero(eq.F);
}

/// Left-hand sides of the two determining equations for an infinitesimal
/// generator Q = a(t) Dt + b(t,x,u) Dx + c(t,x,u) Du acting on
/// u_t = F u3 + G. Q is a symmetry iff both vanish identically in
/// (t,x,u,u1,u2) for arbitrary values of the remaining parameters.
struct DefectPair {
  Expr d1;
  Expr d2;
};

inline DefectPair symmetry_defect(const EvolutionEquation& eq, const VectorField& Q) {
  validate_equation(eq);
  validate_vf(Q);
  const Expr& F = eq.F;
  const Expr& G = eq.G;
  const Expr& a = Q.a;
  const Expr& b = Q.b;
  const Expr& c = Q.c;

  Expr adot = diff(a, Var::t);
  Expr b_t = diff(b, Var::t), b_x = diff(b, Var::x), b_u = diff(b, Var::u);
  Expr c_t = diff(c, Var::t), c_x = diff(c, Var::x), c_u = diff(c, Var::u);
  Expr b_xx = diff(b_x, Var::x), b_xu = diff(b_x, Var::u), b_uu = diff(b_u, Var::u);
  Expr c_xx = diff(c_x, Var::x), c_xu = diff(c_x, Var::u), c_uu = diff(c_u, Var::u);
  Expr b_xxx = diff(b_xx, Var::x), b_xxu = diff(b_xx, Var::u), b_xuu = diff(b_xu, Var::u);
  Expr b_uuu = diff(b_uu, Var::u);
  Expr c_xxx = diff(c_xx, Var::x), c_xxu = diff(c_xx, Var::u), c_xuu = diff(c_xu, Var::u);
  Expr c_uuu = diff(c_uu, Var::u);

  Expr u1 = make_var(Var::u1), u2 = make_var(Var::u2);
  auto n = [](long v) { return make_num(v); };

  // B2 = u1(b_xx - 2c_xu) + u1^2(2b_xu - c_uu) + u1^3 b_uu
  //      + u2(2b_x - c_u) + 3u1u2 b_u - c_xx
  Expr B2 = make_sum({mul(u1, sub(b_xx, mul(n(2), c_xu))),
                      mul(make_pow(u1, n(2)), sub(mul(n(2), b_xu), c_uu)),
                      mul(make_pow(u1, n(3)), b_uu),
                      mul(u2, sub(mul(n(2), b_x), c_u)),
                      make_prod({n(3), u1, u2, b_u}), neg(c_xx)});

  // B1 = u1^2 b_u + u1(b_x - c_u) - c_x
  Expr B1 = make_sum({mul(make_pow(u1, n(2)), b_u), mul(u1, sub(b_x, c_u)), neg(c_x)});

  // d1 = F(-adot + 3u1 b_u + 3b_x) + B2 F_{u2} + B1 F_{u1} - c F_u - a F_t - b F_x
  Expr d1 = make_sum({mul(F, make_sum({neg(adot), make_prod({n(3), u1, b_u}),
                                       mul(n(3), b_x)})),
                      mul(B2, diff(F, Var::u2)), mul(B1, diff(F, Var::u1)),
                      neg(mul(c, diff(F, Var::u))), neg(mul(a, diff(F, Var::t))),
                      neg(mul(b, diff(F, Var::x)))});

  // P = u1(b_xxx - 3c_xxu) + 3u1^2(b_xxu - c_xuu) + u1^3(3b_xuu - c_uuu)
  //     + u1^4 b_uuu + 3u2(b_xx - c_xu) + 3u1u2(3b_xu - c_uu)
  //     + 6u1^2 u2 b_uu + 3u2^2 b_u - c_xxx
  Expr P = make_sum({mul(u1, sub(b_xxx, mul(n(3), c_xxu))),
                     make_prod({n(3), make_pow(u1, n(2)), sub(b_xxu, c_xuu)}),
                     mul(make_pow(u1, n(3)), sub(mul(n(3), b_xuu), c_uuu)),
                     mul(make_pow(u1, n(4)), b_uuu),
                     make_prod({n(3), u2, sub(b_xx, c_xu)}),
                     make_prod({n(3), u1, u2, sub(mul(n(3), b_xu), c_uu)}),
                     make_prod({n(6), make_pow(u1, n(2)), u2, b_uu}),
                     make_prod({n(3), make_pow(u2, n(2)), b_u}), neg(c_xxx)});

  // d2 = G(-adot - u1 b_u + c_u) - u1 b_t + c_t + F P
  //      + B2 G_{u2} + B1 G_{u1} - c G_u - a G_t - b G_x
  Expr d2 = make_sum({mul(G, make_sum({neg(adot), neg(mul(u1, b_u)), c_u})),
                      neg(mul(u1, b_t)), c_t, mul(F, P),
                      mul(B2, diff(G, Var::u2)), mul(B1, diff(G, Var::u1)),
                      neg(mul(c, diff(G, Var::u))), neg(mul(a, diff(G, Var::t))),
                      neg(mul(b, diff(G, Var::x)))});

  return {d1, d2};
}

// ---------------------------------------------------------------------------
// Batch invariance checking
// ---------------------------------------------------------------------------

struct GenCheck {
  int index = 0;  // 1-based position in the generator list
  ZeroResult d1;
  ZeroResult d2;

  bool ok() const {
    return d1.verdict == Verdict::Zero && d2.verdict == Verdict::Zero;
  }
};

struct InvarianceReport {
  std::vector<GenCheck> gens;

  bool ok() const {
    for (const auto& g : gens)
      if (!g.ok()) return false;
    return true;
  }
  Verdict worst() const {
    Verdict w = Verdict::Zero;
    for (const auto& g : gens)
      for (const ZeroResult* r : {&g.d1, &g.d2}) {
        if (r->verdict == Verdict::NonZero) return Verdict::NonZero;
        if (r->verdict == Verdict::Indeterminate) w = Verdict::Indeterminate;
      }
    return w;
  }
};

/// Check that every field in `gens` is an infinitesimal symmetry of the
/// equation: both determining defects vanish identically.
inline InvarianceReport check_invariance(const EvolutionEquation& eq,
                                         const std::vector<VectorField>& gens,
                                         const Context& ctx, std::uint64_t seed) {
  InvarianceReport report;
  for (size_t i = 0; i < gens.size(); ++i) {
    DefectPair d = symmetry_defect(eq, gens[i]);
    GenCheck gc;
    gc.index = static_cast<int>(i) + 1;
    gc.d1 = is_zero(d.d1, ctx, split_seed(seed, "inv:" + std::to_string(i) + ":d1"));
    gc.d2 = is_zero(d.d2, ctx, split_seed(seed, "inv:" + std::to_string(i) + ":d2"));
    report.gens.push_back(std::move(gc));
  }
  return report;
}

}  // namespace evosym
