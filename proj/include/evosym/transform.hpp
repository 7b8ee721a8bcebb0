#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "evosym/vectorfield.hpp"

namespace evosym {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point transformation t'=T(t), x'=X(t,x,u), u'=U(t,x,u) with a
/// user-supplied inverse t=Tinv(t'), x=Xinv(t',x',u'), u=Uinv(t',x',u').
/// Inverse expressions are written in plain t,x,u which are read as the
/// primed variables.
struct PointTransformation {
  Expr T, X, U;
  Expr Tinv, Xinv, Uinv;
};

namespace detail {

/// Substitute t,x,u by expressions. Arbitrary-function applications are
/// rejected: their slots are frozen at declaration and cannot be remapped.
inline Expr subst_vars(const Expr& e, const std::array<std::optional<Expr>, 3>& repl) {
  switch (e->kind) {
    case Kind::Num:
    case Kind::Param:
      return e;
    case Kind::Var: {
      int idx = static_cast<int>(e->var);
      if (idx < 3 && repl[idx]) return *repl[idx];
      return e;
    }
    case Kind::Sum: {
      std::vector<Expr> kids;
      for (const auto& k : e->kids) kids.push_back(subst_vars(k, repl));
      return make_sum(std::move(kids));
    }
    case Kind::Prod: {
      std::vector<Expr> kids;
      for (const auto& k : e->kids) kids.push_back(subst_vars(k, repl));
      return make_prod(std::move(kids));
    }
    case Kind::Pow:
      return make_pow(subst_vars(e->base, repl), subst_vars(e->expo, repl));
    case Kind::Kernel:
      return make_kernel(e->fn, subst_vars(e->arg, repl));
    case Kind::Func:
      throw TransformError("arbitrary function '" + e->fsym->name +
                           "' cannot appear in a transformation context");
  }
  throw TransformError("unreachable expression kind");
}

}  // namespace detail

/// Parse "T = <expr>; X = <expr>; U = <expr>; Tinv = ...; Xinv = ...;
/// Uinv = ...". All six parts are required, in any order.
inline PointTransformation parse_transformation(const std::string& text,
                                                const Context& ctx) {
  std::array<std::optional<Expr>, 6> slots;
  static const std::array<std::string, 6> names = {"T", "X", "U", "Tinv", "Xinv", "Uinv"};
  size_t start = 0;
  while (start < text.size()) {
    size_t semi = text.find(';', start);
    std::string piece =
        semi == std::string::npos ? text.substr(start) : text.substr(start, semi - start);
    size_t eq = piece.find('=');
    if (eq == std::string::npos) {
      bool blank = piece.find_first_not_of(" \t\n") == std::string::npos;
      if (!blank) throw TransformError("expected '<name> = <expr>' in: " + piece);
    } else {
      std::string name = piece.substr(0, eq);
      name.erase(0, name.find_first_not_of(" \t\n"));
      name.erase(name.find_last_not_of(" \t\n") + 1);
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end())
        throw TransformError("unknown transformation component: " + name);
      size_t idx = it - names.begin();
      if (slots[idx]) throw TransformError("duplicate component: " + name);
      slots[idx] = parse_expr(piece.substr(eq + 1), ctx);
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  for (size_t i = 0; i < 6; ++i)
    if (!slots[i]) throw TransformError("missing transformation component: " + names[i]);
  PointTransformation tr{*slots[0], *slots[1], *slots[2],
                         *slots[3], *slots[4], *slots[5]};
  for (const Expr* e : {&tr.T, &tr.Tinv})
    if (depends_on(*e, Var::x) || depends_on(*e, Var::u))
      throw TransformError("T and Tinv must depend on t only");
  for (const Expr* e : {&tr.T, &tr.X, &tr.U, &tr.Tinv, &tr.Xinv, &tr.Uinv})
    for (Var v : {Var::u1, Var::u2, Var::u3})
      if (depends_on(*e, v))
        throw TransformError("transformations act on (t,x,u) only");
  return tr;
}

/// Verify the round-trip identities and generic invertibility of the map;
/// throws TransformError with the failing component otherwise.
inline void validate_transformation(const PointTransformation& tr, const Context& ctx,
                                    std::uint64_t seed) {
  Expr t = make_var(Var::t), x = make_var(Var::x), u = make_var(Var::u);
  std::array<std::optional<Expr>, 3> fwd = {tr.T, tr.X, tr.U};
  std::array<std::optional<Expr>, 3> inv = {tr.Tinv, tr.Xinv, tr.Uinv};
  struct Check {
    const char* label;
    Expr defect;
  };
  std::vector<Check> checks = {
      {"Tinv(T(t)) - t", sub(detail::subst_vars(tr.Tinv, fwd), t)},
      {"Xinv(T,X,U) - x", sub(detail::subst_vars(tr.Xinv, fwd), x)},
      {"Uinv(T,X,U) - u", sub(detail::subst_vars(tr.Uinv, fwd), u)},
      {"T(Tinv(t')) - t'", sub(detail::subst_vars(tr.T, inv), t)},
      {"X(Tinv,Xinv,Uinv) - x'", sub(detail::subst_vars(tr.X, inv), x)},
      {"U(Tinv,Xinv,Uinv) - u'", sub(detail::subst_vars(tr.U, inv), u)},
  };
  for (size_t i = 0; i < checks.size(); ++i) {
    ZeroResult r =
        is_zero(checks[i].defect, ctx, split_seed(seed, "roundtrip:" + std::to_string(i)));
    if (r.verdict != Verdict::Zero)
      throw TransformError(std::string("round-trip check failed: ") + checks[i].label +
                           " != 0 (" + r.witness + ")");
  }
  // generic invertibility of (X,U) in (x,u)
  Expr jac = sub(mul(diff(tr.X, Var::x), diff(tr.U, Var::u)),
                 mul(diff(tr.X, Var::u), diff(tr.U, Var::x)));
  ZeroResult r = is_zero(jac, ctx, split_seed(seed, "jacobian"));
  if (r.verdict == Verdict::Zero)
    throw TransformError("Jacobian of (X,U) in (x,u) vanishes identically");
}

/// Push a generator through the transformation: components
/// (a T_t, a X_t + b X_x + c X_u, a U_t + b U_x + c U_u) rewritten in the
/// primed variables via the inverse map.
inline VectorField pushforward(const VectorField& Q, const PointTransformation& tr) {
  validate_vf(Q);
  std::array<std::optional<Expr>, 3> inv = {tr.Tinv, tr.Xinv, tr.Uinv};
  Expr ap = mul(Q.a, diff(tr.T, Var::t));
  Expr bp = make_sum({mul(Q.a, diff(tr.X, Var::t)), mul(Q.b, diff(tr.X, Var::x)),
                      mul(Q.c, diff(tr.X, Var::u))});
  Expr cp = make_sum({mul(Q.a, diff(tr.U, Var::t)), mul(Q.b, diff(tr.U, Var::x)),
                      mul(Q.c, diff(tr.U, Var::u))});
  VectorField out{detail::subst_vars(ap, inv), detail::subst_vars(bp, inv),
                  detail::subst_vars(cp, inv)};
  try {
    validate_vf(out);
  } catch (const VfError& e) {
    throw TransformError(std::string("pushforward left the admitted class: ") + e.what());
  }
  return out;
}

/// Compose two transformations (apply `first`, then `second`).
inline PointTransformation compose(const PointTransformation& first,
                                   const PointTransformation& second) {
  std::array<std::optional<Expr>, 3> fwd1 = {first.T, first.X, first.U};
  std::array<std::optional<Expr>, 3> inv2 = {second.Tinv, second.Xinv, second.Uinv};
  return PointTransformation{
      detail::subst_vars(second.T, fwd1),    detail::subst_vars(second.X, fwd1),
      detail::subst_vars(second.U, fwd1),    detail::subst_vars(first.Tinv, inv2),
      detail::subst_vars(first.Xinv, inv2),  detail::subst_vars(first.Uinv, inv2)};
}

// ---------------------------------------------------------------------------
// Equivalence of realizations
// ---------------------------------------------------------------------------

struct EquivalenceReport {
  std::vector<ZeroResult> rows;  // one per destination basis element

  bool ok() const {
    for (const auto& r : rows)
      if (r.verdict != Verdict::Zero) return false;
    return true;
  }
  Verdict worst() const {
    Verdict w = Verdict::Zero;
    for (const auto& r : rows) {
      if (r.verdict == Verdict::NonZero) return Verdict::NonZero;
      if (r.verdict == Verdict::Indeterminate) w = Verdict::Indeterminate;
    }
    return w;
  }
};

/// Identity change of basis.
inline std::vector<std::vector<Expr>> identity_cob(size_t n) {
  std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n, zero_expr()));
  for (size_t i = 0; i < n; ++i) m[i][i] = one_expr();
  return m;
}

/// Parse change-of-basis rows like {"e1", "-e3", "e2"}: row i gives
/// dst_i = sum_j coeff_j * pushforward(src_j).
inline std::vector<std::vector<Expr>> parse_cob(const std::vector<std::string>& rows,
                                                const Context& ctx) {
  std::vector<std::string> markers;
  for (size_t k = 1; k <= rows.size(); ++k) markers.push_back("e" + std::to_string(k));
  std::vector<std::vector<Expr>> m;
  for (const auto& row : rows) m.push_back(extract_linear(row, ctx, markers));
  return m;
}

/// Verify that the transformation maps src onto dst with the recorded
/// constant change of basis: dst_i = sum_j M[i][j] * pushforward(src_j).
inline EquivalenceReport verify_equivalence(const std::vector<VectorField>& src,
                                            const std::vector<VectorField>& dst,
                                            const PointTransformation& tr,
                                            const std::vector<std::vector<Expr>>& M,
                                            const Context& ctx, std::uint64_t seed) {
  if (src.size() != dst.size())
    throw std::invalid_argument("equivalence requires equal dimensions");
  if (M.size() != src.size())
    throw std::invalid_argument("change-of-basis matrix has wrong row count");
  std::vector<VectorField> pushed;
  for (const auto& f : src) pushed.push_back(pushforward(f, tr));
  EquivalenceReport report;
  for (size_t i = 0; i < dst.size(); ++i) {
    if (M[i].size() != src.size())
      throw std::invalid_argument("change-of-basis matrix has wrong column count");
    VectorField acc = vf_zero();
    for (size_t j = 0; j < src.size(); ++j)
      acc = vf_add(acc, vf_scale(M[i][j], pushed[j]));
    VectorField defect = vf_sub(acc, dst[i]);
    report.rows.push_back(
        vf_is_zero(defect, ctx, split_seed(seed, "equiv:" + std::to_string(i))));
  }
  return report;
}

inline EquivalenceReport verify_equivalence(const std::vector<VectorField>& src,
                                            const std::vector<VectorField>& dst,
                                            const PointTransformation& tr,
                                            const Context& ctx, std::uint64_t seed) {
  return verify_equivalence(src, dst, tr, identity_cob(src.size()), ctx, seed);
}

}  // namespace evosym
