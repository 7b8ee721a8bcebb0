#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <stdexcept>
#include <string>
#include <vector>

#include "evosym/diff.hpp"
#include "evosym/numeric.hpp"
#include "evosym/parser.hpp"

namespace evosym {

struct VfError : std::runtime_error {
  explicit VfError(const std::string& what) : std::runtime_error(what) {}
};

struct IndeterminateError : std::runtime_error {
  explicit IndeterminateError(const std::string& what) : std::runtime_error(what) {}
};

/// Infinitesimal generator a(t)dt + b(t,x,u)dx + c(t,x,u)du.
struct VectorField {
  Expr a, b, c;
};

inline void validate_vf(const VectorField& vf) {
  for (Var v : {Var::x, Var::u, Var::u1, Var::u2, Var::u3})
    if (depends_on(vf.a, v))
      throw VfError("Dt coefficient may depend on t only: " + to_string(vf.a));
  for (Var v : {Var::u1, Var::u2, Var::u3}) {
    if (depends_on(vf.b, v) || depends_on(vf.c, v))
      throw VfError("Dx/Du coefficients may depend on t,x,u only");
  }
}

/// Split an expression that is linear in the given marker symbols into the
/// coefficient of each marker. Shared by the vector-field reader, structure
/// tables ("q*e1 - e2") and change-of-basis rows.
inline std::vector<Expr> extract_linear(const std::string& text, const Context& base,
                                        const std::vector<std::string>& markers) {
  Context ctx = base;
  for (const auto& m : markers) {
    if (ctx.has_param(m) || ctx.has_alias(m) || ctx.has_func(m))
      throw VfError("marker symbol collides with a declared name: " + m);
    ctx.declare_param(m);
  }
  NF nf = normalize(parse_expr(text, ctx));
  auto marker_of = [&](const AtomKey& k) -> int {
    if (k.tag != AtomKey::Tag::Param) return -1;
    for (size_t i = 0; i < markers.size(); ++i)
      if (k.name == markers[i]) return static_cast<int>(i);
    return -1;
  };
  for (const auto& [m, c] : nf.den.terms)
    for (const auto& [k, e] : m.factors)
      if (marker_of(k) >= 0) throw VfError("direction symbol in a denominator: " + text);
  std::vector<Poly> parts(markers.size());
  for (const auto& [m, coeff] : nf.num.terms) {
    int which = -1;
    Mono rest;
    for (const auto& [k, e] : m.factors) {
      int idx = marker_of(k);
      if (idx < 0) {
        rest.factors.emplace_back(k, e);
        continue;
      }
      auto r = e.as_rat();
      if (which >= 0 || !r || *r != 1)
        throw VfError("term is not linear in the direction symbols: " + text);
      which = idx;
    }
    if (which < 0) throw VfError("term without a direction symbol: " + text);
    parts[which].add_term(rest, coeff);
  }
  std::vector<Expr> out;
  out.reserve(markers.size());
  for (auto& p : parts) out.push_back(rebuild(reduce(std::move(p), nf.den)));
  return out;
}

/// Parse "t*Dt + x*Dx - u*Du" style text into a VectorField.
inline VectorField parse_vf(const std::string& text, const Context& ctx = Context{}) {
  auto parts = extract_linear(text, ctx, {"Dt", "Dx", "Du"});
  VectorField vf{parts[0], parts[1], parts[2]};
  validate_vf(vf);
  return vf;
}

/// Canonical printing; parse_vf(print_vf(X)) reproduces X exactly.
inline std::string print_vf(const VectorField& vf) {
  static const char* dirs[3] = {"Dt", "Dx", "Du"};
  const Expr* comps[3] = {&vf.a, &vf.b, &vf.c};
  std::string out;
  for (int i = 0; i < 3; ++i) {
    Expr ce = canon_expr(*comps[i]);
    if (ce->kind == Kind::Num && ce->num == 0) continue;
    std::string term;
    if (ce->kind == Kind::Num && ce->num == 1) {
      term = dirs[i];
    } else if (ce->kind == Kind::Num && ce->num == -1) {
      term = std::string("-") + dirs[i];
    } else {
      std::string s = to_string(ce);
      if (ce->kind == Kind::Sum) s = "(" + s + ")";
      term = s + "*" + dirs[i];
    }
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

/// Apply the field as a first-order operator to an expression in t,x,u.
inline Expr vf_apply(const VectorField& X, const Expr& e) {
  return add(add(mul(X.a, diff(e, Var::t)), mul(X.b, diff(e, Var::x))),
             mul(X.c, diff(e, Var::u)));
}

/// Lie bracket [X,Y] = XY - YX, computed slotwise on coefficients.
inline VectorField bracket(const VectorField& X, const VectorField& Y) {
  return {sub(vf_apply(X, Y.a), vf_apply(Y, X.a)),
          sub(vf_apply(X, Y.b), vf_apply(Y, X.b)),
          sub(vf_apply(X, Y.c), vf_apply(Y, X.c))};
}

inline VectorField vf_scale(const Expr& k, const VectorField& X) {
  return {mul(k, X.a), mul(k, X.b), mul(k, X.c)};
}

inline VectorField vf_add(const VectorField& X, const VectorField& Y) {
  return {add(X.a, Y.a), add(X.b, Y.b), add(X.c, Y.c)};
}

inline VectorField vf_sub(const VectorField& X, const VectorField& Y) {
  return {sub(X.a, Y.a), sub(X.b, Y.b), sub(X.c, Y.c)};
}

inline VectorField vf_zero() { return {zero_expr(), zero_expr(), zero_expr()}; }

inline bool vf_structurally_zero(const VectorField& X) {
  return structurally_zero(X.a) && structurally_zero(X.b) && structurally_zero(X.c);
}

/// Worst-case verdict over the three components.
inline ZeroResult vf_is_zero(const VectorField& X, const Context& ctx, std::uint64_t seed,
                             const ZeroOptions& opt = {}) {
  const Expr* comps[3] = {&X.a, &X.b, &X.c};
  const char* slot[3] = {"a", "b", "c"};
  ZeroResult out{Verdict::Zero, "structural"};
  for (int i = 0; i < 3; ++i) {
    ZeroResult r = is_zero(*comps[i], ctx, split_seed(seed, std::string("vf:") + slot[i]), opt);
    if (r.verdict == Verdict::NonZero)
      return {Verdict::NonZero, std::string("D") + "txu"[i] + "-component: " + r.witness};
    if (r.verdict == Verdict::Indeterminate) out = {Verdict::Indeterminate, r.witness};
    else if (out.verdict == Verdict::Zero && r.witness != "structural") out.witness = r.witness;
  }
  return out;
}

/// Generic rank of the n x 3 coefficient matrix: maximum numeric rank over
/// >= 8 sampled points, singular values thresholded at 1e-9 * ||matrix||.
inline int generic_rank(const std::vector<VectorField>& fields, const Context& ctx,
                        std::uint64_t seed, int samples = 8) {
  int n = static_cast<int>(fields.size());
  if (n == 0) return 0;
  int best = 0;
  int failures = 0;
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXd M(n, 3);
    bool ok = false;
    for (int salt = 0; salt < 8 && !ok; ++salt) {
      EvalEnv env = make_env(
          split_seed(seed, "rank:" + std::to_string(s) + ":" + std::to_string(salt)), ctx);
      for (int i = 0; i < n; ++i) {
        M(i, 0) = eval(fields[i].a, env);
        M(i, 1) = eval(fields[i].b, env);
        M(i, 2) = eval(fields[i].c, env);
      }
      ok = !env.domain_error;
    }
    if (!ok) {
      ++failures;
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * smax && smax > 0.0) ++rank;
    if (rank > best) best = rank;
  }
  if (failures == samples) throw IndeterminateError("all rank samples hit poles");
  return best;
}

/// True iff the 3x3 coefficient determinant of (X,Y,Z) is identically zero.
inline bool wedge_is_zero(const VectorField& X, const VectorField& Y, const VectorField& Z,
                          const Context& ctx, std::uint64_t seed) {
  auto det2 = [](const Expr& p, const Expr& q, const Expr& r, const Expr& s) {
    return sub(mul(p, s), mul(q, r));
  };
  Expr det = add(sub(mul(X.a, det2(Y.b, Y.c, Z.b, Z.c)), mul(X.b, det2(Y.a, Y.c, Z.a, Z.c))),
                 mul(X.c, det2(Y.a, Y.b, Z.a, Z.b)));
  ZeroResult r = is_zero(det, ctx, split_seed(seed, "wedge"));
  if (r.verdict == Verdict::Indeterminate)
    throw IndeterminateError("wedge test indeterminate: " + r.witness);
  return r.verdict == Verdict::Zero;
}

inline std::vector<VectorField> parse_basis(const std::string& text, const Context& ctx) {
  std::vector<VectorField> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t semi = text.find(';', start);
    std::string piece =
        semi == std::string::npos ? text.substr(start) : text.substr(start, semi - start);
    size_t b = piece.find_first_not_of(" \t");
    if (b != std::string::npos) {
      size_t e = piece.find_last_not_of(" \t");
      out.push_back(parse_vf(piece.substr(b, e - b + 1), ctx));
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return out;
}

}  // namespace evosym
