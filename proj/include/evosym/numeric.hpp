#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "evosym/context.hpp"
#include "evosym/normalize.hpp"
#include "evosym/rng.hpp"

namespace evosym {

// ---------------------------------------------------------------------------
// Evaluation environment: one point of the positive orthant
// ---------------------------------------------------------------------------

struct EvalEnv {
  std::uint64_t seed = 0;
  double vars[6] = {0, 0, 0, 0, 0, 0};
  std::map<std::string, double> params;
  std::map<std::string, double> funcs;  // jet atoms, keyed "name{i,j,...}"
  bool domain_error = false;
  double max_abs = 0.0;

  void note(double v) {
    if (!std::isfinite(v)) domain_error = true;
    double a = std::fabs(v);
    if (a > max_abs) max_abs = a;
  }
};

namespace detail {

inline double sample_param(const ParamSpec& spec, std::uint64_t seed,
                           const std::map<std::string, double>& already) {
  using K = ConstraintClause::Kind;
  // Fixed values and finite choices win outright.
  for (const auto& c : spec.clauses) {
    if (c.kind == K::Eq) return c.value.get_d();
    if (c.kind == K::OneOf) {
      std::uint64_t h = split_seed(seed, "param:" + spec.name);
      return c.choices[h % c.choices.size()].get_d();
    }
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uint64_t h =
        split_seed(seed, "param:" + spec.name + ":" + std::to_string(attempt));
    double lo = 1.1, hi = 2.9;
    bool negate = false;
    for (const auto& c : spec.clauses) {
      switch (c.kind) {
        case K::Neg:
          negate = true;
          break;
        case K::In:
          lo = c.lo;
          hi = c.hi;
          break;
        case K::AbsIn:
          lo = c.lo;
          hi = c.hi;
          break;  // magnitude window; sign from neg/pos
        default:
          break;
      }
    }
    double v = sample_in(h, lo, hi);
    bool has_absin = false;
    for (const auto& c : spec.clauses) has_absin |= (c.kind == K::AbsIn);
    if (negate) v = has_absin ? -v : -sample_default(h);
    bool ok = true;
    for (const auto& c : spec.clauses) {
      switch (c.kind) {
        case K::Nonzero:
          ok &= std::fabs(v) > 0.05;
          break;
        case K::Pos:
          ok &= v > 0.0;
          break;
        case K::Neg:
          ok &= v < 0.0;
          break;
        case K::Ne:
          ok &= std::fabs(v - c.value.get_d()) > 0.05;
          break;
        case K::Le: {
          auto it = already.find(c.other);
          if (it != already.end()) ok &= v <= it->second;
          break;
        }
        case K::Ge: {
          auto it = already.find(c.other);
          if (it != already.end()) ok &= v >= it->second;
          break;
        }
        default:
          break;
      }
    }
    if (ok) return v;
  }
  // Constraint set too tight for rejection sampling; last resort midpoint.
  return 0.5;
}

}  // namespace detail

inline EvalEnv make_env(std::uint64_t seed, const Context& ctx) {
  EvalEnv env;
  env.seed = seed;
  for (int i = 0; i < 6; ++i)
    env.vars[i] = sample_default(split_seed(seed, std::string("var:") + var_name(Var(i))));
  for (const auto& name : ctx.param_order())
    env.params[name] = detail::sample_param(ctx.param(name), seed, env.params);
  return env;
}

inline std::string jet_key(const std::string& name, const std::vector<int>& jet) {
  std::string k = name + "{";
  for (size_t i = 0; i < jet.size(); ++i) {
    if (i) k += ",";
    k += std::to_string(jet[i]);
  }
  return k + "}";
}

/// Numeric evaluation at a sampled point. Kernels evaluate as real
/// functions; jet atoms of declared functions evaluate as fresh independent
/// indeterminates drawn once per (name, multi-index).
inline double eval(const Expr& e, EvalEnv& env) {
  double v = 0.0;
  switch (e->kind) {
    case Kind::Num:
      v = e->num.get_d();
      break;
    case Kind::Var:
      v = env.vars[static_cast<int>(e->var)];
      break;
    case Kind::Param: {
      auto it = env.params.find(e->param);
      if (it == env.params.end()) {
        double s = sample_default(split_seed(env.seed, "param:" + e->param));
        it = env.params.emplace(e->param, s).first;
      }
      v = it->second;
      break;
    }
    case Kind::Sum:
      for (const Expr& k : e->kids) v += eval(k, env);
      break;
    case Kind::Prod:
      v = 1.0;
      for (const Expr& k : e->kids) v *= eval(k, env);
      break;
    case Kind::Pow: {
      double b = eval(e->base, env);
      double ex = eval(e->expo, env);
      if (b > 0.0) {
        v = std::pow(b, ex);
      } else if (b == 0.0) {
        if (ex > 0.0) v = 0.0;
        else env.domain_error = true;
      } else {
        double r = std::nearbyint(ex);
        if (std::fabs(ex - r) < 1e-9) v = std::pow(b, r);
        else env.domain_error = true;
      }
      break;
    }
    case Kind::Kernel: {
      double a = eval(e->arg, env);
      switch (e->fn) {
        case Fn::exp:
          v = std::exp(a);
          break;
        case Fn::ln:
          if (a > 0.0) v = std::log(a);
          else env.domain_error = true;
          break;
        case Fn::arctan:
          v = std::atan(a);
          break;
        case Fn::sqrt:
          if (a >= 0.0) v = std::sqrt(a);
          else env.domain_error = true;
          break;
        case Fn::sin:
          v = std::sin(a);
          break;
        case Fn::cos:
          v = std::cos(a);
          break;
      }
      break;
    }
    case Kind::Func: {
      std::string k = jet_key(e->fsym->name, e->jet);
      auto it = env.funcs.find(k);
      if (it == env.funcs.end()) {
        double s = sample_default(split_seed(env.seed, "func:" + k));
        it = env.funcs.emplace(std::move(k), s).first;
      }
      v = it->second;
      break;
    }
  }
  env.note(v);
  return v;
}

// ---------------------------------------------------------------------------
// Randomized zero test (Schwartz-Zippel over the positive orthant)
// ---------------------------------------------------------------------------

enum class Verdict { Zero, NonZero, Indeterminate };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero: return "zero";
    case Verdict::NonZero: return "nonzero";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct ZeroResult {
  Verdict verdict = Verdict::Indeterminate;
  std::string witness;  // counterexample point or a short explanation
};

struct ZeroOptions {
  int param_samples = 3;
  int var_samples = 8;
  double tol = 1e-8;
  int max_pole_retries = 64;
};

namespace detail {

inline std::string witness_point(const EvalEnv& env, double value) {
  std::ostringstream os;
  os.precision(6);
  for (int i = 0; i < 6; ++i) {
    if (i) os << " ";
    os << var_name(Var(i)) << "=" << env.vars[i];
  }
  for (const auto& [n, v] : env.params) os << " " << n << "=" << v;
  os << " value=" << value;
  return os.str();
}

}  // namespace detail

/// Decide whether a normal form is identically zero. Structural zero is
/// conclusive; otherwise the fraction is sampled at param_samples *
/// var_samples seeded points, each with its own retry salt for poles.
///
/// When `raw` is supplied (the expression the normal form came from), the
/// nonzero decision is made against the raw tree's evaluation: clearing
/// denominators can blow up the numerator's intermediate magnitudes — and
/// with them the cancellation allowance tol*(1+max_abs) — by many orders,
/// which would let genuinely nonzero values of moderate size slip through.
/// The raw tree evaluates quotients as quotients, so its max_abs reflects
/// the actual working magnitudes at the sample point.
inline ZeroResult is_zero_nf(const NF& nf, const Context& ctx, std::uint64_t seed,
                             const ZeroOptions& opt = {}, const Expr* raw = nullptr) {
  if (nf.num.zero_p()) return {Verdict::Zero, "structural"};
  Expr num_e = poly_expr(nf.num);
  bool den1 = nf_plain(nf);
  Expr den_e = den1 ? Expr{} : poly_expr(nf.den);
  int pole_retries = 0;
  for (int p = 0; p < opt.param_samples; ++p) {
    for (int v = 0; v < opt.var_samples; ++v) {
      for (int salt = 0;; ++salt) {
        std::string key = "sample:" + std::to_string(p) + ":" + std::to_string(v) + ":" +
                          std::to_string(salt);
        EvalEnv env = make_env(split_seed(seed, key), ctx);
        double n = eval(num_e, env);
        double d = den1 ? 1.0 : eval(den_e, env);
        bool pole = env.domain_error || std::fabs(d) <= 1e-12 * (1.0 + env.max_abs);
        if (pole) {
          if (++pole_retries > opt.max_pole_retries)
            return {Verdict::Indeterminate, "pole/domain retry budget exhausted"};
          continue;
        }
        double value = n / d;
        double scale = opt.tol * (1.0 + env.max_abs);
        if (raw) {
          // Same seed => same point and same sampled function atoms, but
          // max_abs is accumulated over the raw tree only.
          EvalEnv renv = make_env(split_seed(seed, key), ctx);
          double rv = eval(*raw, renv);
          if (renv.domain_error) {
            if (++pole_retries > opt.max_pole_retries)
              return {Verdict::Indeterminate, "pole/domain retry budget exhausted"};
            continue;
          }
          value = rv;
          scale = opt.tol * (1.0 + renv.max_abs);
          if (std::fabs(value) > scale)
            return {Verdict::NonZero, detail::witness_point(renv, value)};
        } else if (std::fabs(value) > scale) {
          return {Verdict::NonZero, detail::witness_point(env, value)};
        }
        break;
      }
    }
  }
  return {Verdict::Zero,
          "sampled " + std::to_string(opt.param_samples * opt.var_samples) + " points"};
}

inline ZeroResult is_zero(const Expr& e, const Context& ctx, std::uint64_t seed,
                          const ZeroOptions& opt = {}) {
  NF nf;
  try {
    nf = normalize(e);
  } catch (const NormalizeError& err) {
    return {Verdict::Indeterminate, std::string("normalization: ") + err.what()};
  }
  return is_zero_nf(nf, ctx, seed, opt, &e);
}

}  // namespace evosym
