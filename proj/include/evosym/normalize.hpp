#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evosym/expr.hpp"
#include "evosym/poly.hpp"

namespace evosym {

struct NormalizeError : std::runtime_error {
  explicit NormalizeError(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical polynomial fraction. Invariants after reduce():
///  - num == 0 implies den == 1
///  - the denominator's lex-greatest monomial has coefficient 1
///  - no non-Base atom with all-rational exponents has a negative exponent
///    anywhere, nor a positive one in every monomial of both parts
///  - Base atoms carry exponents in (0,1) when rational (integer parts are
///    expanded through the cached base normal form)
struct NFData {
  Poly num, den;
};
using NF = NFData;

inline NF nf_zero() { return {Poly::zero(), Poly::constant(Rat(1))}; }
inline NF nf_one() { return {Poly::constant(Rat(1)), Poly::constant(Rat(1))}; }
inline NF nf_const(const Rat& c) { return {Poly::constant(c), Poly::constant(Rat(1))}; }

inline bool nf_is_zero(const NF& a) { return a.num.zero_p(); }
inline bool nf_plain(const NF& a) {
  auto c = a.den.as_const();
  return c && *c == 1;
}

struct AtomLess {
  bool operator()(const AtomKey& a, const AtomKey& b) const { return a.cmp(b) < 0; }
};

inline Rat rat_floor(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return Rat(q);
}

inline Poly shift_poly(const Poly& p, const Mono& shift) {
  Poly out;
  for (const auto& [m, c] : p.terms) out.add_term(Mono::mul(m, shift), c);
  return out;
}

/// Cancel common atom powers, clear Laurent-negative exponents, and scale
/// the denominator monic. This is the only reduction performed on fractions;
/// there is no polynomial gcd anywhere.
inline NF reduce(Poly num, Poly den) {
  if (den.zero_p()) throw NormalizeError("structural zero in a denominator");
  if (num.zero_p()) return nf_zero();

  struct Info {
    Rat mn;
    size_t count = 0;
    bool skip = false;
  };
  std::map<AtomKey, Info, AtomLess> info;
  size_t total = num.terms.size() + den.terms.size();
  auto scan = [&](const Poly& p) {
    for (const auto& [m, c] : p.terms)
      for (const auto& [k, e] : m.factors) {
        Info& in = info[k];
        bool first = in.count == 0;
        in.count++;
        if (k.tag == AtomKey::Tag::Base || e.is_sym()) {
          in.skip = true;
          continue;
        }
        if (first) in.mn = e.r;
        else in.mn = std::min(in.mn, e.r);
      }
  };
  scan(num);
  scan(den);

  Mono shift;
  for (const auto& [k, in] : info) {
    if (in.skip) continue;
    Rat mn = in.mn;
    if (in.count < total) mn = std::min(mn, Rat(0));
    if (mn != 0) shift.factors.emplace_back(k, Expo(-mn));
  }
  if (!shift.factors.empty()) {
    num = shift_poly(num, shift);
    den = shift_poly(den, shift);
  }

  Rat lc = den.terms.rbegin()->second;
  if (lc != 1) {
    Rat inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return {std::move(num), std::move(den)};
}

inline NF nf_add(const NF& a, const NF& b);
inline NF nf_mul(const NF& a, const NF& b);
inline NF nf_div(const NF& a, const NF& b);
inline NF nf_pow_int(const NF& a, long n);

/// Multiply polynomials atom-wise. Whenever exponent addition pushes a Base
/// atom's rational exponent out of (0,1), the integer part is re-expanded
/// through the base polynomial, so the product is a fraction in general.
inline NF mul_poly(const Poly& a, const Poly& b) {
  Poly plain;
  std::vector<NF> expanded;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Mono m = Mono::mul(ma, mb);
      Mono kept;
      std::vector<std::pair<std::shared_ptr<const NFData>, long>> events;
      for (const auto& f : m.factors) {
        if (f.first.tag == AtomKey::Tag::Base && !f.second.is_sym()) {
          const Rat& r = f.second.r;
          if (!(r > 0 && r < 1)) {
            Rat fl = rat_floor(r);
            auto n = as_long(fl);
            if (!n) throw NormalizeError("exponent overflow on base atom");
            Rat frac = r - fl;
            if (frac != 0) kept.factors.emplace_back(f.first, Expo(frac));
            events.emplace_back(f.first.base_nf, *n);
            continue;
          }
        }
        kept.factors.push_back(f);
      }
      if (events.empty()) {
        plain.add_term(m, ca * cb);
      } else {
        NF part{Poly::mono(std::move(kept), ca * cb), Poly::constant(Rat(1))};
        for (const auto& [bnf, n] : events) part = nf_mul(part, nf_pow_int(*bnf, n));
        expanded.push_back(std::move(part));
      }
    }
  NF out{std::move(plain), Poly::constant(Rat(1))};
  for (const NF& x : expanded) out = nf_add(out, x);
  return out;
}

inline NF nf_add(const NF& a, const NF& b) {
  if ((a.den - b.den).zero_p()) return reduce(a.num + b.num, a.den);
  NF n1 = mul_poly(a.num, b.den);
  NF n2 = mul_poly(b.num, a.den);
  NF d = mul_poly(a.den, b.den);
  if (nf_plain(n1) && nf_plain(n2) && nf_plain(d)) return reduce(n1.num + n2.num, d.num);
  return nf_div(nf_add(n1, n2), d);
}

inline NF nf_sub(const NF& a, const NF& b) {
  return nf_add(a, NF{b.num.scaled(Rat(-1)), b.den});
}

inline NF nf_mul(const NF& a, const NF& b) {
  NF nn = mul_poly(a.num, b.num);
  NF dd = mul_poly(a.den, b.den);
  if (nf_plain(nn) && nf_plain(dd)) return reduce(nn.num, dd.num);
  NF top = mul_poly(nn.num, dd.den);
  NF bot = mul_poly(nn.den, dd.num);
  if (nf_plain(top) && nf_plain(bot)) return reduce(top.num, bot.num);
  return nf_div(top, bot);
}

inline NF nf_div(const NF& a, const NF& b) {
  if (b.num.zero_p()) throw NormalizeError("division by structural zero");
  return nf_mul(a, NF{b.den, b.num});
}

inline NF nf_pow_int(const NF& a, long n) {
  if (n == 0) return nf_one();
  if (n < 0) {
    if (a.num.zero_p()) throw NormalizeError("negative power of structural zero");
    return nf_pow_int(NF{a.den, a.num}, -n);
  }
  NF result = nf_one();
  NF base = a;
  unsigned long k = static_cast<unsigned long>(n);
  while (true) {
    if (k & 1) result = nf_mul(result, base);
    k >>= 1;
    if (!k) break;
    base = nf_mul(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rebuild: NF -> canonical Expr (stable under re-normalization)
// ---------------------------------------------------------------------------

inline Expr pp_expr(const ParamPoly& p) {
  std::vector<Expr> terms;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    std::vector<Expr> fs;
    fs.push_back(make_num(it->second));
    for (const auto& [name, e] : it->first)
      fs.push_back(e == 1 ? make_param(name) : make_pow(make_param(name), make_num(Rat(e))));
    terms.push_back(make_prod(std::move(fs)));
  }
  return make_sum(std::move(terms));
}

inline Expr exporat_expr(const ExpoRat& er) {
  auto cd = er.den.as_const();
  if (cd && *cd == 1) return pp_expr(er.num);
  return div(pp_expr(er.num), pp_expr(er.den));
}

inline Expr expo_expr(const Expo& e) { return e.sym ? exporat_expr(*e.sym) : make_num(e.r); }

inline Expr poly_expr(const Poly& p) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : p.terms) {
    std::vector<Expr> fs;
    fs.push_back(make_num(c));
    for (const auto& [k, e] : m.factors) {
      Expr base = k.to_expr();
      auto r = e.as_rat();
      fs.push_back(r && *r == 1 ? base : make_pow(base, expo_expr(e)));
    }
    terms.push_back(make_prod(std::move(fs)));
  }
  return make_sum(std::move(terms));
}

inline Expr rebuild(const NF& a) {
  if (a.num.zero_p()) return zero_expr();
  auto cd = a.den.as_const();
  if (cd && *cd == 1) return poly_expr(a.num);
  return div(poly_expr(a.num), poly_expr(a.den));
}

// ---------------------------------------------------------------------------
// normalize: Expr -> NF
// ---------------------------------------------------------------------------

inline NF normalize(const Expr& e);

inline Expr canon_expr(const Expr& e) { return rebuild(normalize(e)); }

inline bool structurally_zero(const Expr& e) { return normalize(e).num.zero_p(); }

namespace detail {

/// Convert a parameter-only atom polynomial into a ParamPoly for the
/// exponent field; nullopt if anything other than integer-exponent
/// parameter atoms occurs.
inline std::optional<ParamPoly> poly_to_parampoly(const Poly& p) {
  ParamPoly out;
  for (const auto& [m, c] : p.terms) {
    PMono pm;
    for (const auto& [k, e] : m.factors) {
      if (k.tag != AtomKey::Tag::Param) return std::nullopt;
      auto n = e.as_int();
      if (!n || *n <= 0) return std::nullopt;
      pm.emplace_back(k.name, static_cast<int>(*n));
    }
    out.add_term(pm, c);
  }
  return out;
}

/// c^r for non-integer rational r = p/q: exact when the q-th root of c^p is
/// rational, otherwise an opaque Base atom over the residual constant.
inline NF coeff_pow_frac(const Rat& c, const Rat& r) {
  if (c == 1) return nf_one();
  long p = 0, q = 1;
  {
    auto pn = as_long(Rat(r.get_num()));
    auto qn = as_long(Rat(r.get_den()));
    if (!pn || !qn) throw NormalizeError("exponent overflow in constant power");
    p = *pn;
    q = *qn;
  }
  Rat cp = rat_pow(c, p);
  if (auto root = rat_root(cp, q)) return nf_const(*root);
  if (sgn(cp) < 0 && q % 2 == 0)
    throw NormalizeError("even fractional power of a negative constant");
  Expr ce = make_num(cp);
  auto bnf = std::make_shared<NFData>(NF{Poly::constant(cp), Poly::constant(Rat(1))});
  return {Poly::atom(AtomKey::mk_base(ce, bnf), Expo(Rat(1, q))), Poly::constant(Rat(1))};
}

/// Base-atom power with the (0,1) exponent window: the integer part of r is
/// expanded through the cached base normal form.
inline NF base_power(const std::shared_ptr<const NFData>& bnf, const Expr& canon, const Rat& r) {
  Rat fl = rat_floor(r);
  auto n = as_long(fl);
  if (!n) throw NormalizeError("exponent overflow on base atom");
  Rat frac = r - fl;
  NF out = nf_one();
  if (frac != 0)
    out = NF{Poly::atom(AtomKey::mk_base(canon, bnf), Expo(frac)), Poly::constant(Rat(1))};
  if (*n != 0) out = nf_mul(out, nf_pow_int(*bnf, *n));
  return out;
}

inline NF poly_pow_frac(const Poly& p, const Rat& r) {
  if (auto c = p.as_const()) {
    if (*c == 0) {
      if (r > 0) return nf_zero();
      throw NormalizeError("negative power of structural zero");
    }
    return coeff_pow_frac(*c, r);
  }
  if (auto mc = p.as_mono()) {
    const auto& [m, c] = *mc;
    NF out = coeff_pow_frac(c, r);
    for (const auto& [k, e] : m.factors) {
      Expo se = e.times_rat(r);
      if (se.is_zero()) continue;
      if (k.tag == AtomKey::Tag::Base && !se.is_sym()) {
        out = nf_mul(out, base_power(k.base_nf, k.sub, se.r));
      } else {
        out = nf_mul(out, NF{Poly::atom(k, se), Poly::constant(Rat(1))});
      }
    }
    return out;
  }
  Expr canon = poly_expr(p);
  auto bnf = std::make_shared<NFData>(NF{p, Poly::constant(Rat(1))});
  return base_power(bnf, canon, r);
}

inline NF coeff_pow_sym(const Rat& c, const ExpoRat& er) {
  if (c == 0) throw NormalizeError("symbolic power of structural zero");
  if (c == 1) return nf_one();
  if (sgn(c) < 0) throw NormalizeError("symbolic power of a negative constant");
  Expr ce = make_num(c);
  auto bnf = std::make_shared<NFData>(NF{Poly::constant(c), Poly::constant(Rat(1))});
  return {Poly::atom(AtomKey::mk_base(ce, bnf), Expo::symbolic(er)), Poly::constant(Rat(1))};
}

inline NF poly_pow_sym(const Poly& p, const ExpoRat& er) {
  if (auto c = p.as_const()) return coeff_pow_sym(*c, er);
  if (auto mc = p.as_mono()) {
    const auto& [m, c] = *mc;
    NF out = coeff_pow_sym(c, er);
    for (const auto& [k, e] : m.factors) {
      Expo se = e.times_exporat(er);
      if (se.is_zero()) continue;
      if (k.tag == AtomKey::Tag::Base && !se.is_sym()) {
        out = nf_mul(out, base_power(k.base_nf, k.sub, se.r));
      } else {
        out = nf_mul(out, NF{Poly::atom(k, se), Poly::constant(Rat(1))});
      }
    }
    return out;
  }
  Expr canon = poly_expr(p);
  auto bnf = std::make_shared<NFData>(NF{p, Poly::constant(Rat(1))});
  return {Poly::atom(AtomKey::mk_base(canon, bnf), Expo::symbolic(er)), Poly::constant(Rat(1))};
}

}  // namespace detail

inline NF normalize_pow(const Expr& base, const Expr& expo) {
  NF ne = normalize(expo);
  auto pn = detail::poly_to_parampoly(ne.num);
  auto pd = detail::poly_to_parampoly(ne.den);
  if (!pn || !pd)
    throw NormalizeError("unsupported exponent (not a rational function of the parameters)");
  ExpoRat er(*pn, *pd);
  if (auto c = er.as_const()) {
    const Rat& r = *c;
    if (auto n = as_long(r)) return nf_pow_int(normalize(base), *n);
    NF nb = normalize(base);
    if (nb.num.zero_p()) {
      if (r > 0) return nf_zero();
      throw NormalizeError("negative power of structural zero");
    }
    return nf_div(detail::poly_pow_frac(nb.num, r), detail::poly_pow_frac(nb.den, r));
  }
  NF nb = normalize(base);
  if (nb.num.zero_p()) throw NormalizeError("symbolic power of structural zero");
  return nf_div(detail::poly_pow_sym(nb.num, er), detail::poly_pow_sym(nb.den, er));
}

inline NF normalize(const Expr& e) {
  switch (e->kind) {
    case Kind::Num:
      return nf_const(e->num);
    case Kind::Var:
      return {Poly::atom(AtomKey::mk_var(e->var), Expo(Rat(1))), Poly::constant(Rat(1))};
    case Kind::Param:
      return {Poly::atom(AtomKey::mk_param(e->param), Expo(Rat(1))), Poly::constant(Rat(1))};
    case Kind::Sum: {
      NF out = nf_zero();
      for (const Expr& k : e->kids) out = nf_add(out, normalize(k));
      return out;
    }
    case Kind::Prod: {
      NF out = nf_one();
      for (const Expr& k : e->kids) {
        out = nf_mul(out, normalize(k));
        if (out.num.zero_p()) return nf_zero();
      }
      return out;
    }
    case Kind::Pow:
      return normalize_pow(e->base, e->expo);
    case Kind::Kernel: {
      if (e->fn == Fn::sqrt) return normalize_pow(e->arg, make_num(Rat(1, 2)));
      Expr arg_c = canon_expr(e->arg);
      Expr k = make_kernel(e->fn, arg_c);
      if (k->kind != Kind::Kernel) return normalize(k);  // constant-folded away
      return {Poly::atom(AtomKey::mk_kernel(k->fn, k->arg), Expo(Rat(1))),
              Poly::constant(Rat(1))};
    }
    case Kind::Func:
      return {Poly::atom(AtomKey::mk_func(e->fsym, e->jet), Expo(Rat(1))),
              Poly::constant(Rat(1))};
  }
  throw NormalizeError("unreachable expression kind");
}

}  // namespace evosym
