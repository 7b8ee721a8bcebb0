#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evosym/expr.hpp"

namespace evosym {

struct NFData;  // defined in normalize.hpp

// ---------------------------------------------------------------------------
// Polynomials in the parameters (exponent field scaffolding)
// ---------------------------------------------------------------------------

/// Monomial in parameter names, e.g. {q:2, p:1}. Lex order (ascending names,
/// larger exponent first at the first differing name) - multiplicative, so
/// the division algorithm below is sound.
using PMono = std::vector<std::pair<std::string, int>>;

inline int cmp_pmono(const PMono& a, const PMono& b) {
  size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    if (ia == a.size()) return -1;  // a ran out: remaining b names have exp>0 -> b greater
    if (ib == b.size()) return 1;
    int nc = a[ia].first.compare(b[ib].first);
    if (nc < 0) return 1;   // a has the lex-smaller name with positive exponent
    if (nc > 0) return -1;
    if (a[ia].second != b[ib].second) return a[ia].second > b[ib].second ? 1 : -1;
    ++ia, ++ib;
  }
  return 0;
}

struct PMonoLess {
  bool operator()(const PMono& a, const PMono& b) const { return cmp_pmono(a, b) < 0; }
};

struct ParamPoly {
  std::map<PMono, Rat, PMonoLess> terms;

  static ParamPoly constant(const Rat& c) {
    ParamPoly p;
    if (c != 0) p.terms[{}] = c;
    return p;
  }
  static ParamPoly variable(const std::string& name) {
    ParamPoly p;
    p.terms[{{name, 1}}] = 1;
    return p;
  }

  bool zero() const { return terms.empty(); }

  std::optional<Rat> as_const() const {
    if (terms.empty()) return Rat(0);
    if (terms.size() == 1 && terms.begin()->first.empty()) return terms.begin()->second;
    return std::nullopt;
  }

  void add_term(const PMono& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, c);
    return out;
  }
  friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, -c);
    return out;
  }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly out;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) out.add_term(mul_mono(ma, mb), ca * cb);
    return out;
  }
  ParamPoly scaled(const Rat& c) const {
    ParamPoly out;
    if (c == 0) return out;
    for (const auto& [m, k] : terms) out.terms[m] = k * c;
    return out;
  }

  static PMono mul_mono(const PMono& a, const PMono& b) {
    PMono out;
    size_t ia = 0, ib = 0;
    while (ia < a.size() || ib < b.size()) {
      if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) out.push_back(a[ia++]);
      else if (ia == a.size() || b[ib].first < a[ia].first) out.push_back(b[ib++]);
      else {
        out.emplace_back(a[ia].first, a[ia].second + b[ib].second);
        ++ia, ++ib;
      }
    }
    return out;
  }

  // lead = lex-greatest term
  std::pair<PMono, Rat> lead() const {
    auto it = terms.rbegin();
    return {it->first, it->second};
  }

  /// Exact multivariate division; nullopt if b does not divide a.
  static std::optional<ParamPoly> try_div(const ParamPoly& a, const ParamPoly& b) {
    if (b.zero()) return std::nullopt;
    ParamPoly rem = a, quot;
    auto [lb_m, lb_c] = b.lead();
    while (!rem.zero()) {
      auto [lr_m, lr_c] = rem.lead();
      // does lb_m divide lr_m?
      PMono q;
      size_t ib = 0;
      bool ok = true;
      for (const auto& [name, e] : lr_m) {
        int eb = 0;
        while (ib < lb_m.size() && lb_m[ib].first < name) { ok = false; break; }
        if (!ok) break;
        if (ib < lb_m.size() && lb_m[ib].first == name) eb = lb_m[ib++].second;
        if (e < eb) { ok = false; break; }
        if (e > eb) q.emplace_back(name, e - eb);
      }
      if (ok && ib < lb_m.size()) ok = false;  // divisor has a name the dividend lacks
      if (!ok) return std::nullopt;
      Rat qc = lr_c / lb_c;
      ParamPoly qterm;
      qterm.terms[q] = qc;
      quot = quot + qterm;
      rem = rem - qterm * b;
    }
    return quot;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
      const auto& [m, c] = *it;
      if (!first) out += (sgn(c) < 0 ? " - " : " + ");
      else if (sgn(c) < 0) out += "-";
      Rat ac = abs(c);
      bool coeff = (ac != 1) || m.empty();
      if (coeff) out += rat_str(ac);
      bool firstv = !coeff;
      for (const auto& [name, e] : m) {
        if (!firstv || coeff) out += "*";
        out += name;
        if (e != 1) out += "^" + std::to_string(e);
        firstv = false;
      }
      first = false;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Exponent field: rational functions of the parameters
// ---------------------------------------------------------------------------

/// An element of Q(params). Canonical enough for keying: exact division is
/// attempted both ways and the denominator is made lex-monic.
struct ExpoRat {
  ParamPoly num, den;

  ExpoRat() : num(ParamPoly::constant(Rat(0))), den(ParamPoly::constant(Rat(1))) {}
  ExpoRat(ParamPoly n, ParamPoly d) : num(std::move(n)), den(std::move(d)) { canonicalize(); }

  void canonicalize() {
    if (num.zero()) {
      den = ParamPoly::constant(Rat(1));
      return;
    }
    if (auto q = ParamPoly::try_div(num, den)) {
      num = *q;
      den = ParamPoly::constant(Rat(1));
      return;
    }
    if (auto q = ParamPoly::try_div(den, num)) {
      // a/b = 1/(b/a)
      den = *q;
      num = ParamPoly::constant(Rat(1));
    }
    Rat lc = den.lead().second;
    if (lc != 1) {
      Rat inv = 1 / lc;
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
  }

  std::optional<Rat> as_const() const {
    auto cn = num.as_const();
    auto cd = den.as_const();
    if (cn && cd && *cd != 0) return *cn / *cd;
    return std::nullopt;
  }

  bool equals(const ExpoRat& o) const { return (num * o.den - o.num * den).zero(); }

  ExpoRat plus(const ExpoRat& o) const {
    if ((den - o.den).zero()) return ExpoRat(num + o.num, den);
    return ExpoRat(num * o.den + o.num * den, den * o.den);
  }
  ExpoRat times_rat(const Rat& c) const { return ExpoRat(num.scaled(c), den); }
  ExpoRat times(const ExpoRat& o) const { return ExpoRat(num * o.num, den * o.den); }

  std::string str() const {
    auto cd = den.as_const();
    if (cd && *cd == 1) return num.str();
    return "(" + num.str() + ")/(" + den.str() + ")";
  }
};

/// Exponent attached to an atom: a rational fast path, or a symbolic
/// element of Q(params). Invariant: symbolic exponents are never constant
/// (they demote on canonicalization).
struct Expo {
  Rat r;
  std::shared_ptr<const ExpoRat> sym;

  Expo() : r(0) {}
  explicit Expo(Rat v) : r(std::move(v)) {}
  static Expo integer(long v) { return Expo(Rat(v)); }
  static Expo symbolic(ExpoRat e) {
    if (auto c = e.as_const()) return Expo(*c);
    Expo out;
    out.sym = std::make_shared<ExpoRat>(std::move(e));
    return out;
  }

  bool is_sym() const { return sym != nullptr; }
  bool is_zero() const { return !sym && r == 0; }
  std::optional<long> as_int() const {
    if (sym) return std::nullopt;
    return as_long(r);
  }
  std::optional<Rat> as_rat() const {
    if (sym) return std::nullopt;
    return r;
  }

  ExpoRat to_exporat() const {
    if (sym) return *sym;
    return ExpoRat(ParamPoly::constant(r), ParamPoly::constant(Rat(1)));
  }

  Expo plus(const Expo& o) const {
    if (!sym && !o.sym) return Expo(r + o.r);
    return symbolic(to_exporat().plus(o.to_exporat()));
  }
  Expo times_rat(const Rat& c) const {
    if (!sym) return Expo(r * c);
    return symbolic(sym->times_rat(c));
  }
  Expo times_exporat(const ExpoRat& e) const { return symbolic(to_exporat().times(e)); }

  std::string str() const { return sym ? sym->str() : rat_str(r); }

  int cmp(const Expo& o) const {
    if (is_sym() != o.is_sym()) return is_sym() ? 1 : -1;
    if (!is_sym()) return ::cmp(r, o.r) < 0 ? -1 : (::cmp(r, o.r) > 0 ? 1 : 0);
    return str().compare(o.str());
  }
};

// ---------------------------------------------------------------------------
// Atoms and generalized monomials
// ---------------------------------------------------------------------------

/// The opaque indeterminates of the normal form: variables, parameters,
/// kernel applications over a canonical argument, jet atoms of declared
/// functions, and general bases of symbolic/fractional powers.
struct AtomKey {
  enum class Tag : int { Var = 0, Param, Kernel, Func, Base } tag{Tag::Var};
  Var var{Var::t};
  std::string name;             // Param / Func
  Fn fn{Fn::exp};               // Kernel
  Expr sub;                     // Kernel argument / Base expression (canonical)
  std::vector<int> jet;         // Func
  FuncSymbol fsym;              // Func
  std::shared_ptr<const NFData> base_nf;  // Base only: cached normal form of sub
  std::string skey;             // Kernel/Base: canonical print of sub

  static AtomKey mk_var(Var v) {
    AtomKey a;
    a.tag = Tag::Var;
    a.var = v;
    return a;
  }
  static AtomKey mk_param(std::string n) {
    AtomKey a;
    a.tag = Tag::Param;
    a.name = std::move(n);
    return a;
  }
  static AtomKey mk_kernel(Fn f, Expr arg) {
    AtomKey a;
    a.tag = Tag::Kernel;
    a.fn = f;
    a.sub = std::move(arg);
    a.skey = to_string(a.sub);
    return a;
  }
  static AtomKey mk_func(FuncSymbol sym, std::vector<int> jet) {
    AtomKey a;
    a.tag = Tag::Func;
    a.name = sym->name;
    a.fsym = std::move(sym);
    a.jet = std::move(jet);
    return a;
  }
  static AtomKey mk_base(Expr canon, std::shared_ptr<const NFData> nf) {
    AtomKey a;
    a.tag = Tag::Base;
    a.sub = std::move(canon);
    a.base_nf = std::move(nf);
    a.skey = to_string(a.sub);
    return a;
  }

  int cmp(const AtomKey& o) const {
    if (tag != o.tag) return tag < o.tag ? -1 : 1;
    switch (tag) {
      case Tag::Var:
        return var == o.var ? 0 : (var < o.var ? -1 : 1);
      case Tag::Param:
        return name.compare(o.name);
      case Tag::Kernel:
        if (fn != o.fn) return fn < o.fn ? -1 : 1;
        return skey.compare(o.skey);
      case Tag::Func: {
        if (int c = name.compare(o.name)) return c;
        if (jet != o.jet) return jet < o.jet ? -1 : 1;
        return 0;
      }
      case Tag::Base:
        return skey.compare(o.skey);
    }
    return 0;
  }

  Expr to_expr() const {
    switch (tag) {
      case Tag::Var:
        return make_var(var);
      case Tag::Param:
        return make_param(name);
      case Tag::Kernel:
        return make_kernel(fn, sub);
      case Tag::Func:
        return make_func(fsym, jet);
      case Tag::Base:
        return sub;
    }
    return zero_expr();
  }
};

/// Generalized monomial: strictly increasing atom keys with nonzero
/// exponents. Exponents may be any rational (Laurent form is legal while
/// computing; the final reduce step shifts them non-negative) or symbolic.
struct Mono {
  std::vector<std::pair<AtomKey, Expo>> factors;

  int cmp(const Mono& o) const {
    size_t n = std::min(factors.size(), o.factors.size());
    for (size_t i = 0; i < n; ++i) {
      if (int c = factors[i].first.cmp(o.factors[i].first)) return c;
      if (int c = factors[i].second.cmp(o.factors[i].second)) return c;
    }
    if (factors.size() != o.factors.size()) return factors.size() < o.factors.size() ? -1 : 1;
    return 0;
  }

  bool is_one() const { return factors.empty(); }

  static Mono one() { return {}; }
  static Mono atom(AtomKey k, Expo e) {
    Mono m;
    if (!e.is_zero()) m.factors.emplace_back(std::move(k), std::move(e));
    return m;
  }

  /// Merge two monomials, adding exponents of equal atoms.
  static Mono mul(const Mono& a, const Mono& b) {
    Mono out;
    size_t ia = 0, ib = 0;
    while (ia < a.factors.size() || ib < b.factors.size()) {
      int c;
      if (ia == a.factors.size()) c = 1;
      else if (ib == b.factors.size()) c = -1;
      else c = a.factors[ia].first.cmp(b.factors[ib].first);
      if (c < 0) out.factors.push_back(a.factors[ia++]);
      else if (c > 0) out.factors.push_back(b.factors[ib++]);
      else {
        Expo e = a.factors[ia].second.plus(b.factors[ib].second);
        if (!e.is_zero()) out.factors.emplace_back(a.factors[ia].first, std::move(e));
        ++ia, ++ib;
      }
    }
    return out;
  }
};

struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const { return a.cmp(b) < 0; }
};

/// Polynomial over the atoms: ordered map monomial -> rational coefficient.
struct Poly {
  std::map<Mono, Rat, MonoLess> terms;

  static Poly zero() { return {}; }
  static Poly constant(const Rat& c) {
    Poly p;
    if (c != 0) p.terms[Mono::one()] = c;
    return p;
  }
  static Poly atom(AtomKey k, Expo e) {
    Poly p;
    p.terms[Mono::atom(std::move(k), std::move(e))] = 1;
    return p;
  }
  static Poly mono(Mono m, Rat c) {
    Poly p;
    if (c != 0) p.terms[std::move(m)] = std::move(c);
    return p;
  }

  bool zero_p() const { return terms.empty(); }

  std::optional<Rat> as_const() const {
    if (terms.empty()) return Rat(0);
    if (terms.size() == 1 && terms.begin()->first.is_one()) return terms.begin()->second;
    return std::nullopt;
  }

  std::optional<std::pair<Mono, Rat>> as_mono() const {
    if (terms.size() == 1) return std::make_pair(terms.begin()->first, terms.begin()->second);
    return std::nullopt;
  }

  void add_term(const Mono& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, c);
    return out;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, -c);
    return out;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) out.add_term(Mono::mul(ma, mb), ca * cb);
    return out;
  }
  Poly scaled(const Rat& c) const {
    Poly out;
    if (c == 0) return out;
    for (const auto& [m, k] : terms) out.terms[m] = k * c;
    return out;
  }
};

}  // namespace evosym
