#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "evosym/rational.hpp"

namespace evosym {

/// The six admitted variables: independent (t,x), dependent (u) and the jet
/// coordinates u1=u_x, u2=u_xx, u3=u_xxx.
enum class Var : int { t = 0, x = 1, u = 2, u1 = 3, u2 = 4, u3 = 5 };

inline const char* var_name(Var v) {
  static const char* names[] = {"t", "x", "u", "u1", "u2", "u3"};
  return names[static_cast<int>(v)];
}

/// Builtin kernels. `abs` is accepted by the parser but folds to the identity
/// at construction: all sampling lives in the positive orthant, so |y| = y.
enum class Fn : int { exp = 0, ln, arctan, sqrt, sin, cos };

inline const char* fn_name(Fn f) {
  static const char* names[] = {"exp", "ln", "arctan", "sqrt", "sin", "cos"};
  return names[static_cast<int>(f)];
}

struct Node;
using Expr = std::shared_ptr<const Node>;

/// An arbitrary function symbol together with its declared slot expressions.
/// Applications carry only a derivative multi-index; the arguments are always
/// the declared slots, so one (symbol, multi-index) pair is one jet atom.
struct FuncSymbolData {
  std::string name;
  std::vector<Expr> slots;
};
using FuncSymbol = std::shared_ptr<const FuncSymbolData>;

enum class Kind : int { Num = 0, Var, Param, Func, Kernel, Pow, Prod, Sum };

struct Node {
  Kind kind;
  Rat num;                  // Num
  Var var{Var::t};          // Var
  std::string param;        // Param
  std::vector<Expr> kids;   // Sum, Prod (flattened, canonical order not enforced here)
  Expr base, expo;          // Pow
  Fn fn{Fn::exp};           // Kernel
  Expr arg;                 // Kernel
  FuncSymbol fsym;          // Func
  std::vector<int> jet;     // Func derivative multi-index, size == slots.size()
};

// ---- constructors ---------------------------------------------------------

inline Expr make_num(Rat q) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->num = std::move(q);
  return n;
}

inline Expr make_num(long v) { return make_num(Rat(v)); }

inline const Expr& zero_expr() {
  static const Expr z = make_num(0);
  return z;
}
inline const Expr& one_expr() {
  static const Expr o = make_num(1);
  return o;
}

inline Expr make_var(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = v;
  return n;
}

inline Expr make_param(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Param;
  n->param = std::move(name);
  return n;
}

inline Expr make_func(FuncSymbol sym, std::vector<int> jet) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Func;
  n->fsym = std::move(sym);
  n->jet = std::move(jet);
  assert(n->jet.size() == n->fsym->slots.size());
  return n;
}

inline Expr make_func(FuncSymbol sym) {
  std::vector<int> jet(sym ? sym->slots.size() : 0, 0);
  return make_func(std::move(sym), std::move(jet));
}

inline bool is_num(const Expr& e) { return e->kind == Kind::Num; }
inline bool is_num(const Expr& e, long v) { return e->kind == Kind::Num && e->num == v; }

Expr make_kernel(Fn f, Expr arg);

/// Sum with light folding: flattens nested sums, merges numeric terms,
/// drops zeros. Not a normal form - just keeps trees small.
inline Expr make_sum(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  Rat c(0);
  for (auto& k : kids) {
    if (k->kind == Kind::Sum) {
      for (auto& kk : k->kids) {
        if (is_num(kk)) c += kk->num;
        else flat.push_back(kk);
      }
    } else if (is_num(k)) {
      c += k->num;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (c != 0) flat.push_back(make_num(c));
  if (flat.empty()) return zero_expr();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->kids = std::move(flat);
  return n;
}

/// Product with light folding: flattens, folds numeric coefficients,
/// short-circuits on zero.
inline Expr make_prod(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  Rat c(1);
  for (auto& k : kids) {
    if (k->kind == Kind::Prod) {
      for (auto& kk : k->kids) {
        if (is_num(kk)) c *= kk->num;
        else flat.push_back(kk);
      }
    } else if (is_num(k)) {
      c *= k->num;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (c == 0) return zero_expr();
  if (c != 1) flat.insert(flat.begin(), make_num(c));
  if (flat.empty()) return one_expr();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prod;
  n->kids = std::move(flat);
  return n;
}

/// Power. Applies exactly the sanctioned rewrites: numeric folding for
/// integer exponents, b^0 = 1, b^1 = b, and (b^alpha)^n = b^(alpha*n) for
/// integer n only.
inline Expr make_pow(Expr base, Expr expo) {
  if (is_num(expo, 1)) return base;
  if (is_num(expo, 0)) return one_expr();
  if (is_num(base, 1)) return one_expr();
  if (is_num(expo) && is_integer(expo->num)) {
    if (is_num(base)) {
      if (auto n = as_long(expo->num)) return make_num(rat_pow(base->num, *n));
    }
    if (base->kind == Kind::Pow) {
      // (b^alpha)^n -> b^(alpha*n)
      return make_pow(base->base, make_prod({base->expo, expo}));
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->base = std::move(base);
  n->expo = std::move(expo);
  return n;
}

inline Expr make_kernel(Fn f, Expr arg) {
  if (is_num(arg)) {
    switch (f) {
      case Fn::exp:
        if (arg->num == 0) return one_expr();
        break;
      case Fn::ln:
        if (arg->num == 1) return zero_expr();
        break;
      case Fn::arctan:
      case Fn::sin:
        if (arg->num == 0) return zero_expr();
        break;
      case Fn::cos:
        if (arg->num == 0) return one_expr();
        break;
      case Fn::sqrt: {
        if (auto r = rat_root(arg->num, 2)) return make_num(*r);
        break;
      }
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Kernel;
  n->fn = f;
  n->arg = std::move(arg);
  return n;
}

inline Expr neg(Expr e) { return make_prod({make_num(-1), std::move(e)}); }
inline Expr add(Expr a, Expr b) { return make_sum({std::move(a), std::move(b)}); }
inline Expr sub(Expr a, Expr b) { return make_sum({std::move(a), neg(std::move(b))}); }
inline Expr mul(Expr a, Expr b) { return make_prod({std::move(a), std::move(b)}); }
inline Expr div(Expr a, Expr b) {
  return make_prod({std::move(a), make_pow(std::move(b), make_num(-1))});
}

// ---- structural comparison ------------------------------------------------

/// Total order on expression trees; 0 iff structurally identical.
inline int cmp_expr(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case Kind::Num:
      return cmp(a->num, b->num);
    case Kind::Var:
      return a->var == b->var ? 0 : (a->var < b->var ? -1 : 1);
    case Kind::Param:
      return a->param.compare(b->param);
    case Kind::Func: {
      if (int c = a->fsym->name.compare(b->fsym->name)) return c;
      if (a->jet != b->jet) return a->jet < b->jet ? -1 : 1;
      // same name: slots are required to agree by the context contract
      return 0;
    }
    case Kind::Kernel: {
      if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
      return cmp_expr(a->arg, b->arg);
    }
    case Kind::Pow: {
      if (int c = cmp_expr(a->base, b->base)) return c;
      return cmp_expr(a->expo, b->expo);
    }
    case Kind::Sum:
    case Kind::Prod: {
      if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (int c = cmp_expr(a->kids[i], b->kids[i])) return c;
      return 0;
    }
  }
  return 0;
}

inline bool equal_expr(const Expr& a, const Expr& b) { return cmp_expr(a, b) == 0; }

/// True if `v` occurs anywhere in `e` (slot expressions of function atoms
/// included, since derivatives reach them through the chain rule).
inline bool depends_on(const Expr& e, Var v) {
  switch (e->kind) {
    case Kind::Num:
    case Kind::Param:
      return false;
    case Kind::Var:
      return e->var == v;
    case Kind::Func:
      for (const auto& s : e->fsym->slots)
        if (depends_on(s, v)) return true;
      return false;
    case Kind::Kernel:
      return depends_on(e->arg, v);
    case Kind::Pow:
      return depends_on(e->base, v) || depends_on(e->expo, v);
    case Kind::Sum:
    case Kind::Prod:
      for (const auto& k : e->kids)
        if (depends_on(k, v)) return true;
      return false;
  }
  return false;
}

// ---- printing -------------------------------------------------------------
// Grammar precedence: sum < product < power < unary-atom. The printer emits
// strings the parser maps back to the same tree (after normalize).

namespace detail {

inline void print_expr(std::ostream& os, const Expr& e, int parent_prec);

// precedence levels: 0 sum, 1 product, 2 unary-minus, 3 power/atom
inline int prec_of(const Expr& e) {
  switch (e->kind) {
    case Kind::Sum:
      return 0;
    case Kind::Prod:
      return 1;
    case Kind::Num:
      return (sgn(e->num) < 0) ? 2 : (is_integer(e->num) ? 4 : 3);
    case Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

inline void print_atomish(std::ostream& os, const Expr& e, int parent_prec) {
  bool parens = prec_of(e) < parent_prec;
  if (parens) os << "(";
  print_expr(os, e, 0);
  if (parens) os << ")";
}

inline void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
  switch (e->kind) {
    case Kind::Num:
      os << rat_str(e->num);
      return;
    case Kind::Var:
      os << var_name(e->var);
      return;
    case Kind::Param:
      os << e->param;
      return;
    case Kind::Func: {
      os << e->fsym->name;
      bool any = std::any_of(e->jet.begin(), e->jet.end(), [](int k) { return k != 0; });
      if (any) {
        os << "{";
        for (size_t i = 0; i < e->jet.size(); ++i) os << (i ? "," : "") << e->jet[i];
        os << "}";
      }
      os << "(";
      for (size_t i = 0; i < e->fsym->slots.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, e->fsym->slots[i], 0);
      }
      os << ")";
      return;
    }
    case Kind::Kernel:
      os << fn_name(e->fn) << "(";
      print_expr(os, e->arg, 0);
      os << ")";
      return;
    case Kind::Pow:
      print_atomish(os, e->base, 4);
      os << "^";
      // exponent: unary level - a bare (possibly negated) atom, else parens
      if (e->expo->kind == Kind::Num || e->expo->kind == Kind::Var ||
          e->expo->kind == Kind::Param) {
        print_expr(os, e->expo, 0);
      } else {
        os << "(";
        print_expr(os, e->expo, 0);
        os << ")";
      }
      return;
    case Kind::Prod: {
      bool parens = parent_prec > 1;
      if (parens) os << "(";
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) os << "*";
        print_atomish(os, e->kids[i], 2);
      }
      if (parens) os << ")";
      return;
    }
    case Kind::Sum: {
      bool parens = parent_prec > 0;
      if (parens) os << "(";
      for (size_t i = 0; i < e->kids.size(); ++i) {
        const Expr& k = e->kids[i];
        // pull a leading minus out of numeric terms / products
        Expr body = k;
        bool negative = false;
        if (k->kind == Kind::Num && sgn(k->num) < 0) {
          negative = true;
          body = make_num(-k->num);
        } else if (k->kind == Kind::Prod && is_num(k->kids[0]) && sgn(k->kids[0]->num) < 0) {
          std::vector<Expr> kk = k->kids;
          if (kk[0]->num == -1) kk.erase(kk.begin());
          else kk[0] = make_num(-kk[0]->num);
          negative = true;
          body = make_prod(kk);
        }
        if (i == 0) {
          if (negative) os << "-";
        } else {
          os << (negative ? " - " : " + ");
        }
        print_atomish(os, body, 1);
      }
      if (parens) os << ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::ostringstream os;
  detail::print_expr(os, e, 0);
  return os.str();
}

}  // namespace evosym
