#pragma once

#include "evosym/expr.hpp"

namespace evosym {

/// Partial derivative with respect to one of the six variables. Arbitrary
/// functions differentiate through the chain rule: the derivative of a jet
/// atom f{m}(s1,...,sk) is sum_i f{m+1_i}(s...) * d(s_i)/dv.
inline Expr diff(const Expr& e, Var v) {
  switch (e->kind) {
    case Kind::Num:
    case Kind::Param:
      return zero_expr();
    case Kind::Var:
      return e->var == v ? one_expr() : zero_expr();
    case Kind::Sum: {
      std::vector<Expr> parts;
      parts.reserve(e->kids.size());
      for (const auto& k : e->kids) parts.push_back(diff(k, v));
      return make_sum(std::move(parts));
    }
    case Kind::Prod: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        Expr di = diff(e->kids[i], v);
        if (is_num(di, 0)) continue;
        std::vector<Expr> factors;
        factors.reserve(e->kids.size());
        for (size_t j = 0; j < e->kids.size(); ++j) factors.push_back(j == i ? di : e->kids[j]);
        terms.push_back(make_prod(std::move(factors)));
      }
      return make_sum(std::move(terms));
    }
    case Kind::Pow: {
      Expr db = diff(e->base, v);
      Expr de = diff(e->expo, v);
      if (is_num(de, 0)) {
        // e * b^(e-1) * b'
        if (is_num(db, 0)) return zero_expr();
        Expr em1 = make_sum({e->expo, make_num(-1)});
        return make_prod({e->expo, make_pow(e->base, em1), db});
      }
      // b^e * (e' ln b + e b'/b)
      Expr term1 = make_prod({de, make_kernel(Fn::ln, e->base)});
      Expr term2 = make_prod({e->expo, db, make_pow(e->base, make_num(-1))});
      return make_prod({e, make_sum({term1, term2})});
    }
    case Kind::Kernel: {
      Expr da = diff(e->arg, v);
      if (is_num(da, 0)) return zero_expr();
      Expr inner;
      switch (e->fn) {
        case Fn::exp:
          inner = e;
          break;
        case Fn::ln:
          inner = make_pow(e->arg, make_num(-1));
          break;
        case Fn::arctan:
          inner = make_pow(make_sum({one_expr(), make_pow(e->arg, make_num(2))}), make_num(-1));
          break;
        case Fn::sqrt:
          inner = make_prod({make_num(rat(1, 2)), make_pow(e->arg, make_num(rat(-1, 2)))});
          break;
        case Fn::sin:
          inner = make_kernel(Fn::cos, e->arg);
          break;
        case Fn::cos:
          inner = neg(make_kernel(Fn::sin, e->arg));
          break;
      }
      return make_prod({inner, da});
    }
    case Kind::Func: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < e->fsym->slots.size(); ++i) {
        Expr ds = diff(e->fsym->slots[i], v);
        if (is_num(ds, 0)) continue;
        std::vector<int> jet = e->jet;
        jet[i] += 1;
        terms.push_back(make_prod({make_func(e->fsym, std::move(jet)), ds}));
      }
      return make_sum(std::move(terms));
    }
  }
  return zero_expr();
}

/// Substitute expressions for variables (simultaneous). Function slots are
/// not rewritten: substitution is only used on concrete expressions
/// (transformation components, vector-field coefficients).
inline Expr subst(const Expr& e, const Expr* repl /*indexed by Var*/) {
  switch (e->kind) {
    case Kind::Num:
    case Kind::Param:
      return e;
    case Kind::Var: {
      const Expr& r = repl[static_cast<int>(e->var)];
      return r ? r : e;
    }
    case Kind::Sum: {
      std::vector<Expr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(subst(k, repl));
      return make_sum(std::move(kids));
    }
    case Kind::Prod: {
      std::vector<Expr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(subst(k, repl));
      return make_prod(std::move(kids));
    }
    case Kind::Pow:
      return make_pow(subst(e->base, repl), subst(e->expo, repl));
    case Kind::Kernel:
      return make_kernel(e->fn, subst(e->arg, repl));
    case Kind::Func:
      throw std::invalid_argument("subst: arbitrary function atoms are not substitutable");
  }
  return e;
}

inline Expr subst_var(const Expr& e, Var v, const Expr& value) {
  Expr repl[6] = {};
  repl[static_cast<int>(v)] = value;
  return subst(e, repl);
}

}  // namespace evosym
