#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "evosym/context.hpp"
#include "evosym/expr.hpp"

namespace evosym {

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(size_t off, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

/// Recursive-descent parser for
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | power
///   power  := atom ("^" factor)?
///   atom   := RATIONAL | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
/// "^" is right-associative and binds tighter than unary minus, so
/// -x^2 parses as -(x^2) and x^-3 takes a negated exponent. A RATIONAL
/// "p/q" is a single token when written without spaces.
///
/// Identifiers resolve against the fixed variables, the builtin kernels,
/// and the Context (params, aliases, declared arbitrary functions). An
/// application of a declared function may carry a jet suffix, e.g.
/// f{1,0}(tau, omega) - this is how printed derivative atoms round-trip.
class Parser {
 public:
  Parser(std::string text, const Context& ctx) : s_(std::move(text)), ctx_(ctx) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail(pos_, "unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(size_t off, const std::string& msg) { throw ParseError(off, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr parse_sum() {
    std::vector<Expr> terms;
    terms.push_back(parse_term());
    while (true) {
      if (eat('+')) terms.push_back(parse_term());
      else if (eat('-')) terms.push_back(neg(parse_term()));
      else break;
    }
    return make_sum(std::move(terms));
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    while (true) {
      if (eat('*')) acc = mul(acc, parse_factor());
      else if (eat('/')) acc = div(acc, parse_factor());
      else break;
    }
    return acc;
  }

  Expr parse_factor() {
    if (eat('-')) return neg(parse_factor());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (eat('^')) return make_pow(base, parse_factor());
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) fail(pos_, "expected ')'");
      return e;
    }
    if (isdigit(static_cast<unsigned char>(c))) return parse_rational();
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  Expr parse_rational() {
    size_t start = pos_;
    while (pos_ < s_.size() && isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string num = s_.substr(start, pos_ - start);
    std::string den;
    // "p/q" with no interior spaces is one rational token
    if (pos_ + 1 < s_.size() && s_[pos_] == '/' &&
        isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      size_t ds = pos_;
      while (pos_ < s_.size() && isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      den = s_.substr(ds, pos_ - ds);
    }
    if (!den.empty()) {
      Rat d(den);
      if (d == 0) fail(start, "rational with zero denominator");
      Rat r(num + "/" + den);
      r.canonicalize();
      return make_num(r);
    }
    return make_num(Rat(num));
  }

  Expr parse_ident() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);

    // optional jet suffix for derivative atoms of declared functions
    std::vector<int> jet;
    bool has_jet = false;
    if (pos_ < s_.size() && s_[pos_] == '{') {
      has_jet = true;
      ++pos_;
      while (true) {
        skip_ws();
        size_t ds = pos_;
        while (pos_ < s_.size() && isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == ds) fail(pos_, "expected jet index");
        jet.push_back(std::stoi(s_.substr(ds, pos_ - ds)));
        if (eat(',')) continue;
        if (eat('}')) break;
        fail(pos_, "expected ',' or '}' in jet suffix");
      }
    }

    bool call = false;
    std::vector<Expr> args;
    std::vector<size_t> arg_offsets;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      call = true;
      ++pos_;
      while (true) {
        skip_ws();
        arg_offsets.push_back(pos_);
        args.push_back(parse_sum());
        if (eat(',')) continue;
        if (eat(')')) break;
        fail(pos_, "expected ',' or ')'");
      }
    }

    // builtin kernels
    static const std::pair<const char*, Fn> kernels[] = {
        {"exp", Fn::exp}, {"ln", Fn::ln},   {"arctan", Fn::arctan},
        {"sqrt", Fn::sqrt}, {"sin", Fn::sin}, {"cos", Fn::cos}};
    for (auto& [kn, fn] : kernels) {
      if (name == kn) {
        if (!call || args.size() != 1)
          fail(start, std::string(kn) + " takes exactly one argument");
        if (has_jet) fail(start, "jet suffix is only valid on declared functions");
        return make_kernel(fn, args[0]);
      }
    }
    if (name == "abs") {
      if (!call || args.size() != 1) fail(start, "abs takes exactly one argument");
      return args[0];  // positive-orthant convention
    }

    if (ctx_.has_func(name)) {
      const FuncSymbol& sym = ctx_.func(name);
      if (!call) fail(start, "function '" + name + "' must be applied to its arguments");
      if (args.size() != sym->slots.size())
        fail(start, "arity mismatch: '" + name + "' declared with " +
                        std::to_string(sym->slots.size()) + " slot(s), applied to " +
                        std::to_string(args.size()));
      for (size_t i = 0; i < args.size(); ++i) {
        if (!equal_expr(args[i], sym->slots[i]))
          fail(arg_offsets[i], "argument " + std::to_string(i + 1) + " of '" + name +
                                   "' does not match its declared slot");
      }
      if (has_jet) {
        if (jet.size() != sym->slots.size())
          fail(start, "jet suffix length does not match arity of '" + name + "'");
        return make_func(sym, jet);
      }
      return make_func(sym);
    }
    if (has_jet) fail(start, "jet suffix on undeclared function '" + name + "'");
    if (call) fail(start, "'" + name + "' is not a function");

    static const std::pair<const char*, Var> vars[] = {{"t", Var::t},   {"x", Var::x},
                                                       {"u", Var::u},   {"u1", Var::u1},
                                                       {"u2", Var::u2}, {"u3", Var::u3}};
    for (auto& [vn, v] : vars)
      if (name == vn) return make_var(v);

    if (ctx_.has_alias(name)) return ctx_.alias(name);
    if (ctx_.has_param(name)) return make_param(name);
    fail(start, "undeclared identifier '" + name + "'");
  }

  std::string s_;
  size_t pos_ = 0;
  const Context& ctx_;
};

inline Expr parse_expr(const std::string& text, const Context& ctx) {
  return Parser(text, ctx).parse();
}

inline Expr parse_expr(const std::string& text) {
  static const Context empty;
  return Parser(text, empty).parse();
}

}  // namespace evosym
