#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evosym/expr.hpp"

namespace evosym {

/// One clause of a parameter constraint. The surface syntax is a
/// comma-separated clause list, e.g. "in(-1,1), nonzero" or "oneof(-1,1)"
/// or "ne 1" or "le q". `eq r` is special: the loader substitutes the value
/// exactly instead of sampling.
struct ConstraintClause {
  enum class Kind { Nonzero, Pos, Neg, In, AbsIn, Ne, Eq, OneOf, Le, Ge } kind;
  double lo = 0, hi = 0;          // In / AbsIn
  Rat value;                       // Ne / Eq
  std::vector<Rat> choices;        // OneOf
  std::string other;               // Le / Ge: the other parameter's name
};

struct ParamSpec {
  std::string name;
  std::vector<ConstraintClause> clauses;

  std::optional<Rat> fixed_value() const {
    for (const auto& c : clauses)
      if (c.kind == ConstraintClause::Kind::Eq) return c.value;
    return std::nullopt;
  }
};

namespace detail {

inline void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline Rat parse_signed_rational(const std::string& s, size_t& i) {
  skip_ws(s, i);
  size_t start = i;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  while (i < s.size() && (isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
  if (i == start) throw std::invalid_argument("expected rational in constraint: " + s);
  Rat r(s.substr(start, i - start));
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Parses the constraint mini-language. Throws std::invalid_argument on
/// malformed input.
inline std::vector<ConstraintClause> parse_constraint(const std::string& text) {
  std::vector<ConstraintClause> out;
  size_t i = 0;
  auto expect = [&](char ch) {
    detail::skip_ws(text, i);
    if (i >= text.size() || text[i] != ch)
      throw std::invalid_argument("constraint syntax error near offset " + std::to_string(i) +
                                  " in: " + text);
    ++i;
  };
  while (true) {
    detail::skip_ws(text, i);
    if (i >= text.size()) break;
    size_t start = i;
    while (i < text.size() && isalpha(static_cast<unsigned char>(text[i]))) ++i;
    std::string word = text.substr(start, i - start);
    ConstraintClause c;
    if (word == "nonzero") {
      c.kind = ConstraintClause::Kind::Nonzero;
    } else if (word == "pos") {
      c.kind = ConstraintClause::Kind::Pos;
    } else if (word == "neg") {
      c.kind = ConstraintClause::Kind::Neg;
    } else if (word == "in" || word == "absin") {
      c.kind = word == "in" ? ConstraintClause::Kind::In : ConstraintClause::Kind::AbsIn;
      expect('(');
      Rat lo = detail::parse_signed_rational(text, i);
      expect(',');
      Rat hi = detail::parse_signed_rational(text, i);
      expect(')');
      c.lo = lo.get_d();
      c.hi = hi.get_d();
      if (!(c.lo < c.hi)) throw std::invalid_argument("empty interval in constraint: " + text);
    } else if (word == "ne" || word == "eq") {
      c.kind = word == "ne" ? ConstraintClause::Kind::Ne : ConstraintClause::Kind::Eq;
      c.value = detail::parse_signed_rational(text, i);
    } else if (word == "oneof") {
      c.kind = ConstraintClause::Kind::OneOf;
      expect('(');
      while (true) {
        c.choices.push_back(detail::parse_signed_rational(text, i));
        detail::skip_ws(text, i);
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        break;
      }
      expect(')');
    } else if (word == "le" || word == "ge") {
      c.kind = word == "le" ? ConstraintClause::Kind::Le : ConstraintClause::Kind::Ge;
      detail::skip_ws(text, i);
      size_t ns = i;
      while (i < text.size() && (isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      c.other = text.substr(ns, i - ns);
      if (c.other.empty())
        throw std::invalid_argument("le/ge needs a parameter name in: " + text);
    } else {
      throw std::invalid_argument("unknown constraint clause '" + word + "' in: " + text);
    }
    out.push_back(std::move(c));
    detail::skip_ws(text, i);
    if (i < text.size()) {
      if (text[i] != ',')
        throw std::invalid_argument("expected ',' between constraint clauses in: " + text);
      ++i;
    }
  }
  return out;
}

/// Declaration context for parsing and evaluation: parameters with their
/// sampling constraints, expression aliases, and arbitrary-function symbols.
/// Frozen once an entry is loaded; shared read-only across checks.
class Context {
 public:
  void declare_param(const std::string& name, const std::string& constraint = "") {
    if (params_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
    params_[name] = ParamSpec{name, constraint.empty() ? std::vector<ConstraintClause>{}
                                                       : parse_constraint(constraint)};
    order_.push_back(name);
  }

  void declare_alias(const std::string& name, Expr value) {
    if (aliases_.count(name)) throw std::invalid_argument("duplicate alias: " + name);
    aliases_[name] = std::move(value);
  }

  FuncSymbol declare_func(const std::string& name, std::vector<Expr> slots) {
    if (funcs_.count(name)) throw std::invalid_argument("duplicate function: " + name);
    auto sym = std::make_shared<FuncSymbolData>(FuncSymbolData{name, std::move(slots)});
    funcs_[name] = sym;
    return sym;
  }

  bool has_param(const std::string& n) const { return params_.count(n) != 0; }
  bool has_alias(const std::string& n) const { return aliases_.count(n) != 0; }
  bool has_func(const std::string& n) const { return funcs_.count(n) != 0; }

  const ParamSpec& param(const std::string& n) const { return params_.at(n); }
  const Expr& alias(const std::string& n) const { return aliases_.at(n); }
  const FuncSymbol& func(const std::string& n) const { return funcs_.at(n); }

  const std::vector<std::string>& param_order() const { return order_; }
  const std::map<std::string, FuncSymbol>& funcs() const { return funcs_; }

 private:
  std::map<std::string, ParamSpec> params_;
  std::map<std::string, Expr> aliases_;
  std::map<std::string, FuncSymbol> funcs_;
  std::vector<std::string> order_;
};

}  // namespace evosym
