#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "evosym/vectorfield.hpp"

namespace evosym {

/// Abstract solvable Lie algebra as a structure-constant table over the
/// paper's ordered basis. Coefficients are expressions in the table
/// parameters only.
struct StructureTable {
  std::string name;
  int dim = 0;
  std::vector<std::pair<std::string, std::string>> params;  // name -> default constraint
  std::map<std::pair<int, int>, std::vector<Expr>> brackets;  // 0-based i<j

  /// Coefficients of [e_i, e_j] in the basis, any index order (antisymmetry
  /// applied), zero-filled when the pair is not stored.
  std::vector<Expr> bracket_coeffs(int i, int j) const {
    bool flip = i > j;
    if (flip) std::swap(i, j);
    std::vector<Expr> out(dim, zero_expr());
    auto it = brackets.find({i, j});
    if (it != brackets.end()) out = it->second;
    if (flip)
      for (auto& e : out) e = neg(e);
    return out;
  }

  /// Context holding the table's parameters under their default constraints.
  Context default_context() const {
    Context ctx;
    for (const auto& [n, c] : params) ctx.declare_param(n, c);
    return ctx;
  }
};

namespace detail {

class TableBuilder {
 public:
  TableBuilder(std::string name, int dim) {
    t_.name = std::move(name);
    t_.dim = dim;
    for (int k = 1; k <= dim; ++k) markers_.push_back("e" + std::to_string(k));
  }
  TableBuilder& param(const std::string& name, const std::string& constraint) {
    t_.params.emplace_back(name, constraint);
    ctx_.declare_param(name, constraint);
    return *this;
  }
  /// 1-based indices, matching the source tables: br(2,3,"e1") encodes
  /// [e2,e3] = e1.
  TableBuilder& br(int i, int j, const std::string& rhs) {
    t_.brackets[{i - 1, j - 1}] = extract_linear(rhs, ctx_, markers_);
    return *this;
  }
  StructureTable build() { return t_; }

 private:
  StructureTable t_;
  Context ctx_;
  std::vector<std::string> markers_;
};

}  // namespace detail

/// Block-diagonal direct sum A (+) B.
inline StructureTable direct_sum(const StructureTable& A, const StructureTable& B) {
  StructureTable out;
  out.name = A.name + "+" + B.name;
  out.dim = A.dim + B.dim;
  out.params = A.params;
  for (const auto& p : B.params) {
    for (const auto& q : A.params)
      if (p.first == q.first)
        throw std::invalid_argument("parameter name clash in direct sum: " + p.first);
    out.params.push_back(p);
  }
  for (const auto& [ij, coeffs] : A.brackets) {
    std::vector<Expr> padded(out.dim, zero_expr());
    for (int k = 0; k < A.dim; ++k) padded[k] = coeffs[k];
    out.brackets[ij] = std::move(padded);
  }
  for (const auto& [ij, coeffs] : B.brackets) {
    std::vector<Expr> padded(out.dim, zero_expr());
    for (int k = 0; k < B.dim; ++k) padded[A.dim + k] = coeffs[k];
    out.brackets[{ij.first + A.dim, ij.second + A.dim}] = std::move(padded);
  }
  return out;
}

namespace detail {

inline StructureTable base_table(const std::string& name) {
  using TB = TableBuilder;
  if (name == "A1") return TB("A1", 1).build();
  if (name == "A2.1") return TB("A2.1", 2).build();
  if (name == "A2.2") return TB("A2.2", 2).br(1, 2, "e1").build();
  if (name == "A3.2") return TB("A3.2", 3).br(1, 2, "e1").build();
  if (name == "A3.3") return TB("A3.3", 3).br(2, 3, "e1").build();
  if (name == "A3.4") return TB("A3.4", 3).br(1, 3, "e1").br(2, 3, "e1+e2").build();
  if (name == "A3.5") return TB("A3.5", 3).br(1, 3, "e1").br(2, 3, "e2").build();
  if (name == "A3.6") return TB("A3.6", 3).br(1, 3, "e1").br(2, 3, "-e2").build();
  if (name == "A3.7")
    return TB("A3.7", 3).param("q", "absin(0,1)").br(1, 3, "e1").br(2, 3, "q*e2").build();
  // A3.8/A3.9: the source tables carry a misprint ("[e1,e2]=-e2"); the
  // surrounding derivations force [e1,e3] on the left, encoded here.
  if (name == "A3.8") return TB("A3.8", 3).br(1, 3, "-e2").br(2, 3, "e1").build();
  if (name == "A3.9")
    return TB("A3.9", 3).param("q", "pos").br(1, 3, "q*e1-e2").br(2, 3, "e1+q*e2").build();
  if (name == "A4.1") return TB("A4.1", 4).br(2, 4, "e1").br(3, 4, "e2").build();
  if (name == "A4.2")
    return TB("A4.2", 4)
        .param("q", "nonzero")
        .br(1, 4, "q*e1")
        .br(2, 4, "e2")
        .br(3, 4, "e2+e3")
        .build();
  if (name == "A4.3") return TB("A4.3", 4).br(1, 4, "e1").br(3, 4, "e2").build();
  if (name == "A4.4")
    return TB("A4.4", 4).br(1, 4, "e1").br(2, 4, "e1+e2").br(3, 4, "e2+e3").build();
  if (name == "A4.5")
    return TB("A4.5", 4)
        .param("q", "in(-1,1), nonzero")
        .param("p", "in(-1,1), nonzero, le q")
        .br(1, 4, "e1")
        .br(2, 4, "q*e2")
        .br(3, 4, "p*e3")
        .build();
  if (name == "A4.6")
    return TB("A4.6", 4)
        .param("q", "nonzero")
        .param("p", "pos")
        .br(1, 4, "q*e1")
        .br(2, 4, "p*e2-e3")
        .br(3, 4, "e2+p*e3")
        .build();
  if (name == "A4.7")
    return TB("A4.7", 4)
        .br(2, 3, "e1")
        .br(1, 4, "2*e1")
        .br(2, 4, "e2")
        .br(3, 4, "e2+e3")
        .build();
  if (name == "A4.8")
    return TB("A4.8", 4)
        .param("q", "in(-1,1)")
        .br(2, 3, "e1")
        .br(1, 4, "(1+q)*e1")
        .br(2, 4, "e2")
        .br(3, 4, "q*e3")
        .build();
  if (name == "A4.9")
    return TB("A4.9", 4)
        .param("q", "pos")
        .br(2, 3, "e1")
        .br(1, 4, "2*q*e1")
        .br(2, 4, "q*e2-e3")
        .br(3, 4, "e2+q*e3")
        .build();
  if (name == "A4.10")
    return TB("A4.10", 4)
        .br(1, 3, "e1")
        .br(2, 3, "e2")
        .br(1, 4, "-e2")
        .br(2, 4, "e1")
        .build();
  if (name == "A5.19")
    return TB("A5.19", 5)
        .param("p", "")
        .param("q", "nonzero")
        .br(2, 3, "e1")
        .br(1, 5, "(p+1)*e1")
        .br(2, 5, "e2")
        .br(3, 5, "p*e3")
        .br(4, 5, "q*e4")
        .build();
  if (name == "A5.20")
    return TB("A5.20", 5)
        .param("p", "")
        .br(2, 3, "e1")
        .br(1, 5, "(p+1)*e1")
        .br(2, 5, "e2")
        .br(3, 5, "p*e3")
        .br(4, 5, "e1+(p+1)*e4")
        .build();
  if (name == "A5.21")
    return TB("A5.21", 5)
        .br(2, 3, "e1")
        .br(1, 5, "2*e1")
        .br(2, 5, "e2+e3")
        .br(3, 5, "e3+e4")
        .br(4, 5, "e4")
        .build();
  if (name == "A5.22")
    return TB("A5.22", 5).br(2, 3, "e1").br(2, 5, "e3").br(4, 5, "e4").build();
  if (name == "A5.23")
    return TB("A5.23", 5)
        .param("p", "nonzero")
        .br(2, 3, "e1")
        .br(1, 5, "2*e1")
        .br(2, 5, "e2+e3")
        .br(3, 5, "e3")
        .br(4, 5, "p*e4")
        .build();
  if (name == "A5.24")
    return TB("A5.24", 5)
        .param("eps", "oneof(-1,1)")
        .br(2, 3, "e1")
        .br(1, 5, "2*e1")
        .br(2, 5, "e2+e3")
        .br(3, 5, "e3")
        .br(4, 5, "eps*e1+2*e4")
        .build();
  if (name == "A5.25")
    return TB("A5.25", 5)
        .param("p", "")
        .param("q", "nonzero")
        .br(2, 3, "e1")
        .br(1, 5, "2*p*e1")
        .br(2, 5, "p*e2+e3")
        .br(3, 5, "-e2+p*e3")
        .br(4, 5, "q*e4")
        .build();
  if (name == "A5.26")
    return TB("A5.26", 5)
        .param("p", "")
        .param("eps", "oneof(-1,1)")
        .br(2, 3, "e1")
        .br(1, 5, "2*p*e1")
        .br(2, 5, "p*e2+e3")
        .br(3, 5, "-e2+p*e3")
        .br(4, 5, "eps*e1+2*p*e4")
        .build();
  if (name == "A5.27")
    return TB("A5.27", 5)
        .br(2, 3, "e1")
        .br(1, 5, "e1")
        .br(3, 5, "e3+e4")
        .br(4, 5, "e1+e4")
        .build();
  if (name == "A5.28")
    return TB("A5.28", 5)
        .param("p", "")
        .br(2, 3, "e1")
        .br(1, 5, "(p+1)*e1")
        .br(2, 5, "p*e2")
        .br(3, 5, "e3+e4")
        .br(4, 5, "e4")
        .build();
  if (name == "A5.29")
    return TB("A5.29", 5).br(2, 3, "e1").br(1, 5, "e1").br(2, 5, "e2").br(3, 5, "e4").build();
  if (name == "A5.30")
    return TB("A5.30", 5)
        .param("p", "")
        .br(2, 4, "e1")
        .br(3, 4, "e2")
        .br(1, 5, "(p+2)*e1")
        .br(2, 5, "(p+1)*e2")
        .br(3, 5, "p*e3")
        .br(4, 5, "e4")
        .build();
  if (name == "A5.32")
    return TB("A5.32", 5)
        .param("p", "")
        .br(2, 4, "e1")
        .br(3, 4, "e2")
        .br(1, 5, "e1")
        .br(2, 5, "e2")
        .br(3, 5, "p*e1+e3")
        .build();
  if (name == "A5.33")
    return TB("A5.33", 5)
        .param("p", "")
        .param("q", "")
        .br(1, 4, "e1")
        .br(3, 4, "p*e3")
        .br(2, 5, "e2")
        .br(3, 5, "q*e3")
        .build();
  if (name == "A5.34")
    return TB("A5.34", 5)
        .param("p", "")
        .br(1, 4, "p*e1")
        .br(2, 4, "e2")
        .br(3, 4, "e3")
        .br(1, 5, "e1")
        .br(3, 5, "e2")
        .build();
  if (name == "A5.35")
    return TB("A5.35", 5)
        .param("p", "")
        .param("q", "")
        .br(1, 4, "p*e1")
        .br(2, 4, "e2")
        .br(3, 4, "e3")
        .br(1, 5, "q*e1")
        .br(2, 5, "-e3")
        .br(3, 5, "e2")
        .build();
  if (name == "A5.36")
    return TB("A5.36", 5)
        .br(2, 3, "e1")
        .br(1, 4, "e1")
        .br(2, 4, "e2")
        .br(2, 5, "-e2")
        .br(3, 5, "e3")
        .build();
  if (name == "A5.37")
    return TB("A5.37", 5)
        .br(2, 3, "e1")
        .br(1, 4, "2*e1")
        .br(2, 4, "e2")
        .br(3, 4, "e3")
        .br(2, 5, "-e3")
        .br(3, 5, "e2")
        .build();
  if (name == "A5.38")
    return TB("A5.38", 5).br(1, 4, "e1").br(2, 5, "e2").br(4, 5, "e3").build();
  throw std::invalid_argument("unknown algebra name: " + name);
}

}  // namespace detail

/// Resolve a (possibly decomposable) algebra name: summands separated by
/// '+', each with an optional multiplicity prefix, e.g. "A3.3+A1",
/// "2A2.2+A1", "3A1".
inline StructureTable builtin_table(const std::string& name) {
  std::vector<StructureTable> parts;
  size_t start = 0;
  while (start <= name.size()) {
    size_t plus = name.find('+', start);
    std::string piece =
        plus == std::string::npos ? name.substr(start) : name.substr(start, plus - start);
    if (piece.empty()) throw std::invalid_argument("bad algebra name: " + name);
    int mult = 1;
    size_t i = 0;
    if (std::isdigit(static_cast<unsigned char>(piece[0])) && piece.size() > 1 &&
        piece[1] == 'A') {
      mult = piece[0] - '0';
      i = 1;
    }
    StructureTable t = detail::base_table(piece.substr(i));
    for (int k = 0; k < mult; ++k) parts.push_back(t);
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  StructureTable out = parts.front();
  for (size_t k = 1; k < parts.size(); ++k) out = direct_sum(out, parts[k]);
  out.name = name;
  return out;
}

/// Extend a context with the table's parameters (defaults apply only where
/// the caller has not already declared the name).
inline Context with_table_params(const Context& ctx, const StructureTable& T) {
  Context out = ctx;
  for (const auto& [n, c] : T.params)
    if (!out.has_param(n)) out.declare_param(n, c);
  return out;
}

// ---------------------------------------------------------------------------
// Realization checking
// ---------------------------------------------------------------------------

struct PairCheck {
  int i = 0, j = 0;  // 1-based, matching the source tables
  Verdict verdict = Verdict::Zero;
  std::string witness;
  std::string defect;  // printed defect field when non-zero
};

struct AlgebraReport {
  std::vector<PairCheck> pairs;

  bool ok() const {
    for (const auto& p : pairs)
      if (p.verdict != Verdict::Zero) return false;
    return true;
  }
  Verdict worst() const {
    Verdict w = Verdict::Zero;
    for (const auto& p : pairs) {
      if (p.verdict == Verdict::NonZero) return Verdict::NonZero;
      if (p.verdict == Verdict::Indeterminate) w = Verdict::Indeterminate;
    }
    return w;
  }
};

/// Verify that an ordered basis of fields realizes the table: for every
/// i<j the defect bracket(e_i,e_j) - sum_k c^k_ij e_k must vanish
/// identically in the parameters.
inline AlgebraReport check_realization(const std::vector<VectorField>& basis,
                                       const StructureTable& T, const Context& ctx,
                                       std::uint64_t seed) {
  if (static_cast<int>(basis.size()) != T.dim)
    throw std::invalid_argument("dimension mismatch: basis has " +
                                std::to_string(basis.size()) + " fields, table wants " +
                                std::to_string(T.dim));
  Context full = with_table_params(ctx, T);
  AlgebraReport report;
  for (int i = 0; i < T.dim; ++i)
    for (int j = i + 1; j < T.dim; ++j) {
      VectorField defect = bracket(basis[i], basis[j]);
      auto coeffs = T.bracket_coeffs(i, j);
      for (int k = 0; k < T.dim; ++k)
        defect = vf_sub(defect, vf_scale(coeffs[k], basis[k]));
      std::string key = "pair:" + std::to_string(i) + ":" + std::to_string(j);
      ZeroResult zr = vf_is_zero(defect, full, split_seed(seed, key));
      PairCheck pc{i + 1, j + 1, zr.verdict, zr.witness, ""};
      if (zr.verdict != Verdict::Zero) pc.defect = print_vf(defect);
      report.pairs.push_back(std::move(pc));
    }
  return report;
}

/// Abstract Jacobi identity of a table, identically in its parameters.
inline Verdict jacobi_ok(const StructureTable& T, std::uint64_t seed) {
  Context ctx = T.default_context();
  Verdict worst = Verdict::Zero;
  for (int i = 0; i < T.dim; ++i)
    for (int j = i + 1; j < T.dim; ++j)
      for (int k = j + 1; k < T.dim; ++k) {
        auto cij = T.bracket_coeffs(i, j);
        auto cjk = T.bracket_coeffs(j, k);
        auto cki = T.bracket_coeffs(k, i);
        for (int m = 0; m < T.dim; ++m) {
          std::vector<Expr> terms;
          for (int l = 0; l < T.dim; ++l) {
            terms.push_back(mul(cij[l], T.bracket_coeffs(l, k)[m]));
            terms.push_back(mul(cjk[l], T.bracket_coeffs(l, i)[m]));
            terms.push_back(mul(cki[l], T.bracket_coeffs(l, j)[m]));
          }
          ZeroResult r = is_zero(make_sum(std::move(terms)), ctx,
                                 split_seed(seed, "jacobi:" + std::to_string(i) + ":" +
                                                      std::to_string(j) + ":" +
                                                      std::to_string(k) + ":" +
                                                      std::to_string(m)));
          if (r.verdict == Verdict::NonZero) return Verdict::NonZero;
          if (r.verdict == Verdict::Indeterminate) worst = Verdict::Indeterminate;
        }
      }
  return worst;
}

// ---------------------------------------------------------------------------
// Solvability diagnostics
// ---------------------------------------------------------------------------

namespace detail {

/// Derived series dimensions of a numeric structure tensor c[i][j][k]
/// (full, antisymmetric). Stops at 0 (solvable) or at a fixed point.
inline std::vector<int> numeric_derived_series(
    const std::vector<std::vector<std::vector<double>>>& c, int dim) {
  std::vector<int> dims{dim};
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(dim, dim);
  int cur = dim;
  while (cur > 0) {
    std::vector<Eigen::VectorXd> gens;
    for (int p = 0; p < cur; ++p)
      for (int q = p + 1; q < cur; ++q) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            double w = basis(p, i) * basis(q, j);
            if (w == 0.0) continue;
            for (int m = 0; m < dim; ++m) z(m) += w * c[i][j][m];
          }
        gens.push_back(z);
      }
    int rank = 0;
    Eigen::MatrixXd V;
    if (!gens.empty()) {
      Eigen::MatrixXd G(gens.size(), dim);
      for (size_t r = 0; r < gens.size(); ++r) G.row(r) = gens[r];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      double smax = sv.size() ? sv(0) : 0.0;
      for (int i = 0; i < sv.size(); ++i)
        if (smax > 0.0 && sv(i) > 1e-9 * smax) ++rank;
      V = svd.matrixV();
    }
    dims.push_back(rank);
    if (rank == 0 || rank >= cur) break;
    basis = V.leftCols(rank).transpose();
    cur = rank;
  }
  return dims;
}

inline std::vector<std::vector<std::vector<double>>> eval_tensor(const StructureTable& T,
                                                                 EvalEnv& env) {
  std::vector tensor(T.dim, std::vector(T.dim, std::vector<double>(T.dim, 0.0)));
  for (int i = 0; i < T.dim; ++i)
    for (int j = i + 1; j < T.dim; ++j) {
      auto coeffs = T.bracket_coeffs(i, j);
      for (int k = 0; k < T.dim; ++k) {
        double v = eval(coeffs[k], env);
        tensor[i][j][k] = v;
        tensor[j][i][k] = -v;
      }
    }
  return tensor;
}

}  // namespace detail

/// Derived series dimensions at generic parameter values (lexicographically
/// largest sequence over several sampled draws).
inline std::vector<int> derived_series(const StructureTable& T, std::uint64_t seed) {
  Context ctx = T.default_context();
  std::vector<int> best;
  for (int draw = 0; draw < 3; ++draw) {
    EvalEnv env = make_env(split_seed(seed, "series:" + std::to_string(draw)), ctx);
    auto tensor = detail::eval_tensor(T, env);
    if (env.domain_error) continue;
    auto dims = detail::numeric_derived_series(tensor, T.dim);
    if (dims > best) best = dims;
  }
  if (best.empty()) throw IndeterminateError("derived series sampling failed");
  return best;
}

inline bool is_solvable(const StructureTable& T, std::uint64_t seed) {
  auto d = derived_series(T, seed);
  return d.back() == 0;
}

/// True iff every pairwise bracket of the realization vanishes identically.
inline bool is_abelian(const std::vector<VectorField>& basis, const Context& ctx,
                       std::uint64_t seed) {
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j) {
      ZeroResult r = vf_is_zero(bracket(basis[i], basis[j]), ctx,
                                split_seed(seed, "abelian:" + std::to_string(i) + ":" +
                                                     std::to_string(j)));
      if (r.verdict != Verdict::Zero) return false;
    }
  return true;
}

}  // namespace evosym
