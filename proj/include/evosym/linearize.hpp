#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <string>
#include <vector>

#include "evosym/algebra.hpp"

namespace evosym {

/// Outcome of the linearizability screen. A flagged basis admits a symmetry
/// subalgebra that forces the equation to be linearizable by a point
/// transformation: either a rank-one three-dimensional solvable subalgebra
/// or an abelian subalgebra of dimension >= 4. The reason names the witness
/// subset in terms of 1-based basis positions.
struct LinearizeResult {
  bool flagged = false;
  std::string reason;
};

namespace detail {

/// Evaluate each field's (a,b,c) at several sampled points and stack the
/// values; the matrix rank estimates the dimension of the span of the
/// fields over the constants (not the pointwise rank).
inline int field_span_rank(const std::vector<VectorField>& fields, const Context& ctx,
                           std::uint64_t seed) {
  const int points = 12;
  const int n = static_cast<int>(fields.size());
  if (n == 0) return 0;
  Eigen::MatrixXd m(n, 3 * points);
  for (int p = 0; p < points; ++p) {
    bool ok = false;
    for (int salt = 0; salt < 8 && !ok; ++salt) {
      EvalEnv env =
          make_env(split_seed(seed, "span:" + std::to_string(p) + ":" + std::to_string(salt)),
                   ctx);
      for (int i = 0; i < n; ++i) {
        m(i, 3 * p + 0) = eval(fields[i].a, env);
        m(i, 3 * p + 1) = eval(fields[i].b, env);
        m(i, 3 * p + 2) = eval(fields[i].c, env);
      }
      ok = !env.domain_error;
    }
    if (!ok) throw IndeterminateError("span sampling hit repeated domain errors");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) > 1e-9 * smax) ++rank;
  return rank;
}

/// Check numerically that the triple closes under the bracket and, if so,
/// return the structure tensor; closure is a least-squares fit of each
/// bracket against the triple at stacked sample points.
inline bool closed_structure(const std::vector<VectorField>& triple, const Context& ctx,
                             std::uint64_t seed,
                             std::vector<std::vector<std::vector<double>>>& tensor) {
  const int points = 12;
  const int n = static_cast<int>(triple.size());
  Eigen::MatrixXd A(3 * points, n);
  std::vector<VectorField> brs;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      brs.push_back(bracket(triple[i], triple[j]));
      pairs.emplace_back(i, j);
    }
  Eigen::MatrixXd B(3 * points, static_cast<int>(brs.size()));
  for (int p = 0; p < points; ++p) {
    bool ok = false;
    for (int salt = 0; salt < 8 && !ok; ++salt) {
      EvalEnv env = make_env(
          split_seed(seed, "close:" + std::to_string(p) + ":" + std::to_string(salt)), ctx);
      for (int i = 0; i < n; ++i) {
        A(3 * p + 0, i) = eval(triple[i].a, env);
        A(3 * p + 1, i) = eval(triple[i].b, env);
        A(3 * p + 2, i) = eval(triple[i].c, env);
      }
      for (size_t k = 0; k < brs.size(); ++k) {
        B(3 * p + 0, static_cast<int>(k)) = eval(brs[k].a, env);
        B(3 * p + 1, static_cast<int>(k)) = eval(brs[k].b, env);
        B(3 * p + 2, static_cast<int>(k)) = eval(brs[k].c, env);
      }
      ok = !env.domain_error;
    }
    if (!ok) return false;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  tensor.assign(n, std::vector(n, std::vector<double>(n, 0.0)));
  for (size_t k = 0; k < brs.size(); ++k) {
    Eigen::VectorXd b = B.col(static_cast<int>(k));
    Eigen::VectorXd x = svd.solve(b);
    double resid = (A * x - b).norm();
    if (resid > 1e-6 * (1.0 + b.norm())) return false;
    auto [i, j] = pairs[k];
    for (int m = 0; m < n; ++m) {
      tensor[i][j][m] = x(m);
      tensor[j][i][m] = -x(m);
    }
  }
  return true;
}

struct Candidate {
  std::vector<VectorField> fields;
  std::string label;
};

inline void triple_candidates(const std::vector<VectorField>& basis,
                              std::vector<Candidate>& out) {
  const int n = static_cast<int>(basis.size());
  auto name = [](int i) { return "e" + std::to_string(i + 1); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        out.push_back({{basis[i], basis[j], basis[k]},
                       name(i) + ", " + name(j) + ", " + name(k)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (int l = k + 1; l < n; ++l) {
          if (l == i || l == j) continue;
          for (int sign : {+1, -1}) {
            VectorField combo =
                sign > 0 ? vf_add(basis[k], basis[l]) : vf_sub(basis[k], basis[l]);
            std::string lbl = name(i) + ", " + name(j) + ", " + name(k) +
                              (sign > 0 ? "+" : "-") + name(l);
            out.push_back({{basis[i], basis[j], combo}, lbl});
          }
        }
      }
}

}  // namespace detail

/// Screen a basis for linearizing subalgebras. Candidates are all pure
/// 3-subsets plus triples whose third element is e_k +/- e_l; abelian
/// screening uses pure 4-subsets. The first witness in deterministic
/// enumeration order is reported.
inline LinearizeResult flag_linearizing(const std::vector<VectorField>& basis,
                                        const Context& ctx, std::uint64_t seed) {
  const int n = static_cast<int>(basis.size());
  if (n < 3) return {};

  std::vector<detail::Candidate> triples;
  detail::triple_candidates(basis, triples);
  for (size_t c = 0; c < triples.size(); ++c) {
    const auto& cand = triples[c];
    std::uint64_t cseed = split_seed(seed, "cand:" + std::to_string(c));
    try {
      if (detail::field_span_rank(cand.fields, ctx, cseed) != 3) continue;
      std::vector<std::vector<std::vector<double>>> tensor;
      if (!detail::closed_structure(cand.fields, ctx, cseed, tensor)) continue;
      auto series = detail::numeric_derived_series(tensor, 3);
      if (series.back() != 0) continue;
      if (generic_rank(cand.fields, ctx, cseed) != 1) continue;
    } catch (const IndeterminateError&) {
      continue;
    }
    return {true, "rank1_solvable_3d(" + cand.label + ")"};
  }

  auto name = [](int i) { return "e" + std::to_string(i + 1); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          std::vector<VectorField> four = {basis[i], basis[j], basis[k], basis[l]};
          std::string lbl =
              name(i) + ", " + name(j) + ", " + name(k) + ", " + name(l);
          std::uint64_t cseed = split_seed(seed, "abel:" + lbl);
          try {
            if (detail::field_span_rank(four, ctx, cseed) != 4) continue;
            if (!is_abelian(four, ctx, cseed)) continue;
          } catch (const IndeterminateError&) {
            continue;
          }
          return {true, "abelian_ge4(" + lbl + ")"};
        }

  return {};
}

}  // namespace evosym
