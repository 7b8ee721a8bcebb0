// evosym — command-line front-end for the symbolic verification toolkit.
//
// Subcommands:
//   bracket "<vf>" "<vf>"                    print the Lie bracket [X, Y]
//   rank "<vf> ; <vf> ; ..."                 generic pointwise rank of a basis
//   check-algebra <table> "<basis>"          verify structure constants
//   check-invariance --basis B --F E --G E   verify the determining equations
//   transform --map M ("<vf>" | --src B --dst B [--cob ROWS])
//   flag-linearizing "<basis>"               detect linearizing subalgebras
//   verify-catalog <path>... [filters]       batch-verify catalog files
//
// Exit codes: 0 = all checks pass, 1 = at least one verification failure,
// 2 = usage or parse error, 3 = indeterminate.  Diagnostics go to stderr.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <fnmatch.h>

#include "CLI11.hpp"
#include "evosym/catalog.hpp"
#include "evosym/transform.hpp"

namespace {

using namespace evosym;

/// Context declarations shared by the expression-taking subcommands.
struct CtxOpts {
  std::vector<std::string> params;   // NAME or NAME=CONSTRAINT
  std::vector<std::string> aliases;  // NAME=EXPR
  std::vector<std::string> funcs;    // NAME(SLOT,...)
};

void attach_ctx_opts(CLI::App* sub, CtxOpts& o) {
  sub->add_option("--param", o.params,
                  "declare a parameter, NAME or NAME=CONSTRAINT (e.g. q=pos)");
  sub->add_option("--alias", o.aliases, "declare an alias, NAME=EXPR");
  sub->add_option("--func", o.funcs,
                  "declare an arbitrary function, NAME(SLOT,...)");
}

Context build_context(const CtxOpts& o) {
  Context ctx;
  for (const auto& s : o.params) {
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      ctx.declare_param(detail::trim(s));
    else
      ctx.declare_param(detail::trim(s.substr(0, eq)),
                        detail::trim(s.substr(eq + 1)));
  }
  for (const auto& s : o.aliases) {
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--alias expects NAME=EXPR, got '" + s + "'");
    ctx.declare_alias(detail::trim(s.substr(0, eq)),
                      parse_expr(s.substr(eq + 1), ctx));
  }
  for (const auto& s : o.funcs) {
    size_t open = s.find('(');
    std::string body = detail::trim(s);
    if (open == std::string::npos || body.back() != ')')
      throw std::invalid_argument("--func expects NAME(SLOT,...), got '" + s + "'");
    std::string name = detail::trim(body.substr(0, open));
    std::string inner = body.substr(open + 1, body.size() - open - 2);
    std::vector<Expr> slots;
    for (const auto& part : detail::split_top(inner, ','))
      slots.push_back(parse_expr(part, ctx));
    ctx.declare_func(name, std::move(slots));
  }
  return ctx;
}

int verdict_exit(Verdict w) {
  if (w == Verdict::Zero) return 0;
  if (w == Verdict::NonZero) return 1;
  return 3;
}

const char* status_word(Verdict w) {
  if (w == Verdict::Zero) return "pass";
  if (w == Verdict::NonZero) return "fail";
  return "indeterminate";
}

// --- subcommand runners ----------------------------------------------------

int run_bracket(const std::string& a, const std::string& b, const Context& ctx,
                bool machine) {
  VectorField Z = bracket(parse_vf(a, ctx), parse_vf(b, ctx));
  if (machine)
    std::cout << "result=" << print_vf(Z) << "\n";
  else
    std::cout << print_vf(Z) << "\n";
  return 0;
}

int run_rank(const std::string& basis_text, const Context& ctx,
             std::uint64_t seed, bool machine) {
  std::vector<VectorField> fields = parse_basis(basis_text, ctx);
  int r = generic_rank(fields, ctx, seed);
  if (machine)
    std::cout << "rank=" << r << "\nseed=" << seed << "\n";
  else
    std::cout << r << "\n";
  return 0;
}

int run_check_algebra(const std::string& table_name, const std::string& basis_text,
                      const CtxOpts& opts, std::uint64_t seed, bool machine) {
  StructureTable table = builtin_table(table_name);
  Context ctx = with_table_params(build_context(opts), table);
  std::vector<VectorField> basis = parse_basis(basis_text, ctx);
  AlgebraReport rep = check_realization(basis, table, ctx, seed);
  if (machine) {
    for (const auto& p : rep.pairs) {
      std::cout << "pair=(" << p.i << "," << p.j << ") verdict="
                << verdict_name(p.verdict);
      if (!p.defect.empty()) std::cout << " defect=\"" << p.defect << "\"";
      std::cout << "\n";
    }
    std::cout << "status=" << status_word(rep.worst()) << "\nseed=" << seed << "\n";
  } else {
    for (const auto& p : rep.pairs)
      if (p.verdict != Verdict::Zero)
        std::cerr << "pair (" << p.i << "," << p.j << "): "
                  << verdict_name(p.verdict)
                  << (p.defect.empty() ? "" : " defect " + p.defect)
                  << (p.witness.empty() ? "" : " (" + p.witness + ")") << "\n";
    std::cout << status_word(rep.worst()) << "\n";
  }
  return verdict_exit(rep.worst());
}

int run_check_invariance(const std::string& basis_text, const std::string& f_text,
                         const std::string& g_text, const CtxOpts& opts,
                         std::uint64_t seed, bool machine) {
  Context ctx = build_context(opts);
  std::vector<VectorField> gens = parse_basis(basis_text, ctx);
  EvolutionEquation eq{parse_expr(f_text, ctx), parse_expr(g_text, ctx)};
  validate_equation(eq);
  InvarianceReport rep = check_invariance(eq, gens, ctx, seed);
  if (machine) {
    for (const auto& g : rep.gens)
      std::cout << "gen=" << g.index << " d1=" << verdict_name(g.d1.verdict)
                << " d2=" << verdict_name(g.d2.verdict) << "\n";
    std::cout << "status=" << status_word(rep.worst()) << "\nseed=" << seed << "\n";
  } else {
    for (const auto& g : rep.gens)
      for (const auto& [label, r] :
           {std::pair{"d1", &g.d1}, std::pair{"d2", &g.d2}})
        if (r->verdict != Verdict::Zero)
          std::cerr << "generator " << g.index << " " << label << ": "
                    << verdict_name(r->verdict)
                    << (r->witness.empty() ? "" : " (" + r->witness + ")") << "\n";
    std::cout << status_word(rep.worst()) << "\n";
  }
  return verdict_exit(rep.worst());
}

int run_transform(const std::string& map_text, const std::string& vf_text,
                  const std::string& src_text, const std::string& dst_text,
                  const std::string& cob_text, const CtxOpts& opts,
                  std::uint64_t seed, bool machine) {
  Context ctx = build_context(opts);
  PointTransformation tr = parse_transformation(map_text, ctx);
  try {
    validate_transformation(tr, ctx, split_seed(seed, "validate"));
  } catch (const TransformError& e) {
    std::cerr << "transformation invalid: " << e.what() << "\n";
    return 1;
  }
  if (src_text.empty() && dst_text.empty()) {
    if (vf_text.empty())
      throw std::invalid_argument(
          "transform needs either a vector field argument or --src/--dst");
    VectorField out = pushforward(parse_vf(vf_text, ctx), tr);
    if (machine)
      std::cout << "result=" << print_vf(out) << "\n";
    else
      std::cout << print_vf(out) << "\n";
    return 0;
  }
  if (src_text.empty() || dst_text.empty())
    throw std::invalid_argument("--src and --dst must be given together");
  std::vector<VectorField> src = parse_basis(src_text, ctx);
  std::vector<VectorField> dst = parse_basis(dst_text, ctx);
  std::vector<std::vector<Expr>> M;
  if (cob_text.empty()) {
    M = identity_cob(src.size());
  } else {
    std::vector<std::string> rows;
    for (const auto& row : detail::split_top(cob_text, ';'))
      rows.push_back(detail::trim(row));
    M = parse_cob(rows, ctx);
  }
  EquivalenceReport rep = verify_equivalence(src, dst, tr, M, ctx, seed);
  if (machine) {
    for (size_t i = 0; i < rep.rows.size(); ++i)
      std::cout << "row=" << (i + 1)
                << " verdict=" << verdict_name(rep.rows[i].verdict) << "\n";
    std::cout << "status=" << status_word(rep.worst()) << "\nseed=" << seed << "\n";
  } else {
    for (size_t i = 0; i < rep.rows.size(); ++i)
      if (rep.rows[i].verdict != Verdict::Zero)
        std::cerr << "basis element " << (i + 1) << ": "
                  << verdict_name(rep.rows[i].verdict)
                  << (rep.rows[i].witness.empty() ? ""
                                                  : " (" + rep.rows[i].witness + ")")
                  << "\n";
    std::cout << status_word(rep.worst()) << "\n";
  }
  return verdict_exit(rep.worst());
}

int run_flag_linearizing(const std::string& basis_text, const CtxOpts& opts,
                         std::uint64_t seed, bool machine) {
  Context ctx = build_context(opts);
  std::vector<VectorField> fields = parse_basis(basis_text, ctx);
  LinearizeResult r = flag_linearizing(fields, ctx, seed);
  if (machine) {
    std::cout << "flagged=" << (r.flagged ? "true" : "false");
    if (r.flagged) std::cout << " reason=\"" << r.reason << "\"";
    std::cout << "\nseed=" << seed << "\n";
  } else {
    if (r.flagged)
      std::cout << "flagged: " << r.reason << "\n";
    else
      std::cout << "not-flagged\n";
  }
  return 0;
}

int run_verify_catalog(const std::vector<std::string>& paths,
                       const std::string& only, int dimension,
                       std::uint64_t seed, int jobs, bool machine) {
  std::vector<CatalogEntry> entries = load(paths);
  std::vector<CatalogEntry> kept;
  for (auto& e : entries) {
    if (!only.empty() && fnmatch(only.c_str(), e.id.c_str(), 0) != 0) continue;
    if (dimension != 0 && e.dimension != dimension) continue;
    kept.push_back(std::move(e));
  }
  if (kept.empty())
    throw std::invalid_argument("no catalog entries match the given filters");
  CatalogSummary s = verify_all(kept, seed, jobs);
  std::cout << render_summary(s, machine);
  int fails = 0, indet = 0;
  for (const auto& [dim, c] : s.counts) {
    fails += c[1];
    indet += c[2];
  }
  if (fails > 0) return 1;
  if (indet > 0) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "evosym: symbolic verification of Lie symmetry classifications for\n"
      "third-order evolution equations u_t = F(t,x,u,u1,u2)*u3 + G(t,x,u,u1,u2)"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string output = "human";
  int jobs = 1;
  auto add_common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--output", output, "report style")
        ->check(CLI::IsMember({"human", "machine"}));
    if (seeded)
      sub->add_option("--seed", seed, "seed for randomized zero-testing")
          ->envname("EVOSYM_SEED");
  };

  // bracket
  std::string vf_a, vf_b;
  CtxOpts bracket_ctx;
  CLI::App* c_bracket =
      app.add_subcommand("bracket", "Lie bracket of two vector fields");
  c_bracket->add_option("X", vf_a, "first vector field")->required();
  c_bracket->add_option("Y", vf_b, "second vector field")->required();
  attach_ctx_opts(c_bracket, bracket_ctx);
  add_common(c_bracket, false);

  // rank
  std::string rank_basis;
  CtxOpts rank_ctx;
  CLI::App* c_rank =
      app.add_subcommand("rank", "generic pointwise rank of a basis");
  c_rank->add_option("BASIS", rank_basis, "semicolon-separated vector fields")
      ->required();
  attach_ctx_opts(c_rank, rank_ctx);
  add_common(c_rank, true);

  // check-algebra
  std::string alg_table, alg_basis;
  CtxOpts alg_ctx;
  CLI::App* c_alg = app.add_subcommand(
      "check-algebra", "verify a realization against a structure table");
  c_alg->add_option("TABLE", alg_table, "table name, e.g. A3.5 or A3.3+A1")
      ->required();
  c_alg->add_option("BASIS", alg_basis, "semicolon-separated vector fields")
      ->required();
  attach_ctx_opts(c_alg, alg_ctx);
  add_common(c_alg, true);

  // check-invariance
  std::string inv_basis, inv_f, inv_g;
  CtxOpts inv_ctx;
  CLI::App* c_inv = app.add_subcommand(
      "check-invariance", "verify the determining equations for (F, G)");
  c_inv->add_option("--basis", inv_basis, "generator basis")->required();
  c_inv->add_option("--F", inv_f, "coefficient of u3")->required();
  c_inv->add_option("--G", inv_g, "inhomogeneous part")->required();
  attach_ctx_opts(c_inv, inv_ctx);
  add_common(c_inv, true);

  // transform
  std::string tr_map, tr_vf, tr_src, tr_dst, tr_cob;
  CtxOpts tr_ctx;
  CLI::App* c_tr = app.add_subcommand(
      "transform", "push vector fields through a point transformation");
  c_tr->add_option("--map", tr_map,
                   "T=..; X=..; U=..; Tinv=..; Xinv=..; Uinv=..")
      ->required();
  c_tr->add_option("VF", tr_vf, "vector field to push forward");
  c_tr->add_option("--src", tr_src, "source basis for equivalence checking");
  c_tr->add_option("--dst", tr_dst, "destination basis");
  c_tr->add_option("--cob", tr_cob,
                   "change-of-basis rows, e.g. \"e1 ; -e3 ; e2\"");
  attach_ctx_opts(c_tr, tr_ctx);
  add_common(c_tr, true);

  // flag-linearizing
  std::string lin_basis;
  CtxOpts lin_ctx;
  CLI::App* c_lin = app.add_subcommand(
      "flag-linearizing", "detect linearizing subalgebra structure");
  c_lin->add_option("BASIS", lin_basis, "semicolon-separated vector fields")
      ->required();
  attach_ctx_opts(c_lin, lin_ctx);
  add_common(c_lin, true);

  // verify-catalog
  std::vector<std::string> cat_paths;
  std::string cat_only;
  int cat_dim = 0;
  CLI::App* c_cat = app.add_subcommand(
      "verify-catalog", "verify every catalog entry (realization, invariance, flags)");
  c_cat->add_option("PATH", cat_paths, "catalog files or directories")
      ->required()
      ->expected(-1);
  c_cat->add_option("--only", cat_only, "glob filter on entry ids");
  c_cat->add_option("--dimension", cat_dim, "restrict to one algebra dimension")
      ->check(CLI::IsMember({3, 4, 5}));
  c_cat->add_option("--jobs", jobs, "worker threads (results are independent of this)")
      ->check(CLI::PositiveNumber);
  add_common(c_cat, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  bool machine = output == "machine";
  try {
    if (*c_bracket)
      return run_bracket(vf_a, vf_b, build_context(bracket_ctx), machine);
    if (*c_rank)
      return run_rank(rank_basis, build_context(rank_ctx), seed, machine);
    if (*c_alg) return run_check_algebra(alg_table, alg_basis, alg_ctx, seed, machine);
    if (*c_inv)
      return run_check_invariance(inv_basis, inv_f, inv_g, inv_ctx, seed, machine);
    if (*c_tr)
      return run_transform(tr_map, tr_vf, tr_src, tr_dst, tr_cob, tr_ctx, seed,
                           machine);
    if (*c_lin) return run_flag_linearizing(lin_basis, lin_ctx, seed, machine);
    if (*c_cat)
      return run_verify_catalog(cat_paths, cat_only, cat_dim, seed, jobs, machine);
  } catch (const IndeterminateError& e) {
    std::cerr << "indeterminate: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
