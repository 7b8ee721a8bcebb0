#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evosym/detsys.hpp"
#include "evosym/linearize.hpp"

namespace evosym {

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One realization together with its invariant evolution equation, as read
/// from a catalog file.
struct CatalogEntry {
  std::string id;
  int dimension = 0;
  std::string algebra;
  StructureTable table;
  Context ctx;
  std::vector<VectorField> fields;
  EvolutionEquation eq;
  bool expect_discrepancy = false;
  std::string note;
  std::string file;
  int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::string strip_quotes(const std::string& s) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
    return t.substr(1, t.size() - 2);
  return t;
}

/// Split on a separator that may not appear inside quotes or parentheses.
inline std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  bool quoted = false;
  std::string cur;
  for (char ch : s) {
    if (ch == '"') quoted = !quoted;
    if (!quoted) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == sep && depth == 0) {
        out.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += ch;
  }
  out.push_back(cur);
  return out;
}

/// Tokenize respecting double quotes: `param q "in(-1,1), nonzero"` yields
/// three tokens with the quotes removed from the last.
inline std::vector<std::string> tokenize_quoted(const std::string& s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    if (s[i] == '"') {
      size_t j = s.find('"', i + 1);
      if (j == std::string::npos) throw CatalogError("unterminated quote");
      out.push_back(s.substr(i + 1, j - i - 1));
      i = j + 1;
    } else {
      size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

}  // namespace detail

/// Parse one catalog file. See README for the line-oriented format.
inline std::vector<CatalogEntry> load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog file: " + path.string());
  std::vector<CatalogEntry> entries;
  CatalogEntry cur;
  bool open = false, have_f = false, have_g = false, have_expect = false;
  std::string fexpr, gexpr;
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) -> void {
    throw CatalogError(path.string() + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string text = detail::trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::istringstream head(text);
    std::string kw;
    head >> kw;
    std::string rest = detail::trim(text.substr(kw.size()));

    try {
      if (kw == "entry") {
        if (open) fail("nested entry (missing 'end')");
        if (rest.empty()) fail("entry requires an id");
        cur = CatalogEntry{};
        cur.id = rest;
        cur.file = path.string();
        cur.line = lineno;
        open = true;
        have_f = have_g = have_expect = false;
        continue;
      }
      if (!open) fail("directive outside entry block: " + kw);

      if (kw == "algebra") {
        auto toks = detail::tokenize_quoted(rest);
        if (toks.empty()) fail("algebra requires a name");
        cur.algebra = toks[0];
        try {
          cur.table = builtin_table(cur.algebra);
        } catch (const std::invalid_argument& e) {
          fail(std::string("unresolved algebra: ") + e.what());
        }
        for (size_t i = 1; i < toks.size(); i += 3) {
          if (toks[i] != "param" || i + 3 > toks.size())
            fail("expected 'param <name> <constraint>' after algebra name");
          cur.ctx.declare_param(toks[i + 1], toks[i + 2]);
        }
        // table parameters not overridden by the entry keep their defaults
        for (const auto& [n, c] : cur.table.params)
          if (!cur.ctx.has_param(n)) cur.ctx.declare_param(n, c);
      } else if (kw == "basis") {
        if (cur.algebra.empty()) fail("basis before algebra");
        for (const auto& piece : detail::split_top(rest, ';')) {
          std::string src = detail::strip_quotes(piece);
          if (src.empty()) fail("empty basis element");
          cur.fields.push_back(parse_vf(src, cur.ctx));
        }
        cur.dimension = static_cast<int>(cur.fields.size());
      } else if (kw == "alias") {
        size_t eq = rest.find('=');
        if (eq == std::string::npos) fail("alias requires '<name> = <expr>'");
        std::string name = detail::trim(rest.substr(0, eq));
        std::string value = detail::strip_quotes(rest.substr(eq + 1));
        cur.ctx.declare_alias(name, parse_expr(value, cur.ctx));
      } else if (kw == "func") {
        size_t lp = rest.find('(');
        size_t rp = rest.rfind(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp)
          fail("func requires '<name>(<slot>,...)'");
        std::string name = detail::trim(rest.substr(0, lp));
        std::vector<Expr> slots;
        for (const auto& piece : detail::split_top(rest.substr(lp + 1, rp - lp - 1), ','))
          slots.push_back(parse_expr(detail::trim(piece), cur.ctx));
        if (slots.empty()) fail("func requires at least one slot");
        cur.ctx.declare_func(name, std::move(slots));
      } else if (kw == "F" || kw == "G") {
        // allow "F = ... ; G = ..." on one line
        for (const auto& piece : detail::split_top(text, ';')) {
          std::string p = detail::trim(piece);
          if (p.empty()) continue;
          size_t eq = p.find('=');
          if (eq == std::string::npos) fail("expected 'F = <expr>' or 'G = <expr>'");
          std::string lhs = detail::trim(p.substr(0, eq));
          std::string rhs = detail::strip_quotes(p.substr(eq + 1));
          if (lhs == "F") {
            if (have_f) fail("duplicate F");
            fexpr = rhs;
            have_f = true;
          } else if (lhs == "G") {
            if (have_g) fail("duplicate G");
            gexpr = rhs;
            have_g = true;
          } else {
            fail("expected F or G, got: " + lhs);
          }
        }
      } else if (kw == "expect") {
        auto toks = detail::tokenize_quoted(rest);
        if (toks.empty()) fail("expect requires 'verify' or 'discrepancy \"<note>\"'");
        if (toks[0] == "verify") {
          cur.expect_discrepancy = false;
        } else if (toks[0] == "discrepancy") {
          if (toks.size() < 2 || toks[1].empty())
            fail("discrepancy requires a human-written note");
          cur.expect_discrepancy = true;
          cur.note = toks[1];
        } else {
          fail("expect must be 'verify' or 'discrepancy'");
        }
        have_expect = true;
      } else if (kw == "end") {
        if (cur.algebra.empty()) fail("entry without algebra");
        if (cur.fields.empty()) fail("entry without basis");
        if (!have_f || !have_g) fail("entry without F and G");
        if (!have_expect) fail("entry without expect line");
        if (cur.dimension != cur.table.dim)
          fail("basis has " + std::to_string(cur.dimension) + " fields but " +
               cur.algebra + " has dimension " + std::to_string(cur.table.dim));
        cur.eq.F = parse_expr(fexpr, cur.ctx);
        cur.eq.G = parse_expr(gexpr, cur.ctx);
        validate_equation(cur.eq);
        if (!admissible(cur.eq) && !cur.expect_discrepancy)
          fail("F is structurally zero; inadmissible entries must be marked "
               "'expect discrepancy'");
        entries.push_back(cur);
        open = false;
      } else {
        fail("unknown directive: " + kw);
      }
    } catch (const CatalogError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (open)
    throw CatalogError(path.string() + ": entry '" + cur.id + "' not closed by 'end'");
  return entries;
}

/// Load catalog files and/or directories (directories: all *.cat files in
/// lexicographic order). Ids must be globally unique.
inline std::vector<CatalogEntry> load(const std::vector<std::string>& paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    std::filesystem::path fp(p);
    if (std::filesystem::is_directory(fp)) {
      std::vector<std::filesystem::path> found;
      for (const auto& e : std::filesystem::recursive_directory_iterator(fp))
        if (e.is_regular_file() && e.path().extension() == ".cat")
          found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(fp);
    }
  }
  std::vector<CatalogEntry> entries;
  std::map<std::string, std::string> seen;
  for (const auto& f : files) {
    for (auto& e : load_file(f)) {
      auto [it, fresh] = seen.emplace(e.id, e.file + ":" + std::to_string(e.line));
      if (!fresh)
        throw CatalogError(e.file + ":" + std::to_string(e.line) + ": duplicate id '" +
                           e.id + "' (first defined at " + it->second + ")");
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Verification harness
// ---------------------------------------------------------------------------

struct VerificationReport {
  std::string id;
  int dimension = 0;
  std::string status;  // pass | fail | indeterminate | discrepancy
  std::vector<std::string> failed_checks;
  std::string witness;
  bool expect_discrepancy = false;
  std::string note;
  std::uint64_t seed = 0;
};

/// Run the full check stack on one entry. The seed is split per entry id,
/// so reports are independent of verification order.
inline VerificationReport verify_entry(const CatalogEntry& e, std::uint64_t seed) {
  VerificationReport r;
  r.id = e.id;
  r.dimension = e.dimension;
  r.expect_discrepancy = e.expect_discrepancy;
  r.note = e.note;
  r.seed = seed;
  std::uint64_t eseed = split_seed(seed, "entry:" + e.id);

  bool indeterminate = false;

  if (!admissible(e.eq)) {
    r.failed_checks.push_back("admissible(F=0)");
  } else {
    AlgebraReport alg = check_realization(e.fields, e.table, e.ctx,
                                          split_seed(eseed, "alg"));
    for (const auto& p : alg.pairs) {
      if (p.verdict == Verdict::NonZero) {
        r.failed_checks.push_back("algebra(" + std::to_string(p.i) + "," +
                                  std::to_string(p.j) + ")");
        if (r.witness.empty()) r.witness = p.witness + " defect=" + p.defect;
      } else if (p.verdict == Verdict::Indeterminate) {
        indeterminate = true;
      }
    }

    InvarianceReport inv =
        check_invariance(e.eq, e.fields, e.ctx, split_seed(eseed, "inv"));
    for (const auto& g : inv.gens) {
      for (auto [zr, tag] : {std::pair<const ZeroResult*, const char*>{&g.d1, "d1"},
                             {&g.d2, "d2"}}) {
        if (zr->verdict == Verdict::NonZero) {
          r.failed_checks.push_back("invariance(gen" + std::to_string(g.index) + ":" +
                                    tag + ")");
          if (r.witness.empty()) r.witness = zr->witness;
        } else if (zr->verdict == Verdict::Indeterminate) {
          indeterminate = true;
        }
      }
    }

    LinearizeResult lin = flag_linearizing(e.fields, e.ctx, split_seed(eseed, "lin"));
    if (lin.flagged) r.failed_checks.push_back("linearizing(" + lin.reason + ")");
  }

  if (e.expect_discrepancy)
    r.status = "discrepancy";
  else if (!r.failed_checks.empty())
    r.status = "fail";
  else if (indeterminate)
    r.status = "indeterminate";
  else
    r.status = "pass";
  return r;
}

struct CatalogSummary {
  std::vector<VerificationReport> reports;  // in catalog order
  std::map<int, std::array<int, 4>> counts;  // dim -> {pass, fail, indet, discrepancy}
  std::uint64_t seed = 0;

  int total(int dim) const {
    auto it = counts.find(dim);
    if (it == counts.end()) return 0;
    return it->second[0] + it->second[1] + it->second[2] + it->second[3];
  }
  bool all_clean() const {
    for (const auto& [d, c] : counts)
      if (c[1] != 0 || c[2] != 0) return false;
    return true;
  }
};

/// Verify every entry, optionally in parallel. Reports land in catalog
/// order and each entry derives its own seed from its id, so the summary is
/// identical for any job count.
inline CatalogSummary verify_all(const std::vector<CatalogEntry>& entries,
                                 std::uint64_t seed, int jobs) {
  CatalogSummary s;
  s.seed = seed;
  s.reports.resize(entries.size());
  if (jobs < 1) jobs = 1;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= entries.size()) break;
      s.reports[i] = verify_entry(entries[i], seed);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : s.reports) {
    auto& c = s.counts[r.dimension];
    if (r.status == "pass") ++c[0];
    else if (r.status == "fail") ++c[1];
    else if (r.status == "indeterminate") ++c[2];
    else ++c[3];
  }
  return s;
}

/// Abstract claim from the source classification: number of inequivalent
/// equation types by symmetry-algebra dimension.
inline const std::map<int, int>& claimed_counts() {
  static const std::map<int, int> k = {{3, 48}, {4, 88}, {5, 55}};
  return k;
}

/// Render one report record (line-delimited, diff-friendly).
inline std::string report_line(const VerificationReport& r) {
  std::string failed;
  for (size_t i = 0; i < r.failed_checks.size(); ++i) {
    if (i) failed += "|";
    failed += r.failed_checks[i];
  }
  std::string line = "id=" + r.id + " dim=" + std::to_string(r.dimension) +
                     " status=" + r.status + " failed=" + (failed.empty() ? "-" : failed);
  if (!r.witness.empty()) line += " witness=\"" + r.witness + "\"";
  if (r.expect_discrepancy) line += " note=\"" + r.note + "\"";
  return line;
}

/// Render the whole summary; `machine` output carries no timing and is
/// byte-stable for a fixed seed.
inline std::string render_summary(const CatalogSummary& s, bool machine) {
  std::ostringstream out;
  for (const auto& r : s.reports) out << report_line(r) << "\n";
  for (const auto& [dim, c] : s.counts) {
    out << (machine ? "summary " : "dimension ") << "dim=" << dim << " pass=" << c[0]
        << " fail=" << c[1] << " indeterminate=" << c[2] << " discrepancy=" << c[3]
        << " total=" << (c[0] + c[1] + c[2] + c[3]) << "\n";
  }
  for (const auto& [dim, claimed] : claimed_counts()) {
    auto it = s.counts.find(dim);
    if (it == s.counts.end()) continue;  // dimension not verified in this run
    int clean = it->second[0];
    int delta = clean - claimed;
    out << "claim dim=" << dim << " claimed=" << claimed << " verified=" << clean
        << " delta=" << (delta >= 0 ? "+" : "") << delta << "\n";
  }
  out << "seed=" << s.seed << "\n";
  return out.str();
}

}  // namespace evosym
