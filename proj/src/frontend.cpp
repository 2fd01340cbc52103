#include "linskol/frontend.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "linskol/json_io.hpp"
#include "linskol/parser.hpp"
#include "linskol/random_gen.hpp"
#include "linskol/reconstructor.hpp"
#include "linskol/skolemiser.hpp"

namespace linskol {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Proved: return kExitProved;
    case Verdict::Unprovable: return kExitUnprovable;
    case Verdict::BudgetExhausted: return kExitBudget;
  }
  return kExitInputError;
}

Budget make_budget(const RunFlags& flags) {
  Budget b;
  b.max_depth = flags.depth;
  b.copy_bound = flags.copy_bound;
  return b;
}

// Binder names reused along one scope path get fresh uids anyway; the
// warning just makes the silent renaming visible.
void warn_shadowed(const FormulaPtr& f, std::vector<std::string>& scope,
                   std::set<std::string>& reported) {
  if (!f) return;
  switch (f->kind) {
    case FKind::Forall:
    case FKind::Exists: {
      if (std::find(scope.begin(), scope.end(), f->binder.name) != scope.end())
        reported.insert(f->binder.name);
      scope.push_back(f->binder.name);
      warn_shadowed(f->left, scope, reported);
      scope.pop_back();
      return;
    }
    case FKind::Lolli:
    case FKind::Tensor:
      warn_shadowed(f->left, scope, reported);
      warn_shadowed(f->right, scope, reported);
      return;
    case FKind::Up:
    case FKind::Bang:
    case FKind::Down:
      warn_shadowed(f->left, scope, reported);
      return;
    case FKind::AtomNeg:
    case FKind::AtomPos:
      return;
  }
}

void report_shadowing(const Sequent& s, std::ostream& err) {
  std::vector<std::string> scope;
  std::set<std::string> names;
  for (const auto& g : s.gamma) warn_shadowed(g, scope, names);
  for (const auto& d : s.delta) warn_shadowed(d, scope, names);
  warn_shadowed(s.goal, scope, names);
  for (const auto& n : names)
    err << "warning: shadowed binder '" << n << "' was renamed apart\n";
}

struct ParsedInput {
  ParseResult parsed;
};

ParsedInput parse_input(const std::string& file, const RunFlags& flags,
                        UidSource& uids, std::ostream& err) {
  ParseOptions opts;
  opts.auto_shift = !flags.strict;
  std::string text = read_file(file);
  try {
    return {parse_sequent_text(text, uids, opts)};
  } catch (const ParseError& e) {
    throw std::runtime_error(file + ":" + std::to_string(e.line) + ":" +
                             std::to_string(e.col) + ": " + e.what());
  }
  (void)err;
}

json stats_line(const RunReport& r) {
  json j = to_json(r.stats);
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

void print_report_text(const RunReport& r, std::ostream& out) {
  out << r.engine << ": " << to_string(r.verdict) << "  ("
      << r.stats.node_expansions << " expansions, " << r.stats.focus_backtracks
      << " focus backtracks, " << r.stats.term_backtracks
      << " term backtracks, " << std::fixed << std::setprecision(2)
      << r.wall_time_ms << " ms)\n";
  out.unsetf(std::ios::floatfield);
}

void render_sproof(const SProofPtr& p, std::ostream& out, int depth) {
  out << std::string(2 * depth, ' ') << p->rule << ": "
      << to_string(p->conclusion) << "\n";
  for (const auto& q : p->premises) render_sproof(q, out, depth + 1);
}

void render_lproof(const LProofPtr& p, std::ostream& out, int depth) {
  out << std::string(2 * depth, ' ') << p->rule;
  if (p->witness) out << " [" << to_string(p->witness) << "]";
  out << ": " << to_string(p->conclusion) << "\n";
  for (const auto& q : p->premises) render_lproof(q, out, depth + 1);
}

ProofDocument make_document(const RunReport& r, const SSequent& sroot) {
  ProofDocument d;
  d.engine = "sljf";
  d.verdict = r.verdict;
  d.sroot = sroot;
  d.stree = r.stree;
  d.sigma_final = r.sigma_final;
  d.stats = r.stats;
  return d;
}

ProofDocument make_document(const RunReport& r, const Sequent& lroot) {
  ProofDocument d;
  d.engine = "ljf";
  d.verdict = r.verdict;
  d.lroot = lroot;
  d.ltree = r.ltree;
  d.stats = r.stats;
  return d;
}

}  // namespace

RunReport run_engine(const Sequent& s, const std::string& engine,
                     const Budget& budget, UidSource& uids, bool want_trace) {
  RunReport r;
  r.engine = engine;
  const auto t0 = std::chrono::steady_clock::now();
  if (engine == "sljf") {
    SkolemisedSequent sk = skolemise_sequent(s, uids);
    SProveResult res = prove_sljf(sk.ssequent, budget, uids, want_trace);
    r.verdict = res.verdict;
    r.stats = res.stats;
    r.stree = res.tree;
    r.sigma_final = res.sigma_final;
    r.trace = std::move(res.trace);
    if (r.verdict == Verdict::Proved) {
      CheckResult c = check_sljf(r.stree, sk.ssequent);
      if (!c.ok)
        throw std::logic_error("internal: proved tree fails check_sljf: " +
                               c.error + " at " + c.path);
    }
  } else if (engine == "ljf") {
    LProveResult res = prove_ljf(s, budget, uids);
    r.verdict = res.verdict;
    r.stats = res.stats;
    r.ltree = res.tree;
    if (r.verdict == Verdict::Proved) {
      CheckResult c = check_ljf(r.ltree, s);
      if (!c.ok)
        throw std::logic_error("internal: proved tree fails check_ljf: " +
                               c.error + " at " + c.path);
    }
  } else {
    throw std::runtime_error("unknown engine '" + engine + "'");
  }
  r.wall_time_ms = ms_since(t0);
  return r;
}

int cmd_skolemise(const std::string& file, const RunFlags& flags,
                  std::ostream& out, std::ostream& err) {
  try {
    UidSource uids;
    ParsedInput in = parse_input(file, flags, uids, err);
    report_shadowing(in.parsed.sequent, err);
    SkolemisedSequent sk = skolemise_sequent(in.parsed.sequent, uids);
    if (flags.json) {
      json j{{"schema", kSchema},
             {"ssequent", to_json(sk.ssequent)},
             {"sigma0", to_json(*sk.ssequent.sigma)}};
      out << j.dump(2) << "\n";
    } else {
      out << to_string(sk.ssequent) << "\n";
    }
    return kExitProved;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_prove(const std::string& file, const RunFlags& flags, std::ostream& out,
              std::ostream& err) {
  try {
    if (flags.reconstruct && flags.engine != "sljf")
      throw std::runtime_error("--reconstruct requires --engine sljf");
    UidSource uids;
    ParsedInput in = parse_input(file, flags, uids, err);
    const Sequent& s = in.parsed.sequent;
    const Budget budget = make_budget(flags);

    const bool want_trace = !flags.trace_path.empty();
    if (want_trace && flags.engine != "sljf")
      err << "warning: --trace is only produced by the sljf engine\n";

    RunReport r;
    SkolemisedSequent sk;
    if (flags.engine == "sljf") {
      // run through the same path as run_engine but keep the pairing for
      // reconstruction
      const auto t0 = std::chrono::steady_clock::now();
      sk = skolemise_sequent(s, uids);
      SProveResult res = prove_sljf(sk.ssequent, budget, uids, want_trace);
      r.engine = "sljf";
      r.verdict = res.verdict;
      r.stats = res.stats;
      r.stree = res.tree;
      r.sigma_final = res.sigma_final;
      r.trace = std::move(res.trace);
      r.wall_time_ms = ms_since(t0);
      if (r.verdict == Verdict::Proved) {
        CheckResult c = check_sljf(r.stree, sk.ssequent);
        if (!c.ok)
          throw std::logic_error("internal: proved tree fails check_sljf: " +
                                 c.error + " at " + c.path);
      }
    } else {
      r = run_engine(s, flags.engine, budget, uids, false);
    }

    LProofPtr rec;
    EventSchedule schedule;
    if (flags.reconstruct && r.verdict == Verdict::Proved) {
      ReconstructResult rr = reconstruct(r.stree, r.sigma_final, sk);
      rec = rr.tree;
      schedule = std::move(rr.schedule);
      CheckResult c = check_ljf(rec, sk.renamed_original);
      if (!c.ok)
        throw std::logic_error("internal: reconstruction fails check_ljf: " +
                               c.error + " at " + c.path);
    }

    if (want_trace && flags.engine == "sljf") {
      std::ofstream tf(flags.trace_path);
      if (!tf)
        throw std::runtime_error("cannot write '" + flags.trace_path + "'");
      json jtrace = json::array();
      for (const auto& e : r.trace) jtrace.push_back(to_json(e));
      tf << jtrace.dump(2) << "\n";
    }

    if (flags.json) {
      json j = flags.engine == "sljf"
                   ? to_json(make_document(r, sk.ssequent))
                   : to_json(make_document(r, s));
      j["stats"] = stats_line(r);
      if (rec) {
        j["reconstructed"] = to_json(rec);
        j["reconstructed_root"] = to_json(sk.renamed_original);
        j["schedule"] = to_json(schedule);
      }
      out << j.dump(2) << "\n";
    } else {
      print_report_text(r, out);
      if (r.verdict == Verdict::Proved) {
        if (flags.engine == "sljf")
          out << "sigma: " << to_string(r.sigma_final) << "\n";
        if (r.stree) render_sproof(r.stree, out, 0);
        if (r.ltree) render_lproof(r.ltree, out, 0);
        if (rec) {
          out << "reconstructed:\n";
          render_lproof(rec, out, 0);
        }
      }
    }
    return verdict_exit(r.verdict);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_compare(const std::string& file, const RunFlags& flags,
                std::ostream& out, std::ostream& err) {
  try {
    UidSource uids;
    ParsedInput in = parse_input(file, flags, uids, err);
    const Budget budget = make_budget(flags);
    RunReport rs = run_engine(in.parsed.sequent, "sljf", budget, uids);
    RunReport rl = run_engine(in.parsed.sequent, "ljf", budget, uids);

    const bool budget_hit = rs.verdict == Verdict::BudgetExhausted ||
                            rl.verdict == Verdict::BudgetExhausted;
    const bool agree = !budget_hit && rs.verdict == rl.verdict;

    if (flags.json) {
      json j{{"schema", kSchema},
             {"sljf",
              {{"verdict", to_string(rs.verdict)}, {"stats", stats_line(rs)}}},
             {"ljf",
              {{"verdict", to_string(rl.verdict)}, {"stats", stats_line(rl)}}},
             {"agreement", agree}};
      if (rs.verdict == Verdict::Proved)
        j["sljf"]["sigma_final"] = to_string(rs.sigma_final);
      out << j.dump(2) << "\n";
    } else {
      print_report_text(rs, out);
      print_report_text(rl, out);
      if (rs.verdict == Verdict::Proved)
        out << "sigma: " << to_string(rs.sigma_final) << "\n";
      out << "agreement: "
          << (budget_hit ? "n/a (budget)" : agree ? "yes" : "NO") << "\n";
    }
    if (budget_hit) return kExitBudget;
    if (!agree) return kExitDisagreement;
    return verdict_exit(rs.verdict);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_check(const std::string& proof_file, const RunFlags& flags,
              std::ostream& out, std::ostream& err) {
  try {
    json j;
    try {
      j = json::parse(read_file(proof_file));
    } catch (const json::parse_error& e) {
      throw std::runtime_error(proof_file + ": " + e.what());
    }
    ProofDocument d = proof_document_from_json(j);
    CheckResult c;
    if (d.verdict != Verdict::Proved) {
      err << "error: document does not embed a proved tree\n";
      return kExitInputError;
    }
    if (d.engine == "sljf") {
      if (!d.stree) throw std::runtime_error("document has no tree");
      c = check_sljf(d.stree, d.sroot);
    } else {
      if (!d.ltree) throw std::runtime_error("document has no tree");
      c = check_ljf(d.ltree, d.lroot);
    }
    if (flags.json) {
      json r{{"valid", c.ok}};
      if (!c.ok) {
        r["error"] = c.error;
        r["path"] = c.path;
      }
      out << r.dump(2) << "\n";
    } else if (c.ok) {
      out << "valid\n";
    } else {
      out << "invalid at [" << c.path << "]: " << c.error << "\n";
    }
    return c.ok ? kExitProved : kExitUnprovable;
  } catch (const JsonError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

namespace {

struct BenchRow {
  std::string name;
  RunReport sljf;
  RunReport ljf;
};

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "name,sljf_verdict,ljf_verdict,agree,sljf_ms,ljf_ms,"
         "sljf_expansions,ljf_expansions,sljf_term_backtracks,"
         "ljf_term_backtracks,ljf_focus_backtracks\n";
  for (const auto& r : rows) {
    const bool budget_hit = r.sljf.verdict == Verdict::BudgetExhausted ||
                            r.ljf.verdict == Verdict::BudgetExhausted;
    std::string agree =
        budget_hit ? "n/a" : (r.sljf.verdict == r.ljf.verdict ? "yes" : "no");
    out << r.name << ',' << to_string(r.sljf.verdict) << ','
        << to_string(r.ljf.verdict) << ',' << agree << ',' << std::fixed
        << std::setprecision(2) << r.sljf.wall_time_ms << ','
        << r.ljf.wall_time_ms << ',' << r.sljf.stats.node_expansions << ','
        << r.ljf.stats.node_expansions << ','
        << r.sljf.stats.term_backtracks << ',' << r.ljf.stats.term_backtracks
        << ',' << r.ljf.stats.focus_backtracks << "\n";
    out.unsetf(std::ios::floatfield);
  }
}

}  // namespace

int cmd_bench(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    const Budget budget = make_budget(flags);
    std::vector<BenchRow> rows;
    if (!flags.dir.empty()) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(flags.dir))
        if (e.is_regular_file() && e.path().extension() == ".lsk")
          files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty())
        throw std::runtime_error("no .lsk files under '" + flags.dir + "'");
      for (const auto& f : files) {
        UidSource uids;
        ParsedInput in = parse_input(f.string(), flags, uids, err);
        BenchRow row;
        row.name = f.filename().string();
        row.sljf = run_engine(in.parsed.sequent, "sljf", budget, uids);
        row.ljf = run_engine(in.parsed.sequent, "ljf", budget, uids);
        rows.push_back(std::move(row));
      }
    } else if (flags.random_count > 0) {
      std::mt19937_64 rng(flags.seed);
      UidSource uids;
      for (int i = 0; i < flags.random_count; ++i) {
        Sequent s = random_sequent(rng, uids);
        BenchRow row;
        row.name = "rand-" + std::to_string(flags.seed) + "-" +
                   std::to_string(i);
        row.sljf = run_engine(s, "sljf", budget, uids);
        row.ljf = run_engine(s, "ljf", budget, uids);
        rows.push_back(std::move(row));
      }
    } else {
      throw std::runtime_error("bench needs --dir or --random N");
    }
    write_csv(rows, out);
    for (const auto& r : rows)
      if (r.sljf.verdict != Verdict::BudgetExhausted &&
          r.ljf.verdict != Verdict::BudgetExhausted &&
          r.sljf.verdict != r.ljf.verdict) {
        err << "error: engines disagree on " << r.name << "\n";
        return kExitDisagreement;
      }
    return kExitProved;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace linskol
