// Command implementations behind the CLI: skolemise, prove, compare, check,
// bench. Each returns the process exit code; the binary in tools/ is a thin
// argument-parsing shim over these.
//
// Exit codes: 0 proved/valid, 1 unprovable (or invalid proof), 2 budget
// exhausted, 3 input error, 4 engine disagreement (compare/bench only).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "linskol/ljf_engine.hpp"
#include "linskol/sljf_engine.hpp"
#include "linskol/syntax.hpp"

namespace linskol {

inline constexpr int kExitProved = 0;
inline constexpr int kExitUnprovable = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitInputError = 3;
inline constexpr int kExitDisagreement = 4;

struct RunFlags {
  std::string engine = "sljf";  // "sljf" | "ljf"
  int copy_bound = 2;
  int depth = 40;
  bool json = false;
  bool strict = false;        // reject polarity mismatches instead of shifting
  bool reconstruct = false;   // prove --engine sljf only
  std::string trace_path;     // prove --engine sljf: write trace JSON here
  std::uint64_t seed = 0;     // bench --random
  int random_count = 0;       // bench --random N
  std::string dir;            // bench --dir
};

// One engine run over an already-parsed sequent; proved results carry a
// re-checked proof. Used by compare/bench and exposed for the test suites.
struct RunReport {
  std::string engine;
  Verdict verdict = Verdict::Unprovable;
  double wall_time_ms = 0.0;
  SearchStats stats;
  // sljf:
  SProofPtr stree;
  Substitution sigma_final;
  std::vector<TraceEvent> trace;
  // ljf:
  LProofPtr ltree;
};

RunReport run_engine(const Sequent& s, const std::string& engine,
                     const Budget& budget, UidSource& uids,
                     bool want_trace = false);

int cmd_skolemise(const std::string& file, const RunFlags& flags,
                  std::ostream& out, std::ostream& err);
int cmd_prove(const std::string& file, const RunFlags& flags, std::ostream& out,
              std::ostream& err);
int cmd_compare(const std::string& file, const RunFlags& flags,
                std::ostream& out, std::ostream& err);
int cmd_check(const std::string& proof_file, const RunFlags& flags,
              std::ostream& out, std::ostream& err);
int cmd_bench(const RunFlags& flags, std::ostream& out, std::ostream& err);

}  // namespace linskol
