// Focused proof search over the skolemised (quantifier-free) calculus.
// Linear resources are threaded lazily (input context in, leftover out), so
// multiplicative splits never enumerate partitions. All term instantiation
// happens through unification at axioms against one global substitution that
// only ever grows; the search backtracks over focus selection and copy usage
// but never over term bindings.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linskol/substitution.hpp"
#include "linskol/syntax.hpp"

namespace linskol {

struct Budget {
  int max_depth = 40;
  int copy_bound = 2;
  long max_expansions = 2'000'000;
};

enum class Verdict { Proved, Unprovable, BudgetExhausted };

std::string to_string(Verdict v);

struct SearchStats {
  long node_expansions = 0;
  long unifications = 0;       // attempted axiom unifications
  long unify_failures = 0;     // clashes / rigid mismatches
  long admissibility_checks = 0;
  long admissibility_failures = 0;
  long adm_condition1 = 0;     // rejections by the acyclicity condition
  long adm_condition2 = 0;     // rejections by the paired-special condition
  long focus_backtracks = 0;   // abandoned focus / copy choices
  long term_backtracks = 0;    // undone term bindings (structurally zero here)
  long copies = 0;
};

// One entry per notable search event; consumed by --trace and by acceptance
// checks that count rejected axiom candidates.
struct TraceEvent {
  std::string kind;     // "rule" | "axiom_candidate"
  std::string rule;     // rule label for "rule" events
  std::string outcome;  // "ok" | "unify_fail" | "adm_reject"
  int condition = 0;    // 1 or 2 for adm_reject
  std::string detail;
  std::vector<std::string> witnesses;  // display names
  std::vector<int> witness_uids;       // same variables, by uid
};

// Global constraint state threaded through the search by value; the stats
// block is shared so counters survive backtracking.
struct ConstraintStore {
  Substitution sigma;
  // Contexts of the axioms accepted so far on this path. Admissibility is a
  // per-leaf property, so each is kept separately and re-verified whenever
  // the store grows: a later binding may retroactively connect a closed
  // leaf's context across a multiplicative split.
  std::vector<VarContext> committed;
  std::shared_ptr<SearchStats> stats;
};

struct SProofNode;
using SProofPtr = std::shared_ptr<const SProofNode>;

struct SProofNode {
  std::string rule;  // ax-, ax+, lolliL, lolliR, tensorL, tensorR, bangL,
                     // bangR, copy, focusL, focusR, blurL, blurR
  SSequent conclusion;  // materialised: delta holds exactly the consumed part
  std::vector<SProofPtr> premises;
  SubstPtr sigma_before;
  SubstPtr sigma_after;
  int gamma_index = -1;  // closure index for copy nodes
  std::vector<std::pair<Var, Var>> copy_renaming;  // old -> fresh, copy nodes
};

struct SProveResult {
  Verdict verdict = Verdict::Unprovable;
  SProofPtr tree;  // set when proved
  Substitution sigma_final;
  SearchStats stats;
  std::vector<TraceEvent> trace;  // populated when tracing was requested
};

SProveResult prove_sljf(const SSequent& s, const Budget& budget,
                        UidSource& uids, bool want_trace = false);

// Axiom-time unification of two indexed atoms followed by the admissibility
// gate; returns the extended store or nullopt. Exposed for tests.
std::optional<ConstraintStore> unify_atoms(const SFormulaPtr& a1,
                                           const SFormulaPtr& a2,
                                           const ConstraintStore& store,
                                           std::vector<TraceEvent>* trace);

struct CheckResult {
  bool ok = true;
  std::string error;
  std::string path;  // premise indices from the root, e.g. "0.1"
  explicit operator bool() const { return ok; }
};

// Independent re-validation of a returned proof: rule schemas, exact linear
// splits, substitution bookkeeping, admissibility at every axiom.
CheckResult check_sljf(const SProofPtr& p, const SSequent& root);

}  // namespace linskol
