// Reference prover for the focused first-order calculus, with full
// backtracking over focus order, context splits, and copy usage. Quantifier
// instantiation uses metavariables resolved by unification; eigenvariable
// scoping is enforced with level tags (a metavariable may only be bound to
// terms whose eigenvariables were introduced before it). Successful searches
// are grounded (remaining metavariables default to the signature constant)
// and returned as checkable trees.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "linskol/sljf_engine.hpp"  // Budget, Verdict, SearchStats, CheckResult
#include "linskol/syntax.hpp"

namespace linskol {

struct LProofNode;
using LProofPtr = std::shared_ptr<const LProofNode>;

struct LProofNode {
  std::string rule;  // ax-, ax+, forallL, forallR, existsL, existsR, lolliL,
                     // lolliR, tensorL, tensorR, bangL, bangR, copy, focusL,
                     // focusR, blurL, blurR
  Sequent conclusion;  // materialised: delta holds exactly the consumed part
  std::vector<LProofPtr> premises;
  TermPtr witness;      // forallL / existsR
  Var eigen;            // forallR / existsL
  int gamma_index = -1; // copy
};

struct LProveResult {
  Verdict verdict = Verdict::Unprovable;
  LProofPtr tree;  // ground, set when proved
  SearchStats stats;
};

LProveResult prove_ljf(const Sequent& s, const Budget& budget,
                       UidSource& uids);

// Independent schema validation over a ground tree: rule shapes, exact
// linear splits, eigenvariable freshness, witness substitution equations.
CheckResult check_ljf(const LProofPtr& p, const Sequent& root);

}  // namespace linskol
