// Skolemisation of polarised first-order formulas into the quantifier-free
// indexed syntax. Quantifiers whose rule would instantiate (left universals,
// right existentials) turn into existential variables recorded in atom
// indices; quantifiers whose rule would introduce a fresh parameter (left
// existentials, right universals) turn into eigenvariables bound to skolem
// applications over the existential and special variables in scope.
// Multiplicative rule positions that split resources on the way up (right
// tensor, left lolli) allocate a fresh special-variable pair; bang allocates
// an unpaired special naming its modal closure.
#pragma once

#include "linskol/substitution.hpp"
#include "linskol/syntax.hpp"

namespace linskol {

// Polarity adjustments <K>+ / <K>- (identity when already the wanted
// polarity, a single shift otherwise; shifts of the opposite direction are
// stripped).
SFormulaPtr pos_adjust(const SFormulaPtr& k);
SFormulaPtr neg_adjust(const SFormulaPtr& k);

struct SkolemResult {
  SFormulaPtr formula;  // unadjusted result K
  Substitution sigma;   // emitted skolem bindings
};

// Renames every binder fresh and assigns variable kinds by quantifier and
// sequent side (the side flips at the left child of a lolli). The returned
// formula's binder variables are exactly the variables appearing in the
// skolemised output and its substitution.
FormulaPtr assign_kinds(const FormulaPtr& f, bool left_side, UidSource& uids);

// Fig-style structural recursion; `f` must already carry kinded binders
// (see assign_kinds). Contexts grow towards the leaves.
SkolemResult skolemise_left(const VarContext& phi, const FormulaPtr& f,
                            UidSource& uids);
SkolemResult skolemise_right(const VarContext& phi, const FormulaPtr& f,
                             UidSource& uids);

struct SkolemisedSequent {
  SSequent ssequent;
  // The kinded, freshly renamed copy of the input; alpha-equal to it. Its
  // binder variables are the ones indexed and bound by the skolemisation,
  // which is what proof reconstruction keys on.
  Sequent renamed_original;
  std::vector<std::pair<Var, Var>> special_pairs;
};

// Skolemises each zone formula independently from the empty context:
// unrestricted formulas become modal closures, linear formulas are
// positively adjusted, the goal negatively.
SkolemisedSequent skolemise_sequent(const Sequent& s, UidSource& uids);

}  // namespace linskol
