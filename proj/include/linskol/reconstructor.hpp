// Rebuilds a focused first-order proof from a skolemised proof and its final
// admissible substitution. The skolemised tree fixes every non-invertible
// choice (foci, splits, copies, axiom pairings); this module re-inserts the
// erased quantifier and shift rules in an order compatible with the
// dependency order induced by the substitution: instantiation witnesses are
// the substitution images with skolem applications collapsed to their
// eigenvariables, and a witness may only be emitted once the eigenvariables
// it mentions have been introduced on the current branch.
#pragma once

#include <stdexcept>
#include <vector>

#include "linskol/ljf_engine.hpp"
#include "linskol/skolemiser.hpp"
#include "linskol/sljf_engine.hpp"

namespace linskol {

struct ReconstructError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Event {
  enum class Kind { Instantiate, IntroduceEigen, Structural };
  Kind kind;
  Var var;
  TermPtr witness;  // Instantiate only
};

// Events in the order the rules sit on a root-to-leaf reading of the emitted
// proof (premises of a split in left-to-right order).
using EventSchedule = std::vector<Event>;

struct ReconstructResult {
  LProofPtr tree;
  EventSchedule schedule;
};

// `sp` must satisfy check_sljf against sk.ssequent; `sigma` is the final
// substitution of the successful search. The result proves
// sk.renamed_original and passes check_ljf. Throws ReconstructError on any
// violated precondition (including schedule deadlock, which admissibility
// rules out for well-formed inputs).
ReconstructResult reconstruct(const SProofPtr& sp, const Substitution& sigma,
                              const SkolemisedSequent& sk);

// The instantiation witness for a variable: its substitution image under
// iterated application, skolem applications collapsed to the eigenvariable,
// unbound existentials defaulted to the signature constant.
TermPtr reconstruction_witness(const Substitution& sigma, const Var& x);

// True iff the schedule is a linear extension of dependency_order(sigma)
// restricted to scheduled variables: for every edge v -> w (w occurs in v's
// image), w's event precedes v's.
bool schedule_respects_order(const EventSchedule& schedule,
                             const Substitution& sigma, std::string* why);

}  // namespace linskol
