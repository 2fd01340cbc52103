// Parallel substitutions with three binding forms (term over an existential
// or special variable, skolem application over an eigenvariable), their
// typing, application, fixpoint application, restriction/removal, the
// dependency order on bound variables, and the admissibility check that
// gates axioms in the skolemised calculus.
#pragma once

#include "linskol/syntax.hpp"

namespace linskol {

// One entry image/var. For an eigenvariable the image is its skolem
// application u(t1,...,tn) headed by the variable itself.
struct Binding {
  Var var;
  TermPtr image;
  bool is_skolem() const { return var.kind == VarKind::Eigen; }
};

class Substitution {
 public:
  Substitution() = default;

  bool has(int uid) const { return index_.count(uid) > 0; }
  bool has(const Var& v) const { return has(v.uid); }
  std::optional<TermPtr> lookup(int uid) const;
  const std::vector<Binding>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Pure extension; the variable must be unbound. Eigen images must be
  // skolem applications headed by the variable. Throws std::logic_error.
  Substitution extended(const Var& v, TermPtr image) const;
  // Special re-binding at bang-right: if already bound (to a tuple), the new
  // elements are merged into the tuple (order-preserving union).
  Substitution extended_merge_special(const Var& a,
                                      const std::vector<TermPtr>& elems) const;
  // Entry-wise union; every duplicated uid must carry an equal image
  // (specials merge tuples). Used when stores from independent premises join.
  Substitution merged(const Substitution& o) const;

  Substitution restrict_to(const VarContext& phi) const;  // keep dom in Phi
  Substitution remove(const VarContext& phi) const;       // keep dom not in Phi
  // Renames domain variables and images simultaneously.
  Substitution renamed(const std::unordered_map<int, Var>& ren) const;

  // Set-wise equality (same bound uids, structurally equal images).
  bool operator==(const Substitution& o) const;
  bool operator!=(const Substitution& o) const { return !(*this == o); }
  // Is every entry of `o` present here with an equal image?
  bool contains_all(const Substitution& o) const;

 private:
  std::vector<Binding> entries_;
  std::unordered_map<int, int> index_;  // uid -> position in entries_
};

using SubstPtr = std::shared_ptr<const Substitution>;
SubstPtr empty_subst();
SubstPtr make_subst(Substitution s);

struct CycleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One parallel pass: bare bound variables are replaced by their images;
// skolem-application heads are rigid (only their arguments are visited).
TermPtr apply(const Substitution& s, const TermPtr& t);
// Iterates apply until the term is stable; throws CycleError if not stable
// within |dom(s)|+1 iterations (only possible for cyclic stores).
TermPtr apply_fix(const Substitution& s, const TermPtr& t);

// Permissive typing judgment  s : domain -> codomain : every bound variable
// appears in the codomain and every image is well-built over the domain
// (for skolem entries, the argument list is what must be well-built).
// Reports the first failing binding through `why`.
bool typecheck(const Substitution& s, const VarContext& domain,
               const VarContext& codomain, std::string* why = nullptr);

// Dependency order on variables: v < w iff w occurs in v's image (for
// eigenvariables, in the skolem argument list). Edges are built uniformly
// for all binding kinds, including special-variable tuple images.
struct DependencyGraph {
  std::vector<Var> nodes;                         // sources and targets
  std::unordered_map<int, std::vector<int>> adj;  // uid -> successor uids
  std::unordered_map<int, Var> var_of;

  std::vector<std::pair<Var, Var>> edges() const;
  // Reachability from `from` in >= 1 step.
  std::unordered_set<int> reachable(int from) const;
  bool acyclic(std::vector<Var>* cycle = nullptr) const;
};
DependencyGraph dependency_order(const Substitution& s);

// Admissibility of s for Phi:
//  (1) no existential or special v occurs in v.s^n for any n
//      (equivalently: the dependency graph has no cycle, every cycle
//      passing through an existential or special node);
//  (2) if any variable of Phi reaches a paired special a through the
//      store, a's partner must not be in Phi as well. Only Phi's members
//      are constrained: s may bind variables of other branches to terms
//      depending on either side of a pair.
struct AdmissibilityVerdict {
  bool ok = true;
  int condition = 0;           // 1 or 2 when violated
  std::vector<Var> witnesses;  // cond 1: violating vars; cond 2: {x, a, a'}
  std::vector<Var> cycle;      // cond 1: one offending cycle
  std::string detail;
  explicit operator bool() const { return ok; }
};
AdmissibilityVerdict admissible(const Substitution& s, const VarContext& phi);

std::string to_string(const Substitution& s);
std::string to_string(const Substitution& s, const Namer& nm);

}  // namespace linskol
