// Core syntax: variables, first-order terms, polarised formulas for the
// focused calculus (LJF) and its skolemised quantifier-free counterpart
// (SLJF), variable contexts, sequents. All term/formula nodes are immutable
// and shared; identity of variables is the uid, names are display-only.
#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace linskol {

// ---------------------------------------------------------------------------
// Variables

enum class VarKind { Existential, Eigen, Special };

// A variable handle. Equality and hashing go by uid only; `name` is the
// display base name (collisions are disambiguated by the printer).
// Special variables created in left/right pairs share a pair_id and know
// their partner's uid; unpaired specials (bang markers) have pair_id = -1.
struct Var {
  std::string name;
  VarKind kind = VarKind::Existential;
  int uid = 0;
  int pair_id = -1;
  int partner_uid = -1;

  bool operator==(const Var& o) const { return uid == o.uid; }
  bool operator!=(const Var& o) const { return uid != o.uid; }
};

const char* to_string(VarKind k);

// Monotone uid supply, threaded explicitly through every phase so runs are
// reproducible.
class UidSource {
 public:
  int fresh() { return next_++; }
  int peek() const { return next_; }

  Var fresh_var(std::string name, VarKind kind) {
    return Var{std::move(name), kind, fresh(), -1, -1};
  }
  Var fresh_existential(std::string name) {
    return fresh_var(std::move(name), VarKind::Existential);
  }
  Var fresh_eigen(std::string name) {
    return fresh_var(std::move(name), VarKind::Eigen);
  }
  // Unpaired special (bang marker).
  Var fresh_special(std::string name) {
    return fresh_var(std::move(name), VarKind::Special);
  }
  // Paired specials marking the two sides of a multiplicative rule.
  std::pair<Var, Var> fresh_special_pair(const std::string& base) {
    int pid = next_pair_++;
    Var l{base + "L", VarKind::Special, fresh(), pid, -1};
    Var r{base + "R", VarKind::Special, fresh(), pid, -1};
    l.partner_uid = r.uid;
    r.partner_uid = l.uid;
    return {l, r};
  }

 private:
  int next_ = 1;
  int next_pair_ = 1;
};

// ---------------------------------------------------------------------------
// Terms
//
//   t ::= v | f(t1,...,tn) | (t1,...,tn) | u(t1,...,tn)
//
// EigenApp u(t...) is a skolem application: the head is an eigenvariable
// acting as a rigid function symbol; substitution never rewrites the head.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Variable, Application, Tuple, EigenApp };
  Kind kind;
  Var var;                    // Variable: the var; EigenApp: the head
  std::string sym;            // Application: function symbol
  std::vector<TermPtr> args;  // Application / Tuple / EigenApp
};

TermPtr mk_var(Var v);
TermPtr mk_app(std::string sym, std::vector<TermPtr> args);
TermPtr mk_const(std::string sym);
TermPtr mk_tuple(std::vector<TermPtr> elems);
TermPtr mk_eigen_app(Var head, std::vector<TermPtr> args);

bool term_equal(const TermPtr& a, const TermPtr& b);
// Does `v` occur anywhere in t (as bare var, in args, or as an eigen head)?
bool occurs_in_term(const Var& v, const TermPtr& t);
// Variables of t in order of first occurrence, deduplicated; eigen heads
// included.
void collect_vars(const TermPtr& t, std::vector<Var>& out,
                  std::unordered_set<int>& seen);
std::vector<Var> term_vars(const TermPtr& t);

// ---------------------------------------------------------------------------
// Signature: function symbols with arities plus the designated constant t0
// used to ground leftover existentials.

class Signature {
 public:
  Signature() { declare(t0_name(), 0); }
  static std::string t0_name() { return "t0"; }
  TermPtr t0() const { return mk_const(t0_name()); }

  // Declares or re-checks a symbol; throws std::runtime_error on arity clash.
  void declare(const std::string& name, int arity);
  bool known(const std::string& name) const { return arity_.count(name) > 0; }
  int arity(const std::string& name) const;
  const std::map<std::string, int>& symbols() const { return arity_; }

 private:
  std::map<std::string, int> arity_;
};

// ---------------------------------------------------------------------------
// LJF formulas, polarised:
//   N ::= A- | P -o N | fa x. N | ^P
//   P ::= A+ | P * P | !N | ex x. P | vN

enum class FKind {
  AtomNeg,  // negative atom
  Lolli,    // P -o N
  Forall,   // fa x. N
  Up,       // ^P
  AtomPos,  // positive atom
  Tensor,   // P1 * P2
  Bang,     // !N
  Exists,   // ex x. P
  Down      // vN
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind;
  // Atoms:
  std::string pred;
  std::vector<TermPtr> args;
  // Binders (Forall / Exists): binder var, body in `left`.
  Var binder;
  // Structure: Lolli(left=P, right=N), Tensor(left, right); unary in `left`.
  FormulaPtr left, right;
};

bool is_negative(FKind k);
bool is_positive(FKind k);
bool is_negative(const FormulaPtr& f);
bool is_positive(const FormulaPtr& f);

FormulaPtr mk_atom_neg(std::string pred, std::vector<TermPtr> args);
FormulaPtr mk_atom_pos(std::string pred, std::vector<TermPtr> args);
FormulaPtr mk_lolli(FormulaPtr p, FormulaPtr n);
FormulaPtr mk_forall(Var x, FormulaPtr n);
FormulaPtr mk_up(FormulaPtr p);
FormulaPtr mk_tensor(FormulaPtr p1, FormulaPtr p2);
FormulaPtr mk_bang(FormulaPtr n);
FormulaPtr mk_exists(Var x, FormulaPtr p);
FormulaPtr mk_down(FormulaPtr n);

// Capture-free instantiation of one binder variable (identified by uid)
// by a term, over atom argument positions. Formulas are alpha-distinct by
// construction, so no shadowing handling is needed.
FormulaPtr subst_formula(const FormulaPtr& f, const Var& x, const TermPtr& t);
// Simultaneous variable renaming over terms and binders.
FormulaPtr rename_formula(const FormulaPtr& f,
                          const std::unordered_map<int, Var>& ren);
TermPtr rename_term(const TermPtr& t, const std::unordered_map<int, Var>& ren);

// Fresh uid for every binder; base names preserved.
FormulaPtr alpha_rename(const FormulaPtr& f, UidSource& uids);
// Structural equality modulo binder names/uids.
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);
// Free variables of an LJF formula (order of first occurrence).
std::vector<Var> formula_free_vars(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Variable contexts Phi: ordered, duplicate-free lists of variables.

class VarContext {
 public:
  VarContext() = default;
  explicit VarContext(std::vector<Var> vars);

  bool contains(int uid) const { return uids_.count(uid) > 0; }
  bool contains(const Var& v) const { return contains(v.uid); }
  bool empty() const { return vars_.empty(); }
  std::size_t size() const { return vars_.size(); }
  const std::vector<Var>& vars() const { return vars_; }
  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  // Appends a var that must not already be present.
  VarContext appended(const Var& v) const;
  // Set union preserving first-occurrence order.
  VarContext merged(const VarContext& o) const;
  // Existential and special members only (the tilde operation used for
  // skolem argument lists).
  std::vector<Var> existential_and_special() const;

  bool same_set(const VarContext& o) const;

 private:
  std::vector<Var> vars_;
  std::unordered_set<int> uids_;
};

// ---------------------------------------------------------------------------
// SLJF formulas (quantifier-free, atoms indexed by variable contexts):
//   N ::= A-_Phi | P -o N | ^P
//   P ::= A+_Phi | P * P | !_{(a;Phi;sigma)} N | vN
// The closure annotation on bang is carried via BangClosure.

enum class SKind { AtomNeg, Lolli, Up, AtomPos, Tensor, BangClosure, Down };

struct SFormula;
using SFormulaPtr = std::shared_ptr<const SFormula>;

// Forward declaration; full definition in substitution.hpp.
class Substitution;

struct SFormula {
  SKind kind;
  // Atoms:
  std::string pred;
  std::vector<TermPtr> args;
  VarContext phi;  // atom index
  // Structure:
  SFormulaPtr left, right;
  // BangClosure annotation (a; phi_cl; sigma_cl) with body in `left`:
  Var a;
  VarContext phi_cl;
  std::shared_ptr<const Substitution> sigma_cl;
};

bool is_negative(SKind k);
bool is_positive(SKind k);
bool is_negative(const SFormulaPtr& f);
bool is_positive(const SFormulaPtr& f);

SFormulaPtr mk_satom_neg(std::string pred, std::vector<TermPtr> args,
                         VarContext phi);
SFormulaPtr mk_satom_pos(std::string pred, std::vector<TermPtr> args,
                         VarContext phi);
SFormulaPtr mk_slolli(SFormulaPtr p, SFormulaPtr n);
SFormulaPtr mk_sup(SFormulaPtr p);
SFormulaPtr mk_stensor(SFormulaPtr p1, SFormulaPtr p2);
SFormulaPtr mk_sbang(Var a, VarContext phi_cl,
                     std::shared_ptr<const Substitution> sigma_cl,
                     SFormulaPtr body);
SFormulaPtr mk_sdown(SFormulaPtr n);

// FV per the skolemised-formula definition: atoms contribute their index,
// bang contributes its closure context, shifts are transparent.
VarContext sformula_free_vars(const SFormulaPtr& f);
// All variables mentioned anywhere (indices, args, closure contexts and
// closure substitutions); used for whole-sequent variable inventories.
void sformula_all_vars(const SFormulaPtr& f, std::vector<Var>& out,
                       std::unordered_set<int>& seen);
// Simultaneous renaming over args, indices, closure annotations.
SFormulaPtr rename_sformula(const SFormulaPtr& f,
                            const std::unordered_map<int, Var>& ren);
bool sformula_equal(const SFormulaPtr& a, const SFormulaPtr& b);

// ---------------------------------------------------------------------------
// Sequents.

// LJF: Gamma; Delta |- goal with at most one focus. Exactly one of
// goal / focus_right is set; focus_left and focus_right are mutually
// exclusive.
struct Sequent {
  std::vector<FormulaPtr> gamma;  // negative, unrestricted
  std::vector<FormulaPtr> delta;  // positive, linear (unfocused part)
  FormulaPtr focus_left;          // [N] or null
  FormulaPtr goal;                // N or null
  FormulaPtr focus_right;         // [P] or null
};

// Modal context entry of the skolemised calculus: (a; Phi; sigma): N.
struct Closure {
  Var a;
  VarContext phi;
  std::shared_ptr<const Substitution> sigma;
  SFormulaPtr body;  // negative
};

// SLJF: closures; Delta |- goal ; sigma (one global substitution).
struct SSequent {
  std::vector<Closure> gamma;
  std::vector<SFormulaPtr> delta;
  SFormulaPtr focus_left;
  SFormulaPtr goal;
  SFormulaPtr focus_right;
  std::shared_ptr<const Substitution> sigma;  // initial store
};

// ---------------------------------------------------------------------------
// Printing. Formula/term printers emit the concrete input syntax; a Namer
// disambiguates colliding display names by appending a numeric subscript in
// order of first appearance (x, x2, x3, ...).

class Namer {
 public:
  std::string name(const Var& v) const;

 private:
  mutable std::unordered_map<int, std::string> assigned_;
  mutable std::unordered_map<std::string, int> used_;
};

std::string to_string(const TermPtr& t);
std::string to_string(const TermPtr& t, const Namer& nm);
std::string to_string(const FormulaPtr& f);
std::string to_string(const FormulaPtr& f, const Namer& nm);
std::string to_string(const SFormulaPtr& f);
std::string to_string(const SFormulaPtr& f, const Namer& nm);
std::string to_string(const VarContext& phi, const Namer& nm);
std::string to_string(const Sequent& s);
std::string to_string(const SSequent& s);

}  // namespace linskol
