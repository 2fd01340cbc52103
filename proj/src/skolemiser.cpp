#include "linskol/skolemiser.hpp"

#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

namespace linskol {

SFormulaPtr pos_adjust(const SFormulaPtr& k) {
  switch (k->kind) {
    case SKind::AtomNeg:
    case SKind::Lolli:
      return mk_sdown(k);
    case SKind::Up:
      return k->left;  // <^P>+ = P
    case SKind::AtomPos:
    case SKind::Tensor:
    case SKind::BangClosure:
    case SKind::Down:
      return k;
  }
  throw std::logic_error("pos_adjust: bad kind");
}

SFormulaPtr neg_adjust(const SFormulaPtr& k) {
  switch (k->kind) {
    case SKind::AtomNeg:
    case SKind::Lolli:
    case SKind::Up:
      return k;
    case SKind::AtomPos:
    case SKind::Tensor:
    case SKind::BangClosure:
      return mk_sup(k);
    case SKind::Down:
      return k->left;  // <vN>- = N
  }
  throw std::logic_error("neg_adjust: bad kind");
}

FormulaPtr assign_kinds(const FormulaPtr& f, bool left_side, UidSource& uids) {
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos:
      return f;
    case FKind::Lolli: {
      auto l = assign_kinds(f->left, !left_side, uids);
      auto r = assign_kinds(f->right, left_side, uids);
      return mk_lolli(l, r);
    }
    case FKind::Tensor: {
      auto l = assign_kinds(f->left, left_side, uids);
      auto r = assign_kinds(f->right, left_side, uids);
      return mk_tensor(l, r);
    }
    case FKind::Bang:
      return mk_bang(assign_kinds(f->left, left_side, uids));
    case FKind::Up:
      return mk_up(assign_kinds(f->left, left_side, uids));
    case FKind::Down:
      return mk_down(assign_kinds(f->left, left_side, uids));
    case FKind::Forall:
    case FKind::Exists: {
      // Instantiable on this side -> existential; parametric -> eigen.
      bool instantiable = (f->kind == FKind::Forall) == left_side;
      Var fresh = instantiable ? uids.fresh_existential(f->binder.name)
                               : uids.fresh_eigen(f->binder.name);
      auto body = assign_kinds(subst_formula(f->left, f->binder, mk_var(fresh)),
                               left_side, uids);
      return f->kind == FKind::Forall ? mk_forall(fresh, body)
                                      : mk_exists(fresh, body);
    }
  }
  throw std::logic_error("assign_kinds: bad kind");
}

namespace {

TermPtr skolem_app(const Var& u, const VarContext& phi) {
  std::vector<TermPtr> args;
  for (const Var& v : phi.existential_and_special()) {
    args.push_back(mk_var(v));
  }
  return mk_eigen_app(u, std::move(args));
}

SFormulaPtr mk_satom(const FormulaPtr& f, const VarContext& phi) {
  return f->kind == FKind::AtomNeg ? mk_satom_neg(f->pred, f->args, phi)
                                   : mk_satom_pos(f->pred, f->args, phi);
}

}  // namespace

SkolemResult skolemise_left(const VarContext& phi, const FormulaPtr& f,
                            UidSource& uids) {
  switch (f->kind) {
    case FKind::AtomNeg:
      return {mk_sdown(mk_satom(f, phi)), Substitution{}};
    case FKind::AtomPos:
      return {mk_satom(f, phi), Substitution{}};
    case FKind::Forall: {
      assert(f->binder.kind == VarKind::Existential);
      return skolemise_left(phi.appended(f->binder), f->left, uids);
    }
    case FKind::Exists: {
      assert(f->binder.kind == VarKind::Eigen);
      auto sub = skolemise_left(phi.appended(f->binder), f->left, uids);
      sub.sigma = sub.sigma.extended(f->binder, skolem_app(f->binder, phi));
      return sub;
    }
    case FKind::Tensor: {
      auto l = skolemise_left(phi, f->left, uids);
      auto r = skolemise_left(phi, f->right, uids);
      return {mk_stensor(pos_adjust(l.formula), pos_adjust(r.formula)),
              l.sigma.merged(r.sigma)};
    }
    case FKind::Lolli: {
      auto [al, ar] = uids.fresh_special_pair("a");
      auto l = skolemise_right(phi.appended(al), f->left, uids);
      auto r = skolemise_left(phi.appended(ar), f->right, uids);
      return {mk_slolli(pos_adjust(l.formula), neg_adjust(r.formula)),
              l.sigma.merged(r.sigma)};
    }
    case FKind::Bang: {
      Var a = uids.fresh_special("a");
      auto sub = skolemise_left(phi.appended(a), f->left, uids);
      auto body = neg_adjust(sub.formula);
      auto closure_sigma = make_subst(sub.sigma.remove(phi));
      return {mk_sbang(a, phi, closure_sigma, body), sub.sigma.restrict_to(phi)};
    }
    case FKind::Up: {
      auto sub = skolemise_left(phi, f->left, uids);
      return {pos_adjust(sub.formula), std::move(sub.sigma)};
    }
    case FKind::Down: {
      auto sub = skolemise_left(phi, f->left, uids);
      return {neg_adjust(sub.formula), std::move(sub.sigma)};
    }
  }
  throw std::logic_error("skolemise_left: bad kind");
}

SkolemResult skolemise_right(const VarContext& phi, const FormulaPtr& f,
                             UidSource& uids) {
  switch (f->kind) {
    case FKind::AtomNeg:
      return {mk_satom(f, phi), Substitution{}};
    case FKind::AtomPos:
      return {mk_sup(mk_satom(f, phi)), Substitution{}};
    case FKind::Forall: {
      assert(f->binder.kind == VarKind::Eigen);
      auto sub = skolemise_right(phi.appended(f->binder), f->left, uids);
      sub.sigma = sub.sigma.extended(f->binder, skolem_app(f->binder, phi));
      return sub;
    }
    case FKind::Exists: {
      assert(f->binder.kind == VarKind::Existential);
      return skolemise_right(phi.appended(f->binder), f->left, uids);
    }
    case FKind::Tensor: {
      auto [al, ar] = uids.fresh_special_pair("a");
      auto l = skolemise_right(phi.appended(al), f->left, uids);
      auto r = skolemise_right(phi.appended(ar), f->right, uids);
      return {mk_stensor(pos_adjust(l.formula), pos_adjust(r.formula)),
              l.sigma.merged(r.sigma)};
    }
    case FKind::Lolli: {
      auto l = skolemise_left(phi, f->left, uids);
      auto r = skolemise_right(phi, f->right, uids);
      return {mk_slolli(pos_adjust(l.formula), neg_adjust(r.formula)),
              l.sigma.merged(r.sigma)};
    }
    case FKind::Bang: {
      Var a = uids.fresh_special("a");
      auto sub = skolemise_right(phi.appended(a), f->left, uids);
      auto body = neg_adjust(sub.formula);
      auto closure_sigma = make_subst(sub.sigma.remove(phi));
      return {mk_sbang(a, phi, closure_sigma, body), sub.sigma.restrict_to(phi)};
    }
    case FKind::Up: {
      auto sub = skolemise_right(phi, f->left, uids);
      return {pos_adjust(sub.formula), std::move(sub.sigma)};
    }
    case FKind::Down: {
      auto sub = skolemise_right(phi, f->left, uids);
      return {neg_adjust(sub.formula), std::move(sub.sigma)};
    }
  }
  throw std::logic_error("skolemise_right: bad kind");
}

namespace {

void emit_special_pairs(const std::vector<Var>& all,
                        std::vector<std::pair<Var, Var>>& out) {
  std::map<int, Var> by_uid;
  for (const Var& v : all) {
    if (v.kind == VarKind::Special) by_uid.emplace(v.uid, v);
  }
  std::set<int> seen_pair_ids;
  for (const Var& v : all) {
    if (v.kind != VarKind::Special || v.pair_id < 0) continue;
    if (!seen_pair_ids.insert(v.pair_id).second) continue;
    auto it = by_uid.find(v.partner_uid);
    if (it == by_uid.end()) continue;
    const Var& lo = v.uid < it->second.uid ? v : it->second;
    const Var& hi = v.uid < it->second.uid ? it->second : v;
    out.emplace_back(lo, hi);
  }
}

}  // namespace

SkolemisedSequent skolemise_sequent(const Sequent& s, UidSource& uids) {
  if (s.focus_left || s.focus_right || !s.goal) {
    throw std::invalid_argument(
        "skolemise_sequent: expected an unfocused sequent with a goal");
  }
  SkolemisedSequent out;
  Substitution sigma0;
  VarContext empty;
  for (const FormulaPtr& g : s.gamma) {
    FormulaPtr renamed = assign_kinds(g, /*left_side=*/true, uids);
    out.renamed_original.gamma.push_back(renamed);
    // An unrestricted assumption is handled as if banged: it becomes a modal
    // closure over the empty outer context.
    Var a = uids.fresh_special("a");
    auto sub = skolemise_left(empty.appended(a), renamed, uids);
    Closure cl;
    cl.a = a;
    cl.phi = empty;
    cl.sigma = make_subst(sub.sigma);
    cl.body = neg_adjust(sub.formula);
    out.ssequent.gamma.push_back(std::move(cl));
  }
  for (const FormulaPtr& d : s.delta) {
    FormulaPtr renamed = assign_kinds(d, /*left_side=*/true, uids);
    out.renamed_original.delta.push_back(renamed);
    auto sub = skolemise_left(empty, renamed, uids);
    out.ssequent.delta.push_back(pos_adjust(sub.formula));
    sigma0 = sigma0.merged(sub.sigma);
  }
  {
    FormulaPtr renamed = assign_kinds(s.goal, /*left_side=*/false, uids);
    out.renamed_original.goal = renamed;
    auto sub = skolemise_right(empty, renamed, uids);
    out.ssequent.goal = neg_adjust(sub.formula);
    sigma0 = sigma0.merged(sub.sigma);
  }
  out.ssequent.sigma = make_subst(sigma0);

  std::vector<Var> all;
  std::unordered_set<int> seen_uids;
  for (const auto& cl : out.ssequent.gamma) {
    sformula_all_vars(cl.body, all, seen_uids);
  }
  for (const auto& d : out.ssequent.delta) {
    sformula_all_vars(d, all, seen_uids);
  }
  sformula_all_vars(out.ssequent.goal, all, seen_uids);
  emit_special_pairs(all, out.special_pairs);
  return out;
}

}  // namespace linskol
