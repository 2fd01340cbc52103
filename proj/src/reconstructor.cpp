#include "linskol/reconstructor.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace linskol {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ReconstructError(msg); }

// Composable renaming introduced by mirrored copy rules. resolve applies the
// ancestor views first, so nested copies compose outside-in.
struct View {
  std::shared_ptr<const View> parent;
  std::unordered_map<int, Var> map;

  Var resolve(const Var& v) const {
    Var cur = parent ? parent->resolve(v) : v;
    auto it = map.find(cur.uid);
    return it == map.end() ? cur : it->second;
  }
};
using ViewPtr = std::shared_ptr<const View>;

Var resolve_view(const ViewPtr& view, const Var& v) {
  return view ? view->resolve(v) : v;
}

ViewPtr push_view(const ViewPtr& parent,
                  const std::vector<std::pair<Var, Var>>& renaming) {
  if (renaming.empty()) return parent;
  auto v = std::make_shared<View>();
  v->parent = parent;
  for (const auto& [from, to] : renaming) v->map.emplace(from.uid, to);
  return v;
}

TermPtr collapse_skolem(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Variable:
      if (t->var.kind == VarKind::Existential) return mk_const("t0");
      if (t->var.kind == VarKind::Special)
        fail("witness mentions a special variable: " + t->var.name + "#" + std::to_string(t->var.uid));
      return t;
    case Term::Kind::EigenApp:
      return mk_var(t->var);
    case Term::Kind::Application: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(collapse_skolem(a));
      return mk_app(t->sym, args);
    }
    case Term::Kind::Tuple:
      fail("witness mentions a closure tuple");
  }
  fail("unreachable term kind");
}

// A linear item paired with its skolemised counterpart. `s` is null only for
// the transient park of a collapsed shift pair mid-chain, which is refocused
// before any context split.
struct PItem {
  SFormulaPtr s;
  FormulaPtr l;
  ViewPtr view;
};

struct PGamma {
  Closure cl;
  FormulaPtr l;
  ViewPtr view;
};

struct MState {
  std::vector<PGamma> gamma;
  std::vector<PItem> items;
  SFormulaPtr s_goal;  // null while the right side is focused or detoured
  FormulaPtr l_goal;
  ViewPtr goal_view;
  std::set<int> introduced;  // eigen uids introduced on this branch
};

FormulaPtr strip_foralls(FormulaPtr f) {
  while (f->kind == FKind::Forall) f = f->left;
  return f;
}

bool tops_align_neg(const FormulaPtr& l, const SFormulaPtr& s) {
  const FormulaPtr n = strip_foralls(l);
  switch (s->kind) {
    case SKind::AtomNeg:
      return n->kind == FKind::AtomNeg && n->pred == s->pred;
    case SKind::Lolli:
      return n->kind == FKind::Lolli;
    case SKind::Up:
      return n->kind == FKind::Up;
    default:
      return false;
  }
}

struct Rebuilder {
  const Substitution& sigma;
  EventSchedule schedule;
  DependencyGraph graph;
  std::unordered_map<int, std::vector<Var>> eigen_reach_;

  explicit Rebuilder(const Substitution& s)
      : sigma(s), graph(dependency_order(s)) {}

  TermPtr witness(const Var& x) {
    TermPtr img;
    try {
      img = apply_fix(sigma, mk_var(x));
    } catch (const CycleError& e) {
      fail(std::string("cyclic substitution while forming witness: ") +
           e.what());
    }
    return collapse_skolem(img);
  }

  // Eigenvariables occurring in x's iterated image. The instantiation of x
  // must wait for all of them, not just the collapsed witness head: the
  // schedule promises intro(u) before inst(x) for every u in x sigma^n.
  const std::vector<Var>& eigen_reach(const Var& x) {
    auto it = eigen_reach_.find(x.uid);
    if (it != eigen_reach_.end()) return it->second;
    std::vector<Var> out;
    for (int w : graph.reachable(x.uid)) {
      auto vo = graph.var_of.find(w);
      if (vo != graph.var_of.end() && vo->second.kind == VarKind::Eigen)
        out.push_back(vo->second);
    }
    return eigen_reach_.emplace(x.uid, std::move(out)).first->second;
  }

  bool var_ready(const Var& x, const std::set<int>& introduced) {
    for (const auto& u : eigen_reach(x))
      if (!introduced.count(u.uid)) return false;
    return true;
  }

  // --- node materialisation -------------------------------------------------

  Sequent mseq(const MState& st, const FormulaPtr& focus_left,
               const FormulaPtr& goal, const FormulaPtr& focus_right) {
    Sequent c;
    c.gamma.reserve(st.gamma.size());
    for (const auto& g : st.gamma) c.gamma.push_back(g.l);
    c.delta.reserve(st.items.size());
    for (const auto& it : st.items) c.delta.push_back(it.l);
    c.focus_left = focus_left;
    c.goal = goal;
    c.focus_right = focus_right;
    return c;
  }

  std::shared_ptr<LProofNode> node(std::string rule, Sequent conclusion,
                                   std::vector<LProofPtr> premises) {
    auto n = std::make_shared<LProofNode>();
    n->rule = std::move(rule);
    n->conclusion = std::move(conclusion);
    n->premises = std::move(premises);
    return n;
  }

  // --- skeleton bookkeeping -------------------------------------------------

  const SProofNode* forward(const SProofNode* s) {
    while (s->rule == "lolliR" || s->rule == "tensorL" || s->rule == "bangL") {
      if (s->premises.size() != 1) fail("malformed skeleton inversion node");
      s = s->premises[0].get();
    }
    return s;
  }

  // Splits `items` into the part a skeleton subtree consumes (its root
  // conclusion lists exactly the consumed linear context) and the rest.
  std::pair<std::vector<PItem>, std::vector<PItem>> partition(
      const std::vector<PItem>& items, const std::vector<SFormulaPtr>& used) {
    std::vector<bool> taken(used.size(), false);
    std::vector<PItem> in, out;
    for (const auto& it : items) {
      bool matched = false;
      if (it.s) {
        for (size_t j = 0; j < used.size(); ++j) {
          if (!taken[j] && sformula_equal(it.s, used[j])) {
            taken[j] = true;
            matched = true;
            break;
          }
        }
      }
      (matched ? in : out).push_back(it);
    }
    if (std::find(taken.begin(), taken.end(), false) != taken.end())
      fail("skeleton consumes a linear item the state does not hold");
    return {std::move(in), std::move(out)};
  }

  // --- scheduler ------------------------------------------------------------

  using Cont = std::function<LProofPtr(MState)>;

  // One invertible or alignment step at an unfocused point; returns the node
  // if a step applied, null otherwise. `resume` re-enters the same unfocused
  // point with the stepped state.
  LProofPtr step(MState st, const Cont& resume) {
    // Goal inversions.
    if (st.l_goal && st.l_goal->kind == FKind::Forall) {
      const Var u = resolve_view(st.goal_view, st.l_goal->binder);
      if (u.kind != VarKind::Eigen) fail("goal binder not an eigenvariable");
      schedule.push_back({Event::Kind::IntroduceEigen, u, nullptr});
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      MState st2 = st;
      st2.l_goal = subst_formula(st.l_goal->left, st.l_goal->binder, mk_var(u));
      st2.introduced.insert(u.uid);
      auto n = node("forallR", std::move(c), {resume(std::move(st2))});
      n->eigen = u;
      return n;
    }
    if (st.l_goal && st.l_goal->kind == FKind::Lolli) {
      if (!st.s_goal || st.s_goal->kind != SKind::Lolli)
        fail("goal implication misaligned with skeleton goal");
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      MState st2 = st;
      st2.items.push_back({st.s_goal->left, st.l_goal->left, st.goal_view});
      st2.s_goal = st.s_goal->right;
      st2.l_goal = st.l_goal->right;
      return node("lolliR", std::move(c), {resume(std::move(st2))});
    }
    // Item inversions, leftmost first, products appended at the end so the
    // unrestricted zone grows in the same order as in the skeleton.
    for (size_t i = 0; i < st.items.size(); ++i) {
      const PItem it = st.items[i];
      if (!it.s) continue;
      if (it.l->kind == FKind::Exists) {
        const Var u = resolve_view(it.view, it.l->binder);
        if (u.kind != VarKind::Eigen) fail("left binder not an eigenvariable");
        schedule.push_back({Event::Kind::IntroduceEigen, u, nullptr});
        Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
        MState st2 = st;
        st2.items.erase(st2.items.begin() + i);
        st2.items.push_back(
            {it.s, subst_formula(it.l->left, it.l->binder, mk_var(u)),
             it.view});
        st2.introduced.insert(u.uid);
        auto n = node("existsL", std::move(c), {resume(std::move(st2))});
        n->eigen = u;
        return n;
      }
      if (it.l->kind == FKind::Tensor) {
        if (it.s->kind != SKind::Tensor) fail("tensor item misaligned");
        Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
        MState st2 = st;
        st2.items.erase(st2.items.begin() + i);
        st2.items.push_back({it.s->left, it.l->left, it.view});
        st2.items.push_back({it.s->right, it.l->right, it.view});
        return node("tensorL", std::move(c), {resume(std::move(st2))});
      }
      if (it.l->kind == FKind::Bang) {
        if (it.s->kind != SKind::BangClosure) fail("bang item misaligned");
        Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
        MState st2 = st;
        st2.items.erase(st2.items.begin() + i);
        Closure cl;
        cl.a = it.s->a;
        cl.phi = it.s->phi_cl;
        cl.sigma = it.s->sigma_cl;
        cl.body = it.s->left;
        st2.gamma.push_back({std::move(cl), it.l->left, it.view});
        return node("bangL", std::move(c), {resume(std::move(st2))});
      }
    }
    // Collapsed-shift shuffle on the goal: the skolemisation erased an
    // up-down pair, so focus right, instantiate, and blur back to stable.
    if (st.l_goal && st.l_goal->kind == FKind::Up && st.s_goal &&
        st.s_goal->kind != SKind::Up && goal_shuffle_ready(st)) {
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      auto inner = goal_shuffle_chain(st.l_goal->left, st, resume);
      return node("focusR", std::move(c), {std::move(inner)});
    }
    // Collapsed-shift shuffle on a parked item.
    for (size_t i = 0; i < st.items.size(); ++i) {
      const PItem it = st.items[i];
      if (!it.s || it.l->kind != FKind::Down) continue;
      const bool misaligned =
          it.s->kind != SKind::Down || !tops_align_neg(it.l->left, it.s->left);
      if (!misaligned) continue;
      if (!item_shuffle_ready(it, st.introduced)) continue;
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      MState st2 = st;
      st2.items.erase(st2.items.begin() + i);
      auto inner =
          shuffle_chain(it.l->left, it.s, it.view, std::move(st2), resume);
      return node("focusL", std::move(c), {std::move(inner)});
    }
    return nullptr;
  }

  bool goal_shuffle_ready(const MState& st) {
    FormulaPtr f = st.l_goal->left;
    while (f->kind == FKind::Exists) {
      if (!var_ready(resolve_view(st.goal_view, f->binder), st.introduced))
        return false;
      f = f->left;
    }
    if (f->kind != FKind::Down) fail("unexpected shape under collapsed goal");
    return true;
  }

  // In-focus part of a goal shuffle: existsR*; blurR. Ends unfocused with the
  // unwrapped goal; the skolemised goal is unchanged (the skolemisation
  // erased exactly these rules).
  LProofPtr goal_shuffle_chain(const FormulaPtr& focus, const MState& st,
                               const Cont& resume) {
    if (focus->kind == FKind::Exists) {
      const Var x = resolve_view(st.goal_view, focus->binder);
      TermPtr w = witness(x);
      schedule.push_back({Event::Kind::Instantiate, x, w});
      Sequent c = mseq(st, nullptr, nullptr, focus);
      auto inner = goal_shuffle_chain(
          subst_formula(focus->left, focus->binder, w), st, resume);
      auto n = node("existsR", std::move(c), {std::move(inner)});
      n->witness = w;
      return n;
    }
    if (focus->kind != FKind::Down) fail("collapsed goal chain not a shift");
    Sequent c = mseq(st, nullptr, nullptr, focus);
    MState st2 = st;
    st2.l_goal = focus->left;
    return node("blurR", std::move(c), {resume(std::move(st2))});
  }

  bool item_shuffle_ready(const PItem& it, const std::set<int>& introduced) {
    FormulaPtr f = it.l->left;
    while (f->kind == FKind::Forall) {
      if (!var_ready(resolve_view(it.view, f->binder), introduced))
        return false;
      f = f->left;
    }
    if (f->kind != FKind::Up) fail("unexpected shape under collapsed item");
    return true;
  }

  // Left-focused part of a parked-item shuffle: forallL*; blurL. The exposed
  // positive body re-enters the linear context paired with the untouched
  // skolemised item, and the scheduler continues from there.
  LProofPtr shuffle_chain(const FormulaPtr& focus, const SFormulaPtr& s_item,
                          const ViewPtr& view, MState st, const Cont& resume) {
    if (focus->kind == FKind::Forall) {
      const Var x = resolve_view(view, focus->binder);
      TermPtr w = witness(x);
      schedule.push_back({Event::Kind::Instantiate, x, w});
      Sequent c = mseq(st, focus, st.l_goal, nullptr);
      auto inner = shuffle_chain(subst_formula(focus->left, focus->binder, w),
                                 s_item, view, std::move(st), resume);
      auto n = node("forallL", std::move(c), {std::move(inner)});
      n->witness = w;
      return n;
    }
    if (focus->kind != FKind::Up) fail("parked chain not a shift");
    Sequent c = mseq(st, focus, st.l_goal, nullptr);
    MState st2 = std::move(st);
    st2.items.push_back({s_item, focus->left, view});
    return node("blurL", std::move(c), {resume(std::move(st2))});
  }

  // --- unfocused mirror -----------------------------------------------------

  // Runs scheduler steps to a fixpoint, then either resumes a mid-chain
  // detour (`detour` non-null) or mirrors the skeleton's stable choice.
  LProofPtr unfocused(const SProofNode* s, MState st, const Cont& detour) {
    return unfocused_from(forward(s), std::move(st), detour);
  }

  LProofPtr unfocused_from(const SProofNode* s, MState st, const Cont& detour) {
    auto self = [this, s, detour](MState st2) {
      return unfocused_from(s, std::move(st2), detour);
    };
    if (LProofPtr n = step(st, self)) return n;
    if (detour) return detour(std::move(st));
    return mirror_choice(s, std::move(st));
  }

  // --- skeleton stable choices ----------------------------------------------

  LProofPtr mirror_choice(const SProofNode* s, MState st) {
    if (s->rule == "focusR") {
      if (!st.l_goal || st.l_goal->kind != FKind::Up)
        fail("skeleton focuses right but goal is not an up-shift");
      if (s->premises.size() != 1) fail("malformed focusR skeleton node");
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      FormulaPtr focus = st.l_goal->left;
      ViewPtr view = st.goal_view;
      MState st2 = std::move(st);
      st2.s_goal = nullptr;
      st2.l_goal = nullptr;
      st2.goal_view = nullptr;
      auto inner = rchain(s->premises[0].get(), focus, view, std::move(st2));
      return node("focusR", std::move(c), {std::move(inner)});
    }
    if (s->rule == "focusL") {
      if (s->premises.size() != 1 || !s->premises[0]->conclusion.focus_left)
        fail("malformed focusL skeleton node");
      const SFormulaPtr target = s->premises[0]->conclusion.focus_left;
      int idx = -1;
      for (size_t i = 0; i < st.items.size(); ++i) {
        const PItem& it = st.items[i];
        if (it.s && it.s->kind == SKind::Down &&
            sformula_equal(it.s->left, target) && it.l->kind == FKind::Down) {
          idx = static_cast<int>(i);
          break;
        }
      }
      if (idx < 0) fail("skeleton focuses an item the state cannot match");
      const PItem it = st.items[idx];
      if (!tops_align_neg(it.l->left, it.s->left))
        fail("schedule deadlock: focused item still blocked");
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      MState st2 = std::move(st);
      st2.items.erase(st2.items.begin() + idx);
      auto inner = lchain(s->premises[0].get(), it.l->left, it.s->left, it.view,
                          std::move(st2));
      return node("focusL", std::move(c), {std::move(inner)});
    }
    if (s->rule == "copy") {
      if (s->gamma_index < 0 ||
          s->gamma_index >= static_cast<int>(s->conclusion.gamma.size()) ||
          s->premises.size() != 1)
        fail("malformed copy skeleton node");
      const Closure& scl = s->conclusion.gamma[s->gamma_index];
      int idx = -1;
      for (size_t i = 0; i < st.gamma.size(); ++i)
        if (st.gamma[i].cl.a.uid == scl.a.uid) idx = static_cast<int>(i);
      if (idx < 0) fail("skeleton copies a closure the state does not hold");
      const PGamma& g = st.gamma[idx];
      ViewPtr view = push_view(g.view, s->copy_renaming);
      // The copied instance runs with renamed skolem variables; the renamed
      // skolemised body stands for it in alignment tests, and the view
      // carries the renaming into witnesses and eigenvariables.
      SFormulaPtr s_body = scl.body;
      if (!s->copy_renaming.empty()) {
        std::unordered_map<int, Var> ren;
        for (const auto& [from, to] : s->copy_renaming)
          ren.emplace(from.uid, to);
        s_body = rename_sformula(scl.body, ren);
      }
      Sequent c = mseq(st, nullptr, st.l_goal, nullptr);
      auto inner =
          lchain(s->premises[0].get(), g.l, s_body, view, std::move(st));
      auto n = node("copy", std::move(c), {std::move(inner)});
      n->gamma_index = idx;
      return n;
    }
    fail("skeleton rule '" + s->rule + "' at an unfocused point");
  }

  // --- right-focused chains -------------------------------------------------

  LProofPtr rchain(const SProofNode* s, FormulaPtr focus, ViewPtr view,
                   MState st) {
    if (focus->kind == FKind::Exists) {
      const Var x = resolve_view(view, focus->binder);
      if (!var_ready(x, st.introduced))
        fail("schedule deadlock: witness for " + x.name + "#" +
             std::to_string(x.uid) +
             " needs an eigenvariable not yet introduced");
      TermPtr w = witness(x);
      schedule.push_back({Event::Kind::Instantiate, x, w});
      Sequent c = mseq(st, nullptr, nullptr, focus);
      auto inner = rchain(s, subst_formula(focus->left, focus->binder, w), view,
                          std::move(st));
      auto n = node("existsR", std::move(c), {std::move(inner)});
      n->witness = w;
      return n;
    }
    if (focus->kind == FKind::Down) {
      if (s->rule == "blurR") {
        if (s->premises.size() != 1 || !s->conclusion.focus_right ||
            s->conclusion.focus_right->kind != SKind::Down)
          fail("malformed blurR skeleton node");
        Sequent c = mseq(st, nullptr, nullptr, focus);
        MState st2 = std::move(st);
        st2.s_goal = s->conclusion.focus_right->left;
        st2.l_goal = focus->left;
        st2.goal_view = view;
        auto inner = unfocused(s->premises[0].get(), std::move(st2), nullptr);
        return node("blurR", std::move(c), {std::move(inner)});
      }
      // Collapsed shift pair mid-chain: blur, let the scheduler run at the
      // mini stable point, then refocus and resume against the same skeleton
      // node. The transient goal has no skolemised counterpart, so the
      // generic goal shuffle stays off (null s_goal) and the resume below
      // owns the refocus.
      if (focus->left->kind != FKind::Up)
        fail("collapsed right shift does not expose an up-shift");
      Sequent c = mseq(st, nullptr, nullptr, focus);
      MState st2 = std::move(st);
      st2.s_goal = nullptr;
      st2.l_goal = focus->left;
      st2.goal_view = view;
      auto resume = [this, s](MState st3) -> LProofPtr {
        FormulaPtr scan = st3.l_goal->left;
        while (scan->kind == FKind::Exists) {
          if (!var_ready(resolve_view(st3.goal_view, scan->binder),
                         st3.introduced))
            fail("schedule deadlock: detoured goal still blocked");
          scan = scan->left;
        }
        FormulaPtr refocus = st3.l_goal->left;
        ViewPtr v = st3.goal_view;
        Sequent c2 = mseq(st3, nullptr, st3.l_goal, nullptr);
        MState st4 = std::move(st3);
        st4.s_goal = nullptr;
        st4.l_goal = nullptr;
        st4.goal_view = nullptr;
        auto inner = rchain(s, refocus, v, std::move(st4));
        return node("focusR", std::move(c2), {std::move(inner)});
      };
      auto inner = unfocused_from(forward(s), std::move(st2), resume);
      return node("blurR", std::move(c), {std::move(inner)});
    }
    if (s->rule == "ax+") {
      if (focus->kind != FKind::AtomPos)
        fail("skeleton closes with ax+ but focus is not a positive atom");
      if (s->conclusion.delta.size() != 1) fail("malformed ax+ skeleton node");
      if (st.items.size() != 1)
        fail("positive axiom with leftover linear items");
      const PItem& it = st.items[0];
      if (!it.s || !sformula_equal(it.s, s->conclusion.delta[0]))
        fail("positive axiom consumes a mismatched item");
      if (!alpha_equal(it.l, focus))
        fail("positive axiom mismatch: " + to_string(it.l) + " vs " +
             to_string(focus));
      Sequent c = mseq(st, nullptr, nullptr, focus);
      return node("ax+", std::move(c), {});
    }
    if (s->rule == "tensorR") {
      if (focus->kind != FKind::Tensor)
        fail("skeleton splits a tensor but focus is " + to_string(focus));
      if (s->premises.size() != 2 || !s->conclusion.focus_right)
        fail("malformed tensorR skeleton node");
      record_pair_events(s->conclusion.focus_right);
      auto [in1, rest] = partition(st.items, s->premises[0]->conclusion.delta);
      auto [in2, rest2] = partition(rest, s->premises[1]->conclusion.delta);
      if (!rest2.empty()) fail("tensor split leaves unconsumed linear items");
      Sequent c = mseq(st, nullptr, nullptr, focus);
      MState st1 = st;
      st1.items = std::move(in1);
      MState st2 = std::move(st);
      st2.items = std::move(in2);
      auto t1 = rchain(s->premises[0].get(), focus->left, view, std::move(st1));
      auto t2 =
          rchain(s->premises[1].get(), focus->right, view, std::move(st2));
      return node("tensorR", std::move(c), {std::move(t1), std::move(t2)});
    }
    if (s->rule == "bangR") {
      if (focus->kind != FKind::Bang)
        fail("skeleton promotes but focus is " + to_string(focus));
      if (!st.items.empty()) fail("promotion with leftover linear items");
      if (s->premises.size() != 1 || !s->conclusion.focus_right ||
          s->conclusion.focus_right->kind != SKind::BangClosure)
        fail("malformed bangR skeleton node");
      schedule.push_back(
          {Event::Kind::Structural, s->conclusion.focus_right->a, nullptr});
      Sequent c = mseq(st, nullptr, nullptr, focus);
      MState st2 = std::move(st);
      st2.s_goal = s->conclusion.focus_right->left;
      st2.l_goal = focus->left;
      st2.goal_view = view;
      auto inner = unfocused(s->premises[0].get(), std::move(st2), nullptr);
      return node("bangR", std::move(c), {std::move(inner)});
    }
    fail("skeleton rule '" + s->rule + "' inside a right focus");
  }

  // --- left-focused chains --------------------------------------------------

  LProofPtr lchain(const SProofNode* s, FormulaPtr focus, SFormulaPtr s_focus,
                   ViewPtr view, MState st) {
    if (focus->kind == FKind::Forall) {
      const Var x = resolve_view(view, focus->binder);
      if (!var_ready(x, st.introduced))
        fail("schedule deadlock: witness for " + x.name + "#" +
             std::to_string(x.uid) +
             " needs an eigenvariable not yet introduced");
      TermPtr w = witness(x);
      schedule.push_back({Event::Kind::Instantiate, x, w});
      Sequent c = mseq(st, focus, st.l_goal, nullptr);
      auto inner = lchain(s, subst_formula(focus->left, focus->binder, w),
                          s_focus, view, std::move(st));
      auto n = node("forallL", std::move(c), {std::move(inner)});
      n->witness = w;
      return n;
    }
    if (focus->kind == FKind::Up) {
      if (s->rule == "blurL") {
        if (s_focus->kind != SKind::Up) fail("blurL misaligned with skeleton");
        if (s->premises.size() != 1) fail("malformed blurL skeleton node");
        Sequent c = mseq(st, focus, st.l_goal, nullptr);
        MState st2 = std::move(st);
        st2.items.push_back({s_focus->left, focus->left, view});
        auto inner = unfocused(s->premises[0].get(), std::move(st2), nullptr);
        return node("blurL", std::move(c), {std::move(inner)});
      }
      // Collapsed shift pair mid-chain on the left: park the body as an item
      // without a skolemised counterpart, schedule at the mini stable point,
      // then refocus it and resume against the same skeleton node.
      if (focus->left->kind != FKind::Down)
        fail("collapsed left shift does not expose a down-shift");
      Sequent c = mseq(st, focus, st.l_goal, nullptr);
      MState st2 = std::move(st);
      st2.items.push_back({nullptr, focus->left, view});
      auto resume = [this, s, s_focus](MState st3) -> LProofPtr {
        int idx = -1;
        for (size_t i = 0; i < st3.items.size(); ++i)
          if (!st3.items[i].s) idx = static_cast<int>(i);
        if (idx < 0) fail("detoured item vanished");
        const PItem parked = st3.items[idx];
        FormulaPtr refocus = parked.l->left;
        for (FormulaPtr f = refocus; f->kind == FKind::Forall; f = f->left)
          if (!var_ready(resolve_view(parked.view, f->binder), st3.introduced))
            fail("schedule deadlock: detoured item still blocked");
        Sequent c2 = mseq(st3, nullptr, st3.l_goal, nullptr);
        MState st4 = std::move(st3);
        st4.items.erase(st4.items.begin() + idx);
        auto inner = lchain(s, refocus, s_focus, parked.view, std::move(st4));
        return node("focusL", std::move(c2), {std::move(inner)});
      };
      auto inner = unfocused_from(forward(s), std::move(st2), resume);
      return node("blurL", std::move(c), {std::move(inner)});
    }
    if (s->rule == "ax-") {
      if (focus->kind != FKind::AtomNeg)
        fail("skeleton closes with ax- but focus is " + to_string(focus));
      if (!st.items.empty()) fail("negative axiom with leftover linear items");
      if (!st.l_goal || !alpha_equal(st.l_goal, focus))
        fail("negative axiom mismatch: " + to_string(focus) + " vs goal " +
             (st.l_goal ? to_string(st.l_goal) : std::string("<none>")));
      Sequent c = mseq(st, focus, st.l_goal, nullptr);
      return node("ax-", std::move(c), {});
    }
    if (s->rule == "lolliL") {
      if (focus->kind != FKind::Lolli)
        fail("skeleton applies lolliL but focus is " + to_string(focus));
      if (s->premises.size() != 2 || !s->conclusion.focus_left ||
          s->conclusion.focus_left->kind != SKind::Lolli)
        fail("malformed lolliL skeleton node");
      record_pair_events(s->conclusion.focus_left);
      auto [in1, rest] = partition(st.items, s->premises[0]->conclusion.delta);
      auto [in2, rest2] = partition(rest, s->premises[1]->conclusion.delta);
      if (!rest2.empty())
        fail("implication split leaves unconsumed linear items");
      Sequent c = mseq(st, focus, st.l_goal, nullptr);
      MState st1 = st;
      st1.items = std::move(in1);
      st1.s_goal = nullptr;
      st1.l_goal = nullptr;
      st1.goal_view = nullptr;
      MState st2 = std::move(st);
      st2.items = std::move(in2);
      auto t1 = rchain(s->premises[0].get(), focus->left, view, std::move(st1));
      auto t2 = lchain(s->premises[1].get(), focus->right,
                       s->conclusion.focus_left->right, view, std::move(st2));
      return node("lolliL", std::move(c), {std::move(t1), std::move(t2)});
    }
    fail("skeleton rule '" + s->rule + "' inside a left focus");
  }

  // Records the structural events of the special pair allocated at a split:
  // the specials on one side whose partner indexes the other side. A pair
  // between closed subformulas is recorded by no atom; nothing can depend on
  // it, so its absence from the schedule is harmless.
  void record_pair_events(const SFormulaPtr& split) {
    std::vector<Var> lv, rv;
    std::unordered_set<int> ls, rs;
    sformula_all_vars(split->left, lv, ls);
    sformula_all_vars(split->right, rv, rs);
    std::unordered_set<int> right_uids;
    for (const auto& v : rv) right_uids.insert(v.uid);
    for (const auto& v : lv) {
      if (v.kind != VarKind::Special || v.partner_uid < 0 ||
          !right_uids.count(v.partner_uid))
        continue;
      schedule.push_back({Event::Kind::Structural, v, nullptr});
      for (const auto& w : rv)
        if (w.uid == v.partner_uid) {
          schedule.push_back({Event::Kind::Structural, w, nullptr});
          break;
        }
    }
  }
};

}  // namespace

TermPtr reconstruction_witness(const Substitution& sigma, const Var& x) {
  return collapse_skolem(apply_fix(sigma, mk_var(x)));
}

bool schedule_respects_order(const EventSchedule& schedule,
                             const Substitution& sigma, std::string* why) {
  std::unordered_map<int, size_t> pos;
  for (size_t i = 0; i < schedule.size(); ++i)
    pos.emplace(schedule[i].var.uid, i);  // first occurrence wins
  DependencyGraph g = dependency_order(sigma);
  auto named = [](const Var& v) {
    return v.name + "#" + std::to_string(v.uid);
  };
  // `later` must be scheduled after `earlier`; pairs where either variable
  // has no event are outside the order's restriction to the proof.
  auto check = [&](const Var& later, const Var& earlier,
                   const char* relation) -> bool {
    auto pl = pos.find(later.uid);
    auto pe = pos.find(earlier.uid);
    if (pl == pos.end() || pe == pos.end()) return true;
    if (pe->second < pl->second) return true;
    if (why) {
      *why = "event for " + named(later) + " precedes " + relation + " " +
             named(earlier);
    }
    return false;
  };
  for (const auto& b : sigma.entries()) {
    if (b.var.kind == VarKind::Existential) {
      // x < u and x < a: every eigenvariable or special variable in x's
      // iterated image is introduced before x is instantiated.
      for (int w : g.reachable(b.var.uid)) {
        auto vo = g.var_of.find(w);
        if (vo == g.var_of.end() ||
            vo->second.kind == VarKind::Existential)
          continue;
        if (!check(b.var, vo->second, "its image variable")) return false;
      }
    } else if (b.var.kind == VarKind::Eigen) {
      // u < x and u < a: the variables of u's argument list come before u's
      // introduction.
      auto succs = g.adj.find(b.var.uid);
      if (succs == g.adj.end()) continue;
      for (int w : succs->second) {
        auto vo = g.var_of.find(w);
        if (vo == g.var_of.end()) continue;
        if (!check(b.var, vo->second, "its argument")) return false;
      }
    }
    // Entries binding special variables order nothing by themselves.
  }
  return true;
}

ReconstructResult reconstruct(const SProofPtr& sp, const Substitution& sigma,
                              const SkolemisedSequent& sk) {
  if (!sp) fail("no skeleton to reconstruct from");
  CheckResult pre = check_sljf(sp, sk.ssequent);
  if (!pre.ok) fail("skeleton fails check_sljf: " + pre.error);
  const Sequent& orig = sk.renamed_original;
  if (orig.gamma.size() != sk.ssequent.gamma.size() ||
      orig.delta.size() != sk.ssequent.delta.size() || !orig.goal ||
      !sk.ssequent.goal)
    fail("skolemised sequent does not pair with the original");

  Rebuilder rb(sigma);
  MState st;
  for (size_t i = 0; i < orig.gamma.size(); ++i)
    st.gamma.push_back({sk.ssequent.gamma[i], orig.gamma[i], nullptr});
  for (size_t i = 0; i < orig.delta.size(); ++i)
    st.items.push_back({sk.ssequent.delta[i], orig.delta[i], nullptr});
  st.s_goal = sk.ssequent.goal;
  st.l_goal = orig.goal;
  st.goal_view = nullptr;

  LProofPtr tree = rb.unfocused(sp.get(), std::move(st), nullptr);

  std::string why;
  if (!schedule_respects_order(rb.schedule, sigma, &why))
    fail("reconstruction schedule violates the dependency order: " + why);
  return {std::move(tree), std::move(rb.schedule)};
}

}  // namespace linskol
