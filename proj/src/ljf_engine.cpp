#include "linskol/ljf_engine.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "linskol/substitution.hpp"

namespace linskol {
namespace {

// ---------------------------------------------------------------------------
// Metavariable environment. Metavariables reuse the existential kind; levels
// implement eigenvariable scoping: a metavariable of level l may only denote
// terms whose eigenvariables have level < l, and binding a term into an
// older metavariable lowers the levels of the metavariables it contains.

struct LStore {
  Substitution bind;  // metavariable bindings
  std::unordered_map<int, int> meta_level;
  std::unordered_map<int, int> eigen_level;
  int clock = 0;
  std::shared_ptr<SearchStats> stats;
};

TermPtr resolve(const LStore& st, TermPtr t) {
  while (t->kind == Term::Kind::Variable &&
         t->var.kind == VarKind::Existential) {
    auto img = st.bind.lookup(t->var.uid);
    if (!img) return t;
    t = *img;
  }
  return t;
}

bool occurs(const LStore& st, int uid, const TermPtr& t0) {
  TermPtr t = resolve(st, t0);
  if (t->kind == Term::Kind::Variable) return t->var.uid == uid;
  for (const auto& a : t->args) {
    if (occurs(st, uid, a)) return true;
  }
  return false;
}

// Scope pass for binding X (level lx) to t: every eigen must be older than
// X; metavariables inside t are lowered to X's level.
bool scope_and_lower(LStore& st, int lx, const TermPtr& t0) {
  TermPtr t = resolve(st, t0);
  if (t->kind == Term::Kind::Variable) {
    if (t->var.kind == VarKind::Eigen) {
      auto it = st.eigen_level.find(t->var.uid);
      int lu = it == st.eigen_level.end() ? -1 : it->second;
      return lu < lx;
    }
    if (t->var.kind == VarKind::Existential) {
      auto it = st.meta_level.find(t->var.uid);
      if (it != st.meta_level.end() && it->second > lx) it->second = lx;
      return true;
    }
    return true;
  }
  for (const auto& a : t->args) {
    if (!scope_and_lower(st, lx, a)) return false;
  }
  return true;
}

bool bind_meta(LStore& st, const Var& x, const TermPtr& t) {
  if (occurs(st, x.uid, t)) return false;
  int lx = st.meta_level.at(x.uid);
  if (!scope_and_lower(st, lx, t)) return false;
  st.bind = st.bind.extended(x, t);
  return true;
}

bool unify(LStore& st, const TermPtr& t1, const TermPtr& t2) {
  TermPtr a = resolve(st, t1);
  TermPtr b = resolve(st, t2);
  bool a_var = a->kind == Term::Kind::Variable;
  bool b_var = b->kind == Term::Kind::Variable;
  if (a_var && b_var && a->var.uid == b->var.uid) return true;
  bool a_meta = a_var && a->var.kind == VarKind::Existential;
  bool b_meta = b_var && b->var.kind == VarKind::Existential;
  if (a_meta && b_meta) {
    // Bind the younger to the older so no lowering is needed.
    if (st.meta_level.at(a->var.uid) >= st.meta_level.at(b->var.uid)) {
      return bind_meta(st, a->var, b);
    }
    return bind_meta(st, b->var, a);
  }
  if (a_meta) return bind_meta(st, a->var, b);
  if (b_meta) return bind_meta(st, b->var, a);
  if (a_var || b_var) {
    return false;  // distinct rigid variables (or variable vs application)
  }
  if (a->kind != b->kind) return false;
  if (a->kind == Term::Kind::Application) {
    if (a->sym != b->sym || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      if (!unify(st, a->args[i], b->args[i])) return false;
    }
    return true;
  }
  return false;  // eigen applications / tuples do not occur here
}

// ---------------------------------------------------------------------------
// Search.

struct DItem {
  int id;
  FormulaPtr f;
};

struct GItem {
  FormulaPtr f;
  int copies_used = 0;
};

using Items = std::vector<DItem>;
using Cont = std::function<bool(LProofPtr, const Items&, const LStore&)>;

bool is_stable_item(const FormulaPtr& f) {
  return f->kind == FKind::AtomPos || f->kind == FKind::Down;
}

class LSearcher {
 public:
  LSearcher(const Budget& budget, UidSource& uids,
            std::shared_ptr<SearchStats> stats)
      : budget_(budget), uids_(uids), stats_(std::move(stats)) {}

  bool budget_hit = false;

  bool prove_seq(const std::vector<GItem>& gamma, const Items& din,
                 const FormulaPtr& goal, const LStore& store, int depth,
                 const Cont& k) {
    if (!spend(depth)) return false;
    if (goal->kind == FKind::Lolli) {
      DItem item{next_id(), goal->left};
      Items din2 = din;
      din2.push_back(item);
      return prove_seq(
          gamma, din2, goal->right, store, depth + 1,
          [&](LProofPtr t, const Items& leftover, const LStore& s2) {
            if (contains_id(leftover, item.id)) return false;
            return k(node("lolliR", gamma, din, leftover, nullptr, goal,
                          nullptr, {std::move(t)}),
                     leftover, s2);
          });
    }
    if (goal->kind == FKind::Forall) {
      LStore s1 = store;
      Var u = uids_.fresh_eigen(goal->binder.name);
      s1.eigen_level[u.uid] = s1.clock++;
      FormulaPtr body = subst_formula(goal->left, goal->binder, mk_var(u));
      return prove_seq(
          gamma, din, body, s1, depth + 1,
          [&](LProofPtr t, const Items& leftover, const LStore& s2) {
            auto n = node("forallR", gamma, din, leftover, nullptr, goal,
                          nullptr, {std::move(t)});
            n->eigen = u;
            return k(std::move(n), leftover, s2);
          });
    }
    for (std::size_t i = 0; i < din.size(); ++i) {
      const DItem& item = din[i];
      if (item.f->kind == FKind::Tensor) {
        DItem l{next_id(), item.f->left}, r{next_id(), item.f->right};
        Items din2 = erase_at(din, i);
        din2.push_back(l);
        din2.push_back(r);
        return prove_seq(
            gamma, din2, goal, store, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              if (contains_id(leftover, l.id) || contains_id(leftover, r.id)) {
                return false;
              }
              return k(node("tensorL", gamma, din, leftover, nullptr, goal,
                            nullptr, {std::move(t)}),
                       leftover, s2);
            });
      }
      if (item.f->kind == FKind::Exists) {
        LStore s1 = store;
        Var u = uids_.fresh_eigen(item.f->binder.name);
        s1.eigen_level[u.uid] = s1.clock++;
        DItem prod{next_id(),
                   subst_formula(item.f->left, item.f->binder, mk_var(u))};
        Items din2 = erase_at(din, i);
        din2.push_back(prod);
        return prove_seq(
            gamma, din2, goal, s1, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              if (contains_id(leftover, prod.id)) return false;
              auto n = node("existsL", gamma, din, leftover, nullptr, goal,
                            nullptr, {std::move(t)});
              n->eigen = u;
              return k(std::move(n), leftover, s2);
            });
      }
      if (item.f->kind == FKind::Bang) {
        std::vector<GItem> gamma2 = gamma;
        gamma2.push_back(GItem{item.f->left, 0});
        Items din2 = erase_at(din, i);
        return prove_seq(
            gamma2, din2, goal, store, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              return k(node("bangL", gamma, din, leftover, nullptr, goal,
                            nullptr, {std::move(t)}),
                       leftover, s2);
            });
      }
    }
    // Stable. Deterministic left-first policy: left foci in context order,
    // then the goal, then copies — the order that exhibits the quantifier
    // backtracking the skolemised engine avoids.
    assert(goal->kind == FKind::AtomNeg || goal->kind == FKind::Up);
    for (std::size_t i = 0; i < din.size(); ++i) {
      if (din[i].f->kind != FKind::Down) continue;
      Items din2 = erase_at(din, i);
      bool ok = prove_lfocus(
          gamma, din2, din[i].f->left, goal, store, depth + 1,
          [&](LProofPtr t, const Items& leftover, const LStore& s2) {
            return k(node("focusL", gamma, din, leftover, nullptr, goal,
                          nullptr, {std::move(t)}),
                     leftover, s2);
          });
      if (ok) return true;
      stats_->focus_backtracks++;
    }
    if (goal->kind == FKind::Up) {
      bool ok = prove_rfocus(
          gamma, din, goal->left, store, depth + 1,
          [&](LProofPtr t, const Items& leftover, const LStore& s2) {
            return k(node("focusR", gamma, din, leftover, nullptr, goal,
                          nullptr, {std::move(t)}),
                     leftover, s2);
          });
      if (ok) return true;
      stats_->focus_backtracks++;
    }
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      if (gamma[j].copies_used >= budget_.copy_bound) continue;
      std::vector<GItem> gamma2 = gamma;
      gamma2[j].copies_used++;
      stats_->copies++;
      bool ok = prove_lfocus(
          gamma2, din, gamma[j].f, goal, store, depth + 1,
          [&](LProofPtr t, const Items& leftover, const LStore& s2) {
            auto n = node("copy", gamma, din, leftover, nullptr, goal, nullptr,
                          {std::move(t)});
            n->gamma_index = static_cast<int>(j);
            return k(std::move(n), leftover, s2);
          });
      if (ok) return true;
      stats_->focus_backtracks++;
    }
    return false;
  }

  bool prove_lfocus(const std::vector<GItem>& gamma, const Items& din,
                    const FormulaPtr& focus, const FormulaPtr& goal,
                    const LStore& store, int depth, const Cont& k) {
    if (!spend(depth)) return false;
    switch (focus->kind) {
      case FKind::AtomNeg: {
        if (goal->kind != FKind::AtomNeg) return false;
        if (focus->pred != goal->pred ||
            focus->args.size() != goal->args.size()) {
          return false;
        }
        stats_->unifications++;
        LStore s2 = store;
        for (std::size_t i = 0; i < focus->args.size(); ++i) {
          if (!unify(s2, focus->args[i], goal->args[i])) {
            // Right predicate, wrong instance: this is a term-level failure
            // the search will have to undo choices over.
            stats_->term_backtracks++;
            stats_->unify_failures++;
            return false;
          }
        }
        return k(node("ax-", gamma, din, din, focus, goal, nullptr, {}), din,
                 s2);
      }
      case FKind::Forall: {
        LStore s1 = store;
        Var x = uids_.fresh_existential(focus->binder.name);
        s1.meta_level[x.uid] = s1.clock;
        TermPtr xt = mk_var(x);
        FormulaPtr body = subst_formula(focus->left, focus->binder, xt);
        return prove_lfocus(
            gamma, din, body, goal, s1, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              auto n = node("forallL", gamma, din, leftover, focus, goal,
                            nullptr, {std::move(t)});
              n->witness = xt;
              return k(std::move(n), leftover, s2);
            });
      }
      case FKind::Lolli: {
        return prove_rfocus(
            gamma, din, focus->left, store, depth + 1,
            [&](LProofPtr t1, const Items& left1, const LStore& s1) {
              return prove_lfocus(
                  gamma, left1, focus->right, goal, s1, depth + 1,
                  [&](LProofPtr t2, const Items& left2, const LStore& s2) {
                    return k(node("lolliL", gamma, din, left2, focus, goal,
                                  nullptr, {std::move(t1), std::move(t2)}),
                             left2, s2);
                  });
            });
      }
      case FKind::Up: {
        DItem item{next_id(), focus->left};
        Items din2 = din;
        din2.push_back(item);
        return prove_seq(
            gamma, din2, goal, store, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              if (contains_id(leftover, item.id)) return false;
              return k(node("blurL", gamma, din, leftover, focus, goal,
                            nullptr, {std::move(t)}),
                       leftover, s2);
            });
      }
      default:
        throw std::logic_error("prove_lfocus: positive formula in left focus");
    }
  }

  bool prove_rfocus(const std::vector<GItem>& gamma, const Items& din,
                    const FormulaPtr& focus, const LStore& store, int depth,
                    const Cont& k) {
    if (!spend(depth)) return false;
    switch (focus->kind) {
      case FKind::AtomPos: {
        for (std::size_t i = 0; i < din.size(); ++i) {
          if (din[i].f->kind != FKind::AtomPos) continue;
          if (din[i].f->pred != focus->pred ||
              din[i].f->args.size() != focus->args.size()) {
            continue;
          }
          stats_->unifications++;
          LStore s2 = store;
          bool ok = true;
          for (std::size_t a = 0; a < focus->args.size(); ++a) {
            if (!unify(s2, din[i].f->args[a], focus->args[a])) {
              ok = false;
              break;
            }
          }
          if (!ok) {
            stats_->term_backtracks++;
            stats_->unify_failures++;
            continue;
          }
          Items leftover = erase_at(din, i);
          Items consumed{din[i]};
          if (k(node("ax+", gamma, consumed, Items{}, nullptr, nullptr, focus,
                     {}),
                leftover, s2)) {
            return true;
          }
          stats_->focus_backtracks++;
        }
        return false;
      }
      case FKind::Exists: {
        LStore s1 = store;
        Var x = uids_.fresh_existential(focus->binder.name);
        s1.meta_level[x.uid] = s1.clock;
        TermPtr xt = mk_var(x);
        FormulaPtr body = subst_formula(focus->left, focus->binder, xt);
        return prove_rfocus(
            gamma, din, body, s1, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              auto n = node("existsR", gamma, din, leftover, nullptr, nullptr,
                            focus, {std::move(t)});
              n->witness = xt;
              return k(std::move(n), leftover, s2);
            });
      }
      case FKind::Tensor: {
        return prove_rfocus(
            gamma, din, focus->left, store, depth + 1,
            [&](LProofPtr t1, const Items& left1, const LStore& s1) {
              return prove_rfocus(
                  gamma, left1, focus->right, s1, depth + 1,
                  [&](LProofPtr t2, const Items& left2, const LStore& s2) {
                    return k(node("tensorR", gamma, din, left2, nullptr,
                                  nullptr, focus, {std::move(t1), std::move(t2)}),
                             left2, s2);
                  });
            });
      }
      case FKind::Down: {
        return prove_seq(
            gamma, din, focus->left, store, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              return k(node("blurR", gamma, din, leftover, nullptr, nullptr,
                            focus, {std::move(t)}),
                       leftover, s2);
            });
      }
      case FKind::Bang: {
        return prove_seq(
            gamma, Items{}, focus->left, store, depth + 1,
            [&](LProofPtr t, const Items& leftover, const LStore& s2) {
              if (!leftover.empty()) return false;
              return k(node("bangR", gamma, Items{}, Items{}, nullptr, nullptr,
                            focus, {std::move(t)}),
                       din, s2);
            });
      }
      default:
        throw std::logic_error(
            "prove_rfocus: negative formula in right focus");
    }
  }

 private:
  bool spend(int depth) {
    stats_->node_expansions++;
    if (depth > budget_.max_depth ||
        stats_->node_expansions > budget_.max_expansions) {
      budget_hit = true;
      return false;
    }
    return true;
  }

  int next_id() { return item_id_++; }

  static bool contains_id(const Items& items, int id) {
    return std::any_of(items.begin(), items.end(),
                       [&](const DItem& d) { return d.id == id; });
  }

  static Items erase_at(const Items& items, std::size_t i) {
    Items out = items;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
  }

  std::shared_ptr<LProofNode> node(std::string rule,
                                   const std::vector<GItem>& gamma,
                                   const Items& din, const Items& leftover,
                                   FormulaPtr focus_left, FormulaPtr goal,
                                   FormulaPtr focus_right,
                                   std::vector<LProofPtr> premises) {
    auto n = std::make_shared<LProofNode>();
    n->rule = std::move(rule);
    std::unordered_set<int> left_ids;
    for (const DItem& d : leftover) left_ids.insert(d.id);
    for (const GItem& g : gamma) n->conclusion.gamma.push_back(g.f);
    for (const DItem& d : din) {
      if (!left_ids.count(d.id)) n->conclusion.delta.push_back(d.f);
    }
    n->conclusion.focus_left = std::move(focus_left);
    n->conclusion.goal = std::move(goal);
    n->conclusion.focus_right = std::move(focus_right);
    n->premises = std::move(premises);
    return n;
  }

  Budget budget_;
  UidSource& uids_;
  std::shared_ptr<SearchStats> stats_;
  int item_id_ = 0;
};

// ---------------------------------------------------------------------------
// Grounding: resolve metavariables through the final bindings; leftovers
// default to the signature constant t0.  Binder-bound occurrences share
// VarKind::Existential with metavariables, so grounding must skip uids that
// are bound by an enclosing quantifier.

TermPtr ground_term(const LStore& st, const TermPtr& t,
                    const std::unordered_set<int>& bound) {
  switch (t->kind) {
    case Term::Kind::Variable: {
      if (t->var.kind != VarKind::Existential || bound.count(t->var.uid)) {
        return t;
      }
      auto img = st.bind.lookup(t->var.uid);
      if (!img) return mk_const("t0");
      return ground_term(st, *img, bound);
    }
    case Term::Kind::Application: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(ground_term(st, a, bound));
      return mk_app(t->sym, std::move(args));
    }
    default:
      return t;  // eigen applications / tuples absent here
  }
}

FormulaPtr ground_formula(const LStore& st, const FormulaPtr& f,
                          std::unordered_set<int>& bound) {
  if (!f) return f;
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const auto& a : f->args) args.push_back(ground_term(st, a, bound));
      return f->kind == FKind::AtomNeg ? mk_atom_neg(f->pred, std::move(args))
                                       : mk_atom_pos(f->pred, std::move(args));
    }
    case FKind::Lolli:
      return mk_lolli(ground_formula(st, f->left, bound),
                      ground_formula(st, f->right, bound));
    case FKind::Tensor:
      return mk_tensor(ground_formula(st, f->left, bound),
                       ground_formula(st, f->right, bound));
    case FKind::Bang:
      return mk_bang(ground_formula(st, f->left, bound));
    case FKind::Up:
      return mk_up(ground_formula(st, f->left, bound));
    case FKind::Down:
      return mk_down(ground_formula(st, f->left, bound));
    case FKind::Forall:
    case FKind::Exists: {
      const bool fresh = bound.insert(f->binder.uid).second;
      FormulaPtr body = ground_formula(st, f->left, bound);
      if (fresh) bound.erase(f->binder.uid);
      return f->kind == FKind::Forall ? mk_forall(f->binder, std::move(body))
                                      : mk_exists(f->binder, std::move(body));
    }
  }
  return f;
}

FormulaPtr ground_formula(const LStore& st, const FormulaPtr& f) {
  std::unordered_set<int> bound;
  return ground_formula(st, f, bound);
}

LProofPtr ground_tree(const LStore& st, const LProofPtr& p) {
  auto n = std::make_shared<LProofNode>(*p);
  for (auto& g : n->conclusion.gamma) g = ground_formula(st, g);
  for (auto& d : n->conclusion.delta) d = ground_formula(st, d);
  n->conclusion.focus_left = ground_formula(st, n->conclusion.focus_left);
  n->conclusion.goal = ground_formula(st, n->conclusion.goal);
  n->conclusion.focus_right = ground_formula(st, n->conclusion.focus_right);
  if (n->witness) {
    std::unordered_set<int> bound;
    n->witness = ground_term(st, n->witness, bound);
  }
  for (auto& pr : n->premises) pr = ground_tree(st, pr);
  return n;
}

}  // namespace

LProveResult prove_ljf(const Sequent& s, const Budget& budget,
                       UidSource& uids) {
  LProveResult result;
  auto stats = std::make_shared<SearchStats>();
  LSearcher searcher(budget, uids, stats);
  std::vector<GItem> gamma;
  for (const FormulaPtr& g : s.gamma) gamma.push_back(GItem{g, 0});
  Items din;
  int id = 1 << 24;
  for (const FormulaPtr& d : s.delta) din.push_back(DItem{id++, d});
  LStore store;
  store.stats = stats;

  bool proved = searcher.prove_seq(
      gamma, din, s.goal, store, 0,
      [&](LProofPtr tree, const Items& leftover, const LStore& st) {
        if (!leftover.empty()) return false;
        result.tree = ground_tree(st, tree);
        return true;
      });
  result.stats = *stats;
  result.verdict = proved ? Verdict::Proved
                          : (searcher.budget_hit ? Verdict::BudgetExhausted
                                                 : Verdict::Unprovable);
  return result;
}

// ---------------------------------------------------------------------------
// Checking.

namespace {

struct LChecker {
  CheckResult fail(const std::string& why, const std::string& path) {
    CheckResult r;
    r.ok = false;
    r.error = why;
    r.path = path;
    return r;
  }

  static bool flist_equal(const std::vector<FormulaPtr>& a,
                          const std::vector<FormulaPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!alpha_equal(a[i], b[i])) return false;
    }
    return true;
  }

  static bool multiset_equal(std::vector<FormulaPtr> a,
                             std::vector<FormulaPtr> b) {
    if (a.size() != b.size()) return false;
    for (const auto& fa : a) {
      bool found = false;
      for (auto it = b.begin(); it != b.end(); ++it) {
        if (alpha_equal(fa, *it)) {
          b.erase(it);
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  static std::vector<FormulaPtr> minus_one(const std::vector<FormulaPtr>& a,
                                           const FormulaPtr& f, bool* ok) {
    std::vector<FormulaPtr> out = a;
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (alpha_equal(*it, f)) {
        out.erase(it);
        *ok = true;
        return out;
      }
    }
    *ok = false;
    return out;
  }

  static std::vector<FormulaPtr> plus(std::vector<FormulaPtr> a,
                                      std::initializer_list<FormulaPtr> fs) {
    for (const auto& f : fs) a.push_back(f);
    return a;
  }

  static bool stable(const Sequent& c) {
    if (!c.goal || c.focus_left || c.focus_right) return false;
    if (c.goal->kind != FKind::AtomNeg && c.goal->kind != FKind::Up)
      return false;
    for (const auto& d : c.delta) {
      if (!is_stable_item(d)) return false;
    }
    return true;
  }

  static VarContext sequent_free_vars(const Sequent& c) {
    VarContext out;
    auto add = [&](const FormulaPtr& f) {
      if (!f) return;
      for (const Var& v : formula_free_vars(f)) {
        if (!out.contains(v.uid)) out = out.appended(v);
      }
    };
    for (const auto& g : c.gamma) add(g);
    for (const auto& d : c.delta) add(d);
    add(c.focus_left);
    add(c.goal);
    add(c.focus_right);
    return out;
  }

  static bool term_ground(const TermPtr& t) {
    if (t->kind == Term::Kind::Variable) {
      return t->var.kind != VarKind::Existential;
    }
    for (const auto& a : t->args) {
      if (!term_ground(a)) return false;
    }
    return true;
  }

  CheckResult walk(const LProofNode& n, const std::string& path) {
    const Sequent& c = n.conclusion;
    auto sub = [&](std::size_t i) -> const LProofNode& {
      return *n.premises[i];
    };
    auto need = [&](std::size_t want) -> std::optional<CheckResult> {
      if (n.premises.size() != want) {
        return fail(n.rule + ": expected " + std::to_string(want) +
                        " premises, got " + std::to_string(n.premises.size()),
                    path);
      }
      return std::nullopt;
    };
    auto gamma_same = [&](std::size_t i) {
      return flist_equal(sub(i).conclusion.gamma, c.gamma);
    };

    if (n.rule == "ax-") {
      if (auto r = need(0)) return *r;
      if (!c.focus_left || c.focus_left->kind != FKind::AtomNeg || !c.goal ||
          c.goal->kind != FKind::AtomNeg) {
        return fail("ax-: shape", path);
      }
      if (!c.delta.empty()) return fail("ax-: nonempty linear context", path);
      if (!alpha_equal(c.focus_left, c.goal)) {
        return fail("ax-: focused atom differs from goal", path);
      }
      return {};
    }
    if (n.rule == "ax+") {
      if (auto r = need(0)) return *r;
      if (!c.focus_right || c.focus_right->kind != FKind::AtomPos) {
        return fail("ax+: shape", path);
      }
      if (c.delta.size() != 1 || !alpha_equal(c.delta[0], c.focus_right)) {
        return fail("ax+: context must be exactly the focused atom", path);
      }
      return {};
    }
    if (n.rule == "forallL" || n.rule == "existsR") {
      if (auto r = need(1)) return *r;
      const FormulaPtr& q =
          n.rule == "forallL" ? c.focus_left : c.focus_right;
      if (!q || q->kind != (n.rule == "forallL" ? FKind::Forall : FKind::Exists)) {
        return fail(n.rule + ": focus is not the right quantifier", path);
      }
      if (!n.witness) return fail(n.rule + ": missing witness", path);
      if (!term_ground(n.witness)) {
        return fail(n.rule + ": witness is not ground", path);
      }
      FormulaPtr want = subst_formula(q->left, q->binder, n.witness);
      const FormulaPtr& got = n.rule == "forallL"
                                  ? sub(0).conclusion.focus_left
                                  : sub(0).conclusion.focus_right;
      if (!got || !alpha_equal(got, want)) {
        return fail(n.rule + ": premise focus is not the instantiated body",
                    path);
      }
      if (!multiset_equal(sub(0).conclusion.delta, c.delta) || !gamma_same(0)) {
        return fail(n.rule + ": context changed", path);
      }
      if (n.rule == "forallL") {
        if (!sub(0).conclusion.goal ||
            !alpha_equal(sub(0).conclusion.goal, c.goal)) {
          return fail("forallL: goal changed", path);
        }
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "forallR" || n.rule == "existsL") {
      if (auto r = need(1)) return *r;
      if (n.eigen.kind != VarKind::Eigen) {
        return fail(n.rule + ": missing eigenvariable", path);
      }
      if (sequent_free_vars(c).contains(n.eigen.uid)) {
        return fail(n.rule + ": eigenvariable not fresh for the conclusion",
                    path);
      }
      const auto& p = sub(0).conclusion;
      if (n.rule == "forallR") {
        if (!c.goal || c.goal->kind != FKind::Forall) {
          return fail("forallR: goal is not universal", path);
        }
        FormulaPtr want =
            subst_formula(c.goal->left, c.goal->binder, mk_var(n.eigen));
        if (!p.goal || !alpha_equal(p.goal, want) ||
            !multiset_equal(p.delta, c.delta) || !gamma_same(0)) {
          return fail("forallR: premise shape wrong", path);
        }
      } else {
        bool found = false;
        for (const auto& d : c.delta) {
          if (d->kind != FKind::Exists) continue;
          FormulaPtr want = subst_formula(d->left, d->binder, mk_var(n.eigen));
          bool ok = false;
          auto rest = minus_one(c.delta, d, &ok);
          if (ok && multiset_equal(p.delta, plus(rest, {want}))) {
            found = true;
            break;
          }
        }
        if (!found || !p.goal || !alpha_equal(p.goal, c.goal) ||
            !gamma_same(0)) {
          return fail("existsL: premise shape wrong", path);
        }
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "lolliR") {
      if (auto r = need(1)) return *r;
      if (!c.goal || c.goal->kind != FKind::Lolli) {
        return fail("lolliR: goal is not a lolli", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !alpha_equal(p.goal, c.goal->right) ||
          !multiset_equal(p.delta, plus(c.delta, {c.goal->left})) ||
          !gamma_same(0)) {
        return fail("lolliR: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "tensorL") {
      if (auto r = need(1)) return *r;
      const auto& p = sub(0).conclusion;
      bool found = false;
      for (const auto& d : c.delta) {
        if (d->kind != FKind::Tensor) continue;
        bool ok = false;
        auto rest = minus_one(c.delta, d, &ok);
        if (ok && multiset_equal(p.delta, plus(rest, {d->left, d->right}))) {
          found = true;
          break;
        }
      }
      if (!found || !p.goal || !alpha_equal(p.goal, c.goal) || !gamma_same(0)) {
        return fail("tensorL: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "bangL") {
      if (auto r = need(1)) return *r;
      const auto& p = sub(0).conclusion;
      bool found = false;
      for (const auto& d : c.delta) {
        if (d->kind != FKind::Bang) continue;
        bool ok = false;
        auto rest = minus_one(c.delta, d, &ok);
        if (!ok || !multiset_equal(p.delta, rest)) continue;
        if (p.gamma.size() == c.gamma.size() + 1 &&
            alpha_equal(p.gamma.back(), d->left)) {
          bool prefix = true;
          for (std::size_t i = 0; i < c.gamma.size(); ++i) {
            if (!alpha_equal(p.gamma[i], c.gamma[i])) prefix = false;
          }
          if (prefix) {
            found = true;
            break;
          }
        }
      }
      if (!found || !p.goal || !alpha_equal(p.goal, c.goal)) {
        return fail("bangL: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "focusL") {
      if (auto r = need(1)) return *r;
      if (!stable(c)) return fail("focusL: conclusion not stable", path);
      const auto& p = sub(0).conclusion;
      if (!p.focus_left || !p.goal || !alpha_equal(p.goal, c.goal) ||
          !gamma_same(0)) {
        return fail("focusL: premise shape wrong", path);
      }
      bool found = false;
      for (const auto& d : c.delta) {
        if (d->kind != FKind::Down) continue;
        if (!alpha_equal(d->left, p.focus_left)) continue;
        bool ok = false;
        auto rest = minus_one(c.delta, d, &ok);
        if (ok && multiset_equal(p.delta, rest)) {
          found = true;
          break;
        }
      }
      if (!found) return fail("focusL: focused formula not in context", path);
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "focusR") {
      if (auto r = need(1)) return *r;
      if (!stable(c) || c.goal->kind != FKind::Up) {
        return fail("focusR: conclusion not stable with up-shifted goal", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.focus_right || !alpha_equal(p.focus_right, c.goal->left) ||
          !multiset_equal(p.delta, c.delta) || !gamma_same(0)) {
        return fail("focusR: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "blurL") {
      if (auto r = need(1)) return *r;
      if (!c.focus_left || c.focus_left->kind != FKind::Up) {
        return fail("blurL: focus is not an up-shift", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !alpha_equal(p.goal, c.goal) ||
          !multiset_equal(p.delta, plus(c.delta, {c.focus_left->left})) ||
          !gamma_same(0)) {
        return fail("blurL: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "blurR") {
      if (auto r = need(1)) return *r;
      if (!c.focus_right || c.focus_right->kind != FKind::Down) {
        return fail("blurR: focus is not a down-shift", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !alpha_equal(p.goal, c.focus_right->left) ||
          !multiset_equal(p.delta, c.delta) || !gamma_same(0)) {
        return fail("blurR: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "lolliL" || n.rule == "tensorR") {
      if (auto r = need(2)) return *r;
      const auto& p1 = sub(0).conclusion;
      const auto& p2 = sub(1).conclusion;
      if (n.rule == "lolliL") {
        if (!c.focus_left || c.focus_left->kind != FKind::Lolli) {
          return fail("lolliL: focus is not a lolli", path);
        }
        if (!p1.focus_right || !alpha_equal(p1.focus_right, c.focus_left->left)) {
          return fail("lolliL: first premise focus mismatch", path);
        }
        if (!p2.focus_left || !alpha_equal(p2.focus_left, c.focus_left->right) ||
            !p2.goal || !alpha_equal(p2.goal, c.goal)) {
          return fail("lolliL: second premise shape wrong", path);
        }
      } else {
        if (!c.focus_right || c.focus_right->kind != FKind::Tensor) {
          return fail("tensorR: focus is not a tensor", path);
        }
        if (!p1.focus_right ||
            !alpha_equal(p1.focus_right, c.focus_right->left) ||
            !p2.focus_right ||
            !alpha_equal(p2.focus_right, c.focus_right->right)) {
          return fail("tensorR: premise foci mismatch", path);
        }
      }
      std::vector<FormulaPtr> both = p1.delta;
      both.insert(both.end(), p2.delta.begin(), p2.delta.end());
      if (!multiset_equal(both, c.delta)) {
        return fail(n.rule + ": linear context not split exactly", path);
      }
      if (!gamma_same(0) || !gamma_same(1)) {
        return fail(n.rule + ": unrestricted zone changed", path);
      }
      auto r1 = walk(sub(0), path + ".0");
      if (!r1.ok) return r1;
      return walk(sub(1), path + ".1");
    }
    if (n.rule == "bangR") {
      if (auto r = need(1)) return *r;
      if (!c.focus_right || c.focus_right->kind != FKind::Bang) {
        return fail("bangR: focus is not a bang", path);
      }
      if (!c.delta.empty()) {
        return fail("bangR: linear context must be empty", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !alpha_equal(p.goal, c.focus_right->left) ||
          !p.delta.empty() || !gamma_same(0)) {
        return fail("bangR: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "copy") {
      if (auto r = need(1)) return *r;
      if (!stable(c)) return fail("copy: conclusion not stable", path);
      if (n.gamma_index < 0 ||
          static_cast<std::size_t>(n.gamma_index) >= c.gamma.size()) {
        return fail("copy: bad index", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.focus_left ||
          !alpha_equal(p.focus_left,
                       c.gamma[static_cast<std::size_t>(n.gamma_index)]) ||
          !p.goal || !alpha_equal(p.goal, c.goal) ||
          !multiset_equal(p.delta, c.delta) || !gamma_same(0)) {
        return fail("copy: premise shape wrong", path);
      }
      return walk(sub(0), path + ".0");
    }
    return fail("unknown rule label '" + n.rule + "'", path);
  }
};

}  // namespace

CheckResult check_ljf(const LProofPtr& p, const Sequent& root) {
  LChecker ck;
  if (!p) return ck.fail("empty proof", "");
  const Sequent& c = p->conclusion;
  if (!LChecker::flist_equal(c.gamma, root.gamma)) {
    return ck.fail("root unrestricted zone differs from the input", "");
  }
  if (!LChecker::multiset_equal(c.delta, root.delta)) {
    return ck.fail("root linear context differs from the input", "");
  }
  if (!root.goal || !c.goal || !alpha_equal(c.goal, root.goal)) {
    return ck.fail("root goal differs from the input", "");
  }
  return ck.walk(*p, "0");
}

}  // namespace linskol
