#include "linskol/sljf_engine.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace linskol {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Unprovable: return "unprovable";
    case Verdict::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

namespace {

// Follows existential binding chains to their endpoint. Eigen and special
// variables are never followed (rigid tokens here; eigen skolem entries are
// dependency records, not rewrite rules during unification).
TermPtr resolve(const Substitution& s, TermPtr t) {
  for (int guard = 0; guard < 1 << 20; ++guard) {
    if (t->kind != Term::Kind::Variable ||
        t->var.kind != VarKind::Existential) {
      return t;
    }
    auto img = s.lookup(t->var.uid);
    if (!img) return t;
    t = *img;
  }
  throw CycleError("resolve: unbounded binding chain");
}

// First-order unification binding only existential variables. Bindings are
// to the *raw* other side (no dereferencing into the image), which keeps the
// store's entries in the shape the source formulas mention; definitional
// chains are resolved lazily. No occurs check: a self-dependent binding is a
// dependency cycle and is rejected by the admissibility gate instead.
bool unify_term(Substitution& s, const TermPtr& t1, const TermPtr& t2) {
  TermPtr a = resolve(s, t1);
  TermPtr b = resolve(s, t2);
  bool a_var = a->kind == Term::Kind::Variable;
  bool b_var = b->kind == Term::Kind::Variable;
  if (a_var && b_var && a->var.uid == b->var.uid) return true;
  if (b_var && b->var.kind == VarKind::Existential) {
    s = s.extended(b->var, t1);
    return true;
  }
  if (a_var && a->var.kind == VarKind::Existential) {
    s = s.extended(a->var, t2);
    return true;
  }
  if (a_var != b_var) {
    // Rigid variable against a compound term: only a bare eigenvariable
    // meeting its own skolem application is equal (both normalise alike).
    const TermPtr& v = a_var ? a : b;
    const TermPtr& o = a_var ? b : a;
    return v->var.kind == VarKind::Eigen &&
           o->kind == Term::Kind::EigenApp && o->var.uid == v->var.uid;
  }
  if (a_var) return false;  // two distinct rigid variables
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Application: {
      if (a->sym != b->sym || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!unify_term(s, a->args[i], b->args[i])) return false;
      }
      return true;
    }
    case Term::Kind::EigenApp:
      // Same head means same skolem entry; the recorded argument lists
      // coincide by construction.
      return a->var.uid == b->var.uid;
    case Term::Kind::Tuple:
      return false;  // tuples never occur in atom arguments
    default:
      return false;
  }
}

void push_adm_trace(std::vector<TraceEvent>* trace,
                    const AdmissibilityVerdict& verdict,
                    const std::string& detail) {
  if (!trace) return;
  TraceEvent e;
  e.kind = "axiom_candidate";
  e.outcome = "adm_reject";
  e.condition = verdict.condition;
  e.detail = detail;
  const auto& vars = verdict.condition == 1 ? verdict.cycle : verdict.witnesses;
  for (const Var& v : vars) {
    e.witnesses.push_back(v.name + "#" + std::to_string(v.uid));
    e.witness_uids.push_back(v.uid);
  }
  trace->push_back(std::move(e));
}

}  // namespace

std::optional<ConstraintStore> unify_atoms(const SFormulaPtr& a1,
                                           const SFormulaPtr& a2,
                                           const ConstraintStore& store,
                                           std::vector<TraceEvent>* trace) {
  assert((a1->kind == SKind::AtomNeg || a1->kind == SKind::AtomPos) &&
         a1->kind == a2->kind);
  auto& st = *store.stats;
  st.unifications++;
  auto fail_unify = [&](const std::string& why) -> std::optional<ConstraintStore> {
    st.unify_failures++;
    if (trace) {
      TraceEvent e;
      e.kind = "axiom_candidate";
      e.outcome = "unify_fail";
      e.detail = to_string(a1) + " vs " + to_string(a2) + ": " + why;
      trace->push_back(std::move(e));
    }
    return std::nullopt;
  };
  if (a1->pred != a2->pred) return fail_unify("predicate mismatch");
  if (a1->args.size() != a2->args.size()) return fail_unify("arity mismatch");
  Substitution sigma = store.sigma;
  for (std::size_t i = 0; i < a1->args.size(); ++i) {
    if (!unify_term(sigma, a1->args[i], a2->args[i])) {
      return fail_unify("argument " + std::to_string(i) + " clash");
    }
  }
  VarContext phi = a1->phi.merged(a2->phi);
  st.admissibility_checks++;
  AdmissibilityVerdict verdict = admissible(sigma, phi);
  if (!verdict.ok) {
    st.admissibility_failures++;
    if (verdict.condition == 1) st.adm_condition1++;
    if (verdict.condition == 2) st.adm_condition2++;
    push_adm_trace(trace, verdict,
                   to_string(a1) + " vs " + to_string(a2) + ": " + verdict.detail);
    return std::nullopt;
  }
  // New bindings can retroactively link an already-closed leaf's context
  // across a split, so every accepted context must stay admissible too.
  if (sigma.size() != store.sigma.size()) {
    for (const VarContext& prior : store.committed) {
      st.admissibility_checks++;
      AdmissibilityVerdict back = admissible(sigma, prior);
      if (!back.ok) {
        st.admissibility_failures++;
        if (back.condition == 1) st.adm_condition1++;
        if (back.condition == 2) st.adm_condition2++;
        push_adm_trace(trace, back,
                       to_string(a1) + " vs " + to_string(a2) +
                           ": earlier axiom context: " + back.detail);
        return std::nullopt;
      }
    }
  }
  if (trace) {
    TraceEvent e;
    e.kind = "axiom_candidate";
    e.outcome = "ok";
    e.detail = to_string(a1) + " vs " + to_string(a2);
    trace->push_back(std::move(e));
  }
  ConstraintStore out = store;
  out.sigma = std::move(sigma);
  out.committed.push_back(std::move(phi));
  return out;
}

namespace {

struct DItem {
  int id;
  SFormulaPtr f;
};

struct GItem {
  Closure cl;
  int copies_used = 0;
};

using Items = std::vector<DItem>;
using Cont =
    std::function<bool(SProofPtr, const Items&, const ConstraintStore&)>;

bool is_stable_item(const SFormulaPtr& f) {
  return f->kind == SKind::AtomPos || f->kind == SKind::Down;
}

class Searcher {
 public:
  Searcher(const Budget& budget, UidSource& uids,
           std::shared_ptr<SearchStats> stats, std::vector<TraceEvent>* trace)
      : budget_(budget), uids_(uids), stats_(std::move(stats)), trace_(trace) {}

  bool budget_hit = false;

  bool prove_seq(const std::vector<GItem>& gamma, const Items& din,
                 const SFormulaPtr& goal, const ConstraintStore& store,
                 int depth, const Cont& k) {
    if (!spend(depth)) return false;
    // Invertible phase: decompose the goal first, then the leftmost
    // decomposable context item; no choice points here.
    if (goal->kind == SKind::Lolli) {
      DItem item{next_id(), goal->left};
      Items din2 = din;
      din2.push_back(item);
      trace_rule("lolliR");
      return prove_seq(
          gamma, din2, goal->right, store, depth + 1,
          [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
            if (contains_id(leftover, item.id)) return false;  // must be used
            auto n = make_node("lolliR", gamma, din, leftover, nullptr, goal,
                               nullptr, store, s2, {std::move(t)});
            return k(std::move(n), leftover, s2);
          });
    }
    for (std::size_t i = 0; i < din.size(); ++i) {
      const DItem& item = din[i];
      if (item.f->kind == SKind::Tensor) {
        DItem l{next_id(), item.f->left}, r{next_id(), item.f->right};
        Items din2 = erase_at(din, i);
        din2.push_back(l);
        din2.push_back(r);
        trace_rule("tensorL");
        return prove_seq(
            gamma, din2, goal, store, depth + 1,
            [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
              if (contains_id(leftover, l.id) || contains_id(leftover, r.id)) {
                return false;
              }
              auto n = make_node("tensorL", gamma, din, leftover, nullptr,
                                 goal, nullptr, store, s2, {std::move(t)});
              return k(std::move(n), leftover, s2);
            });
      }
      if (item.f->kind == SKind::BangClosure) {
        std::vector<GItem> gamma2 = gamma;
        Closure cl;
        cl.a = item.f->a;
        cl.phi = item.f->phi_cl;
        cl.sigma = item.f->sigma_cl;
        cl.body = item.f->left;
        gamma2.push_back(GItem{std::move(cl), 0});
        Items din2 = erase_at(din, i);
        trace_rule("bangL");
        return prove_seq(
            gamma2, din2, goal, store, depth + 1,
            [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
              auto n = make_node("bangL", gamma, din, leftover, nullptr, goal,
                                 nullptr, store, s2, {std::move(t)});
              return k(std::move(n), leftover, s2);
            });
      }
    }
    // Stable: goal is an atom or an up-shift, context all atoms/down-shifts.
    assert(goal->kind == SKind::AtomNeg || goal->kind == SKind::Up);
    // Choice 1: focus right.
    if (goal->kind == SKind::Up) {
      trace_rule("focusR");
      bool ok = prove_rfocus(
          gamma, din, goal->left, store, depth + 1,
          [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
            auto n = make_node("focusR", gamma, din, leftover, nullptr, goal,
                               nullptr, store, s2, {std::move(t)});
            return k(std::move(n), leftover, s2);
          });
      if (ok) return true;
      stats_->focus_backtracks++;
    }
    // Choice 2: focus on a down-shifted context formula, in context order.
    for (std::size_t i = 0; i < din.size(); ++i) {
      if (din[i].f->kind != SKind::Down) continue;
      Items din2 = erase_at(din, i);
      trace_rule("focusL");
      bool ok = prove_lfocus(
          gamma, din2, din[i].f->left, goal, store, depth + 1,
          [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
            // The focused item is consumed by this subtree: conclusion
            // context = premise consumption + the focused item itself.
            Items pseudo = leftover;
            auto n = make_node("focusL", gamma, din, pseudo, nullptr, goal,
                               nullptr, store, s2, {std::move(t)});
            return k(std::move(n), leftover, s2);
          });
      if (ok) return true;
      stats_->focus_backtracks++;
    }
    // Choice 3: copy an unrestricted closure (each offered once per stable
    // node; total uses along a path bounded by the copy budget).
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      if (gamma[j].copies_used >= budget_.copy_bound) continue;
      if (try_copy(gamma, din, goal, store, depth, j, k)) return true;
      stats_->focus_backtracks++;
    }
    return false;
  }

  bool prove_lfocus(const std::vector<GItem>& gamma, const Items& din,
                    const SFormulaPtr& focus, const SFormulaPtr& goal,
                    const ConstraintStore& store, int depth, const Cont& k) {
    if (!spend(depth)) return false;
    switch (focus->kind) {
      case SKind::AtomNeg: {
        if (goal->kind != SKind::AtomNeg) return false;
        auto st2 = unify_atoms(focus, goal, store, trace_);
        if (!st2) return false;
        trace_rule("ax-");
        auto n = make_node("ax-", gamma, din, din, focus, goal, nullptr, store,
                           *st2, {});
        return k(std::move(n), din, *st2);
      }
      case SKind::Lolli: {
        trace_rule("lolliL");
        return prove_rfocus(
            gamma, din, focus->left, store, depth + 1,
            [&](SProofPtr t1, const Items& left1, const ConstraintStore& s1) {
              return prove_lfocus(
                  gamma, left1, focus->right, goal, s1, depth + 1,
                  [&](SProofPtr t2, const Items& left2,
                      const ConstraintStore& s2) {
                    auto n = make_node("lolliL", gamma, din, left2, focus,
                                       goal, nullptr, store, s2,
                                       {std::move(t1), std::move(t2)});
                    return k(std::move(n), left2, s2);
                  });
            });
      }
      case SKind::Up: {
        DItem item{next_id(), focus->left};
        Items din2 = din;
        din2.push_back(item);
        trace_rule("blurL");
        return prove_seq(
            gamma, din2, goal, store, depth + 1,
            [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
              if (contains_id(leftover, item.id)) return false;
              auto n = make_node("blurL", gamma, din, leftover, focus, goal,
                                 nullptr, store, s2, {std::move(t)});
              return k(std::move(n), leftover, s2);
            });
      }
      default:
        throw std::logic_error("prove_lfocus: positive formula in left focus");
    }
  }

  bool prove_rfocus(const std::vector<GItem>& gamma, const Items& din,
                    const SFormulaPtr& focus, const ConstraintStore& store,
                    int depth, const Cont& k) {
    if (!spend(depth)) return false;
    switch (focus->kind) {
      case SKind::AtomPos: {
        // Consume exactly one matching context atom; each candidate is a
        // choice point.
        for (std::size_t i = 0; i < din.size(); ++i) {
          if (din[i].f->kind != SKind::AtomPos) continue;
          auto st2 = unify_atoms(din[i].f, focus, store, trace_);
          if (!st2) continue;
          trace_rule("ax+");
          Items leftover = erase_at(din, i);
          Items consumed_in{din[i]};
          auto n = make_node("ax+", gamma, consumed_in, Items{}, nullptr,
                             nullptr, focus, store, *st2, {});
          if (k(std::move(n), leftover, *st2)) return true;
          stats_->focus_backtracks++;
        }
        return false;
      }
      case SKind::Tensor: {
        trace_rule("tensorR");
        return prove_rfocus(
            gamma, din, focus->left, store, depth + 1,
            [&](SProofPtr t1, const Items& left1, const ConstraintStore& s1) {
              return prove_rfocus(
                  gamma, left1, focus->right, s1, depth + 1,
                  [&](SProofPtr t2, const Items& left2,
                      const ConstraintStore& s2) {
                    auto n = make_node("tensorR", gamma, din, left2, nullptr,
                                       nullptr, focus, store, s2,
                                       {std::move(t1), std::move(t2)});
                    return k(std::move(n), left2, s2);
                  });
            });
      }
      case SKind::Down: {
        trace_rule("blurR");
        return prove_seq(
            gamma, din, focus->left, store, depth + 1,
            [&](SProofPtr t, const Items& leftover, const ConstraintStore& s2) {
              auto n = make_node("blurR", gamma, din, leftover, nullptr,
                                 nullptr, focus, store, s2, {std::move(t)});
              return k(std::move(n), leftover, s2);
            });
      }
      case SKind::BangClosure: {
        // The modal premise owns no linear resources: everything pending
        // here passes through as leftover for other branches.
        ConstraintStore s2 = store;
        try {
          s2.sigma = s2.sigma.merged(*focus->sigma_cl);
          std::vector<TermPtr> gamma_phis;
          std::unordered_set<int> seen;
          for (const GItem& g : gamma) {
            for (const Var& v : g.cl.phi) {
              if (seen.insert(v.uid).second) gamma_phis.push_back(mk_var(v));
            }
          }
          s2.sigma = s2.sigma.extended_merge_special(focus->a, gamma_phis);
          std::vector<TermPtr> target_ctx;
          target_ctx.push_back(mk_var(focus->a));
          for (const Var& v : focus->phi_cl) target_ctx.push_back(mk_var(v));
          for (const GItem& g : gamma) {
            s2.sigma = s2.sigma.extended_merge_special(g.cl.a, target_ctx);
          }
        } catch (const std::logic_error&) {
          return false;  // irreconcilable closure entries
        }
        if (!store_extension_ok(s2, store, "bangR")) return false;
        trace_rule("bangR");
        return prove_seq(
            gamma, Items{}, focus->left, s2, depth + 1,
            [&](SProofPtr t, const Items& leftover, const ConstraintStore& s3) {
              if (!leftover.empty()) return false;
              auto n = make_node("bangR", gamma, Items{}, Items{}, nullptr,
                                 nullptr, focus, store, s3, {std::move(t)});
              return k(std::move(n), din, s3);
            });
      }
      default:
        throw std::logic_error("prove_rfocus: negative formula in right focus");
    }
  }

 private:
  bool try_copy(const std::vector<GItem>& gamma, const Items& din,
                const SFormulaPtr& goal, const ConstraintStore& store,
                int depth, std::size_t j, const Cont& k) {
    const Closure& cl = gamma[j].cl;
    // v = FV(body) \ Phi, renamed fresh per instance (this includes the
    // closure's own special and any eigen/existential bound inside).
    std::vector<Var> to_rename;
    for (const Var& v : sformula_free_vars(cl.body)) {
      if (!cl.phi.contains(v.uid)) to_rename.push_back(v);
    }
    std::unordered_map<int, Var> ren;
    std::vector<std::pair<Var, Var>> ren_list;
    for (const Var& v : to_rename) {
      if (ren.count(v.uid)) continue;
      switch (v.kind) {
        case VarKind::Existential:
          ren.emplace(v.uid, uids_.fresh_existential(v.name));
          break;
        case VarKind::Eigen:
          ren.emplace(v.uid, uids_.fresh_eigen(v.name));
          break;
        case VarKind::Special: {
          bool partner_here =
              v.pair_id >= 0 &&
              std::any_of(to_rename.begin(), to_rename.end(), [&](const Var& w) {
                return w.uid == v.partner_uid;
              });
          if (partner_here) {
            std::string base = v.name;
            if (!base.empty() && (base.back() == 'L' || base.back() == 'R')) {
              base.pop_back();
            }
            auto [l, r] = uids_.fresh_special_pair(base);
            bool v_is_left = v.uid < v.partner_uid;
            ren.emplace(v.uid, v_is_left ? l : r);
            ren.emplace(v.partner_uid, v_is_left ? r : l);
          } else {
            ren.emplace(v.uid, uids_.fresh_special(v.name));
          }
          break;
        }
      }
    }
    for (const Var& v : to_rename) ren_list.emplace_back(v, ren.at(v.uid));
    SFormulaPtr body2 = rename_sformula(cl.body, ren);
    ConstraintStore s2 = store;
    try {
      s2.sigma = s2.sigma.merged(cl.sigma->renamed(ren));
    } catch (const std::logic_error&) {
      return false;
    }
    if (!store_extension_ok(s2, store, "copy")) return false;
    std::vector<GItem> gamma2 = gamma;
    gamma2[j].copies_used++;
    stats_->copies++;
    trace_rule("copy");
    return prove_lfocus(
        gamma2, din, body2, goal, s2, depth + 1,
        [&](SProofPtr t, const Items& leftover, const ConstraintStore& s3) {
          auto n = make_node("copy", gamma, din, leftover, nullptr, goal,
                             nullptr, store, s3, {std::move(t)});
          n->gamma_index = static_cast<int>(j);
          n->copy_renaming = ren_list;
          return k(std::move(n), leftover, s3);
        });
  }

  bool spend(int depth) {
    stats_->node_expansions++;
    if (depth > budget_.max_depth ||
        stats_->node_expansions > budget_.max_expansions) {
      budget_hit = true;
      return false;
    }
    return true;
  }

  // Store growth outside axioms (closure entries) must keep the store
  // acyclic and every accepted axiom context admissible.
  bool store_extension_ok(const ConstraintStore& grown,
                          const ConstraintStore& before, const char* where) {
    if (grown.sigma.size() == before.sigma.size()) return true;
    static const VarContext no_phi;
    stats_->admissibility_checks++;
    AdmissibilityVerdict v = admissible(grown.sigma, no_phi);
    if (v.ok) {
      for (const VarContext& phi : grown.committed) {
        stats_->admissibility_checks++;
        v = admissible(grown.sigma, phi);
        if (!v.ok) break;
      }
    }
    if (v.ok) return true;
    stats_->admissibility_failures++;
    if (v.condition == 1) stats_->adm_condition1++;
    if (v.condition == 2) stats_->adm_condition2++;
    push_adm_trace(trace_, v, std::string(where) + ": " + v.detail);
    return false;
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

  void trace_rule(const char* rule) {
    if (!trace_) return;
    TraceEvent e;
    e.kind = "rule";
    e.rule = rule;
    trace_->push_back(std::move(e));
  }

  std::shared_ptr<SProofNode> make_node(
      std::string rule, const std::vector<GItem>& gamma, const Items& din,
      const Items& leftover, SFormulaPtr focus_left, SFormulaPtr goal,
      SFormulaPtr focus_right, const ConstraintStore& before,
      const ConstraintStore& after, std::vector<SProofPtr> premises) {
    auto n = std::make_shared<SProofNode>();
    n->rule = std::move(rule);
    std::unordered_set<int> left_ids;
    for (const DItem& d : leftover) left_ids.insert(d.id);
    for (const GItem& g : gamma) n->conclusion.gamma.push_back(g.cl);
    for (const DItem& d : din) {
      if (!left_ids.count(d.id)) n->conclusion.delta.push_back(d.f);
    }
    n->conclusion.focus_left = std::move(focus_left);
    n->conclusion.goal = std::move(goal);
    n->conclusion.focus_right = std::move(focus_right);
    n->conclusion.sigma = make_subst(before.sigma);
    n->premises = std::move(premises);
    n->sigma_before = make_subst(before.sigma);
    n->sigma_after = make_subst(after.sigma);
    return n;
  }

  Budget budget_;
  UidSource& uids_;
  std::shared_ptr<SearchStats> stats_;
  std::vector<TraceEvent>* trace_;
  int item_id_ = 0;
};

}  // namespace

SProveResult prove_sljf(const SSequent& s, const Budget& budget,
                        UidSource& uids, bool want_trace) {
  SProveResult result;
  auto stats = std::make_shared<SearchStats>();
  Searcher searcher(budget, uids, stats,
                    want_trace ? &result.trace : nullptr);
  std::vector<GItem> gamma;
  for (const Closure& cl : s.gamma) gamma.push_back(GItem{cl, 0});
  Items din;
  int id = 1 << 24;  // ids disjoint from the searcher's fresh ones
  for (const SFormulaPtr& d : s.delta) din.push_back(DItem{id++, d});
  ConstraintStore store;
  store.sigma = s.sigma ? *s.sigma : Substitution{};
  store.stats = stats;

  bool proved = searcher.prove_seq(
      gamma, din, s.goal, store, 0,
      [&](SProofPtr tree, const Items& leftover, const ConstraintStore& st) {
        if (!leftover.empty()) return false;  // all resources must be used
        // Every accepted axiom context was re-verified on each store
        // extension, so the final store is admissible for each of them.
        result.tree = std::move(tree);
        result.sigma_final = st.sigma;
        return true;
      });
  result.stats = *stats;
  result.verdict = proved ? Verdict::Proved
                          : (searcher.budget_hit ? Verdict::BudgetExhausted
                                                 : Verdict::Unprovable);
  return result;
}

// ---------------------------------------------------------------------------
// Independent proof checking.

namespace {

struct Checker {
  Substitution sigma_final;
  CheckResult fail(const std::string& why, const std::string& path) {
    CheckResult r;
    r.ok = false;
    r.error = why;
    r.path = path;
    return r;
  }

  static bool closure_equal(const Closure& a, const Closure& b) {
    return a.a.uid == b.a.uid && a.phi.same_set(b.phi) &&
           *a.sigma == *b.sigma && sformula_equal(a.body, b.body);
  }

  static bool gamma_equal(const std::vector<Closure>& a,
                          const std::vector<Closure>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!closure_equal(a[i], b[i])) return false;
    }
    return true;
  }

  // Multiset equality over formulas modulo structural equality.
  static bool multiset_equal(std::vector<SFormulaPtr> a,
                             std::vector<SFormulaPtr> b) {
    if (a.size() != b.size()) return false;
    for (const auto& fa : a) {
      bool found = false;
      for (auto it = b.begin(); it != b.end(); ++it) {
        if (sformula_equal(fa, *it)) {
          b.erase(it);
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  static std::vector<SFormulaPtr> minus_one(const std::vector<SFormulaPtr>& a,
                                            const SFormulaPtr& f, bool* ok) {
    std::vector<SFormulaPtr> out = a;
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (sformula_equal(*it, f)) {
        out.erase(it);
        *ok = true;
        return out;
      }
    }
    *ok = false;
    return out;
  }

  static std::vector<SFormulaPtr> plus(std::vector<SFormulaPtr> a,
                                       std::initializer_list<SFormulaPtr> fs) {
    for (const auto& f : fs) a.push_back(f);
    return a;
  }

  bool stable(const SSequent& c) {
    if (!c.goal || c.focus_left || c.focus_right) return false;
    if (c.goal->kind != SKind::AtomNeg && c.goal->kind != SKind::Up)
      return false;
    for (const auto& d : c.delta) {
      if (!is_stable_item(d)) return false;
    }
    return true;
  }

  bool atoms_equal_under_sigma(const SFormulaPtr& a, const SFormulaPtr& b,
                               std::string* why) {
    if (a->pred != b->pred || a->args.size() != b->args.size()) {
      *why = "axiom atoms differ";
      return false;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      TermPtr ta, tb;
      try {
        ta = apply_fix(sigma_final, a->args[i]);
        tb = apply_fix(sigma_final, b->args[i]);
      } catch (const CycleError&) {
        *why = "final substitution is cyclic on axiom arguments";
        return false;
      }
      if (!term_equal(ta, tb)) {
        *why = "axiom arguments differ under the final substitution: " +
               to_string(ta) + " vs " + to_string(tb);
        return false;
      }
    }
    return true;
  }

  CheckResult walk(const SProofNode& n, const std::string& path) {
    const SSequent& c = n.conclusion;
    auto sub = [&](std::size_t i) -> const SProofNode& {
      return *n.premises[i];
    };
    auto need_premises = [&](std::size_t want) -> std::optional<CheckResult> {
      if (n.premises.size() != want) {
        return fail(n.rule + ": expected " + std::to_string(want) +
                        " premises, got " + std::to_string(n.premises.size()),
                    path);
      }
      return std::nullopt;
    };
    // Monotonicity of the store along the tree.
    if (!n.sigma_after->contains_all(*n.sigma_before)) {
      return fail(n.rule + ": store shrank across the node", path);
    }
    for (std::size_t i = 0; i < n.premises.size(); ++i) {
      if (!gamma_equal(sub(i).conclusion.gamma, c.gamma) &&
          n.rule != "bangL" && n.rule != "copy") {
        return fail(n.rule + ": unrestricted zone changed unexpectedly", path);
      }
    }

    if (n.rule == "ax-") {
      if (auto r = need_premises(0)) return *r;
      if (!c.focus_left || c.focus_left->kind != SKind::AtomNeg || !c.goal ||
          c.goal->kind != SKind::AtomNeg) {
        return fail("ax-: expects left-focused atom against atomic goal", path);
      }
      if (!c.delta.empty()) return fail("ax-: nonempty linear context", path);
      std::string why;
      if (!atoms_equal_under_sigma(c.focus_left, c.goal, &why)) {
        return fail("ax-: " + why, path);
      }
      AdmissibilityVerdict v =
          admissible(sigma_final, c.focus_left->phi.merged(c.goal->phi));
      if (!v.ok) return fail("ax-: final sigma inadmissible: " + v.detail, path);
      return {};
    }
    if (n.rule == "ax+") {
      if (auto r = need_premises(0)) return *r;
      if (!c.focus_right || c.focus_right->kind != SKind::AtomPos) {
        return fail("ax+: expects right-focused positive atom", path);
      }
      if (c.delta.size() != 1 || c.delta[0]->kind != SKind::AtomPos) {
        return fail("ax+: context must be exactly one positive atom", path);
      }
      std::string why;
      if (!atoms_equal_under_sigma(c.delta[0], c.focus_right, &why)) {
        return fail("ax+: " + why, path);
      }
      AdmissibilityVerdict v =
          admissible(sigma_final, c.delta[0]->phi.merged(c.focus_right->phi));
      if (!v.ok) return fail("ax+: final sigma inadmissible: " + v.detail, path);
      return {};
    }
    if (n.rule == "lolliR") {
      if (auto r = need_premises(1)) return *r;
      if (!c.goal || c.goal->kind != SKind::Lolli) {
        return fail("lolliR: goal is not a lolli", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !sformula_equal(p.goal, c.goal->right)) {
        return fail("lolliR: premise goal mismatch", path);
      }
      if (!multiset_equal(p.delta, plus(c.delta, {c.goal->left}))) {
        return fail("lolliR: context mismatch", path);
      }
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(0).sigma_after != *n.sigma_after) {
        return fail("lolliR: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "tensorL" || n.rule == "bangL") {
      if (auto r = need_premises(1)) return *r;
      const auto& p = sub(0).conclusion;
      if (!c.goal || !p.goal || !sformula_equal(p.goal, c.goal)) {
        return fail(n.rule + ": goal changed", path);
      }
      bool found = false;
      if (n.rule == "tensorL") {
        for (const auto& d : c.delta) {
          if (d->kind != SKind::Tensor) continue;
          bool ok = false;
          auto rest = minus_one(c.delta, d, &ok);
          if (ok && multiset_equal(p.delta, plus(rest, {d->left, d->right}))) {
            found = true;
            break;
          }
        }
        if (!gamma_equal(p.gamma, c.gamma)) {
          return fail("tensorL: unrestricted zone changed", path);
        }
      } else {
        for (const auto& d : c.delta) {
          if (d->kind != SKind::BangClosure) continue;
          bool ok = false;
          auto rest = minus_one(c.delta, d, &ok);
          if (!ok || !multiset_equal(p.delta, rest)) continue;
          if (p.gamma.size() != c.gamma.size() + 1) continue;
          bool prefix_ok = true;
          for (std::size_t i = 0; i < c.gamma.size(); ++i) {
            if (!closure_equal(p.gamma[i], c.gamma[i])) prefix_ok = false;
          }
          const Closure& added = p.gamma.back();
          if (prefix_ok && added.a.uid == d->a.uid &&
              added.phi.same_set(d->phi_cl) && *added.sigma == *d->sigma_cl &&
              sformula_equal(added.body, d->left)) {
            found = true;
            break;
          }
        }
      }
      if (!found) return fail(n.rule + ": no matching principal formula", path);
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(0).sigma_after != *n.sigma_after) {
        return fail(n.rule + ": store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "focusL") {
      if (auto r = need_premises(1)) return *r;
      if (!stable(c)) return fail("focusL: conclusion not stable", path);
      const auto& p = sub(0).conclusion;
      if (!p.focus_left || !p.goal || !sformula_equal(p.goal, c.goal)) {
        return fail("focusL: premise shape wrong", path);
      }
      bool found = false;
      for (const auto& d : c.delta) {
        if (d->kind != SKind::Down) continue;
        if (!sformula_equal(d->left, p.focus_left)) continue;
        bool ok = false;
        auto rest = minus_one(c.delta, d, &ok);
        if (ok && multiset_equal(p.delta, rest)) {
          found = true;
          break;
        }
      }
      if (!found) return fail("focusL: focused formula not in context", path);
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(0).sigma_after != *n.sigma_after) {
        return fail("focusL: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "focusR") {
      if (auto r = need_premises(1)) return *r;
      if (!stable(c) || c.goal->kind != SKind::Up) {
        return fail("focusR: conclusion not stable with an up-shifted goal",
                    path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.focus_right || !sformula_equal(p.focus_right, c.goal->left) ||
          !multiset_equal(p.delta, c.delta)) {
        return fail("focusR: premise shape wrong", path);
      }
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(0).sigma_after != *n.sigma_after) {
        return fail("focusR: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "blurL") {
      if (auto r = need_premises(1)) return *r;
      if (!c.focus_left || c.focus_left->kind != SKind::Up) {
        return fail("blurL: focus is not an up-shift", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !sformula_equal(p.goal, c.goal) ||
          !multiset_equal(p.delta, plus(c.delta, {c.focus_left->left}))) {
        return fail("blurL: premise shape wrong", path);
      }
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(0).sigma_after != *n.sigma_after) {
        return fail("blurL: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "blurR") {
      if (auto r = need_premises(1)) return *r;
      if (!c.focus_right || c.focus_right->kind != SKind::Down) {
        return fail("blurR: focus is not a down-shift", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !sformula_equal(p.goal, c.focus_right->left) ||
          !multiset_equal(p.delta, c.delta)) {
        return fail("blurR: premise shape wrong", path);
      }
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(0).sigma_after != *n.sigma_after) {
        return fail("blurR: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "lolliL" || n.rule == "tensorR") {
      if (auto r = need_premises(2)) return *r;
      const auto& p1 = sub(0).conclusion;
      const auto& p2 = sub(1).conclusion;
      if (n.rule == "lolliL") {
        if (!c.focus_left || c.focus_left->kind != SKind::Lolli) {
          return fail("lolliL: focus is not a lolli", path);
        }
        if (!p1.focus_right ||
            !sformula_equal(p1.focus_right, c.focus_left->left)) {
          return fail("lolliL: first premise focus mismatch", path);
        }
        if (!p2.focus_left ||
            !sformula_equal(p2.focus_left, c.focus_left->right) || !p2.goal ||
            !sformula_equal(p2.goal, c.goal)) {
          return fail("lolliL: second premise shape wrong", path);
        }
      } else {
        if (!c.focus_right || c.focus_right->kind != SKind::Tensor) {
          return fail("tensorR: focus is not a tensor", path);
        }
        if (!p1.focus_right ||
            !sformula_equal(p1.focus_right, c.focus_right->left) ||
            !p2.focus_right ||
            !sformula_equal(p2.focus_right, c.focus_right->right)) {
          return fail("tensorR: premise foci mismatch", path);
        }
      }
      std::vector<SFormulaPtr> both = p1.delta;
      both.insert(both.end(), p2.delta.begin(), p2.delta.end());
      if (!multiset_equal(both, c.delta)) {
        return fail(n.rule + ": linear context not split exactly", path);
      }
      if (*sub(0).sigma_before != *n.sigma_before ||
          *sub(1).sigma_before != *sub(0).sigma_after ||
          *n.sigma_after != *sub(1).sigma_after) {
        return fail(n.rule + ": store threading mismatch", path);
      }
      auto r1 = walk(sub(0), path + ".0");
      if (!r1.ok) return r1;
      return walk(sub(1), path + ".1");
    }
    if (n.rule == "bangR") {
      if (auto r = need_premises(1)) return *r;
      if (!c.focus_right || c.focus_right->kind != SKind::BangClosure) {
        return fail("bangR: focus is not a closure", path);
      }
      if (!c.delta.empty()) {
        return fail("bangR: linear context must be empty", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.goal || !sformula_equal(p.goal, c.focus_right->left) ||
          !p.delta.empty()) {
        return fail("bangR: premise shape wrong", path);
      }
      // Recompute the store extension exactly as the rule specifies.
      Substitution expect = *n.sigma_before;
      try {
        expect = expect.merged(*c.focus_right->sigma_cl);
        std::vector<TermPtr> gamma_phis;
        std::unordered_set<int> seen;
        for (const Closure& g : c.gamma) {
          for (const Var& v : g.phi) {
            if (seen.insert(v.uid).second) gamma_phis.push_back(mk_var(v));
          }
        }
        expect = expect.extended_merge_special(c.focus_right->a, gamma_phis);
        std::vector<TermPtr> target_ctx;
        target_ctx.push_back(mk_var(c.focus_right->a));
        for (const Var& v : c.focus_right->phi_cl) {
          target_ctx.push_back(mk_var(v));
        }
        for (const Closure& g : c.gamma) {
          expect = expect.extended_merge_special(g.a, target_ctx);
        }
      } catch (const std::logic_error& e) {
        return fail(std::string("bangR: store extension invalid: ") + e.what(),
                    path);
      }
      if (*sub(0).sigma_before != expect) {
        return fail("bangR: premise store is not the specified extension",
                    path);
      }
      if (*n.sigma_after != *sub(0).sigma_after) {
        return fail("bangR: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    if (n.rule == "copy") {
      if (auto r = need_premises(1)) return *r;
      if (!stable(c)) return fail("copy: conclusion not stable", path);
      if (n.gamma_index < 0 ||
          static_cast<std::size_t>(n.gamma_index) >= c.gamma.size()) {
        return fail("copy: bad closure index", path);
      }
      const Closure& cl = c.gamma[static_cast<std::size_t>(n.gamma_index)];
      std::unordered_map<int, Var> ren;
      std::unordered_set<int> dom;
      for (const auto& [from, to] : n.copy_renaming) {
        ren.emplace(from.uid, to);
        dom.insert(from.uid);
        if (from.kind != to.kind) {
          return fail("copy: renaming changes a variable kind", path);
        }
      }
      // Renaming domain must be exactly FV(body) \ Phi.
      std::unordered_set<int> expect_dom;
      for (const Var& v : sformula_free_vars(cl.body)) {
        if (!cl.phi.contains(v.uid)) expect_dom.insert(v.uid);
      }
      if (dom != expect_dom) {
        return fail("copy: renaming domain is not FV(body) minus Phi", path);
      }
      const auto& p = sub(0).conclusion;
      if (!p.focus_left ||
          !sformula_equal(p.focus_left, rename_sformula(cl.body, ren))) {
        return fail("copy: focused formula is not the renamed body", path);
      }
      if (!p.goal || !sformula_equal(p.goal, c.goal) ||
          !multiset_equal(p.delta, c.delta)) {
        return fail("copy: context or goal changed", path);
      }
      Substitution expect;
      try {
        expect = n.sigma_before->merged(cl.sigma->renamed(ren));
      } catch (const std::logic_error& e) {
        return fail(std::string("copy: store extension invalid: ") + e.what(),
                    path);
      }
      if (*sub(0).sigma_before != expect) {
        return fail("copy: premise store is not conclusion + renamed closure",
                    path);
      }
      if (*n.sigma_after != *sub(0).sigma_after) {
        return fail("copy: store threading mismatch", path);
      }
      return walk(sub(0), path + ".0");
    }
    return fail("unknown rule label '" + n.rule + "'", path);
  }
};

}  // namespace

CheckResult check_sljf(const SProofPtr& p, const SSequent& root) {
  Checker ck;
  if (!p) {
    return ck.fail("empty proof", "");
  }
  ck.sigma_final = *p->sigma_after;
  const SSequent& c = p->conclusion;
  if (!Checker::gamma_equal(c.gamma, root.gamma)) {
    return ck.fail("root unrestricted zone differs from the input", "");
  }
  if (!Checker::multiset_equal(c.delta, root.delta)) {
    return ck.fail("root linear context differs from the input", "");
  }
  if (!root.goal || !c.goal || !sformula_equal(c.goal, root.goal)) {
    return ck.fail("root goal differs from the input", "");
  }
  Substitution sigma0 = root.sigma ? *root.sigma : Substitution{};
  if (*p->sigma_before != sigma0) {
    return ck.fail("root store differs from the input substitution", "");
  }
  return ck.walk(*p, "0");
}

}  // namespace linskol
