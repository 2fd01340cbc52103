// Proof search over the skolemised calculus: unification, admissibility
// gating, linearity, budgets, and proof checking.
#include "doctest.h"
#include "linskol/parser.hpp"
#include "linskol/skolemiser.hpp"
#include "linskol/sljf_engine.hpp"
#include "linskol/substitution.hpp"
#include "linskol/syntax.hpp"

using namespace linskol;

namespace {
struct Run {
  UidSource uids;
  SkolemisedSequent sk;
  SProveResult res;
};

Run prove(const std::string& text, bool trace = false, Budget budget = {}) {
  Run r;
  auto parsed = parse_sequent_text(text, r.uids);
  r.sk = skolemise_sequent(parsed.sequent, r.uids);
  r.res = prove_sljf(r.sk.ssequent, budget, r.uids, trace);
  return r;
}

ConstraintStore fresh_store() {
  return ConstraintStore{Substitution{}, VarContext{},
                         std::make_shared<SearchStats>()};
}
}  // namespace

TEST_CASE("the linear syllogism is proved without term backtracking") {
  Run r = prove("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)");
  REQUIRE(r.res.verdict == Verdict::Proved);
  CHECK(r.res.stats.term_backtracks == 0);
  REQUIRE(r.res.tree);

  // Recover the indexed variables from the skolemised sequent.
  const SSequent& s = r.sk.ssequent;
  Var x1 = s.delta[0]->left->left->left->phi.vars()[0];
  Var x2 = s.delta[1]->left->phi.vars()[0];
  Var u = s.delta[1]->left->phi.vars()[1];
  Var x3 = s.goal->phi.vars()[0];

  // Final store: u for x1, x1 for x3, u skolemised over x2 - nothing else.
  const Substitution& sig = r.res.sigma_final;
  REQUIRE(sig.size() == 3);
  REQUIRE(sig.has(x1));
  REQUIRE(sig.has(x3));
  REQUIRE(sig.has(u));
  CHECK(term_equal(*sig.lookup(x1.uid), mk_var(u)));
  CHECK(term_equal(*sig.lookup(x3.uid), mk_var(x1)));
  CHECK(term_equal(*sig.lookup(u.uid), mk_eigen_app(u, {mk_var(x2)})));

  // The tree re-validates against the skolemised root.
  CheckResult chk = check_sljf(r.res.tree, s);
  CHECK(chk.ok);
  CHECK(chk.error.empty());
}

TEST_CASE("a quantified tensor goal fails on the paired-special condition") {
  Run r = prove("fa x. (A * B(x)) |- A * fa y. B(y)", /*trace=*/true);
  CHECK(r.res.verdict == Verdict::Unprovable);
  CHECK(r.res.stats.adm_condition2 == 1);
  CHECK(r.res.stats.adm_condition1 == 0);

  int rejections = 0;
  for (const auto& e : r.res.trace) {
    if (e.kind != "axiom_candidate" || e.outcome != "adm_reject") continue;
    ++rejections;
    CHECK(e.condition == 2);
    CHECK(e.detail.find("condition 2") != std::string::npos);
    CHECK(e.detail.find("partner") != std::string::npos);
    CHECK(e.witnesses.size() == 3);  // x, the special it reaches, the partner
  }
  CHECK(rejections == 1);
}

TEST_CASE("replicating an instantiated bang fails on the cycle condition") {
  Run r = prove("fa x. ! A(x) |- ! fa u. A(u)", /*trace=*/true);
  CHECK(r.res.verdict == Verdict::Unprovable);
  CHECK(r.res.stats.adm_condition1 >= 1);

  // The goal closure's own special must appear in a rejection cycle.
  Var b = r.sk.ssequent.goal->left->a;
  bool cycle_through_goal_closure = false;
  for (const auto& e : r.res.trace) {
    if (e.outcome != "adm_reject") continue;
    CHECK(e.condition == 1);
    CHECK(e.detail.find("condition 1") != std::string::npos);
    for (int uid : e.witness_uids)
      cycle_through_goal_closure = cycle_through_goal_closure || uid == b.uid;
  }
  CHECK(cycle_through_goal_closure);
}

TEST_CASE("axiom unification binds existentials and commits the context") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  VarContext phix = VarContext{}.appended(x);
  SFormulaPtr lhs = mk_satom_neg("A", {mk_var(x)}, phix);
  SFormulaPtr rhs = mk_satom_neg("A", {mk_const("t0")}, VarContext{});

  auto out = unify_atoms(lhs, rhs, fresh_store(), nullptr);
  REQUIRE(out.has_value());
  CHECK(term_equal(*out->sigma.lookup(x.uid), mk_const("t0")));
  REQUIRE(out->committed.size() == 1);
  CHECK(out->committed.back().contains(x));
  CHECK(out->stats->unifications == 1);
  CHECK(out->stats->unify_failures == 0);
}

TEST_CASE("axiom unification rejects rigid clashes") {
  UidSource uids;
  auto store = fresh_store();
  SFormulaPtr a = mk_satom_neg("A", {mk_const("c")}, VarContext{});
  SFormulaPtr a2 = mk_satom_neg("A", {mk_const("d")}, VarContext{});
  SFormulaPtr b = mk_satom_neg("B", {mk_const("c")}, VarContext{});
  SFormulaPtr a_bin = mk_satom_neg("A", {mk_const("c"), mk_const("c")},
                                   VarContext{});
  std::vector<TraceEvent> trace;
  CHECK_FALSE(unify_atoms(a, a2, store, &trace).has_value());
  CHECK_FALSE(unify_atoms(a, b, store, &trace).has_value());
  CHECK_FALSE(unify_atoms(a, a_bin, store, &trace).has_value());
  CHECK(store.stats->unify_failures == 3);
  REQUIRE(trace.size() == 3);
  CHECK(trace[0].outcome == "unify_fail");
  CHECK(trace[0].detail.find("clash") != std::string::npos);
  CHECK(trace[1].detail.find("predicate mismatch") != std::string::npos);
  CHECK(trace[2].detail.find("arity mismatch") != std::string::npos);

  // Distinct eigenvariables are rigid.
  Var u = uids.fresh_eigen("u");
  Var w = uids.fresh_eigen("w");
  SFormulaPtr au = mk_satom_neg("A", {mk_var(u)}, VarContext{});
  SFormulaPtr aw = mk_satom_neg("A", {mk_var(w)}, VarContext{});
  CHECK_FALSE(unify_atoms(au, aw, store, nullptr).has_value());
  CHECK(unify_atoms(au, au, store, nullptr).has_value());
}

TEST_CASE("unification descends into function terms") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  SFormulaPtr lhs =
      mk_satom_neg("A", {mk_app("f", {mk_var(x)})}, VarContext{}.appended(x));
  SFormulaPtr rhs =
      mk_satom_neg("A", {mk_app("f", {mk_const("c")})}, VarContext{});
  auto out = unify_atoms(lhs, rhs, fresh_store(), nullptr);
  REQUIRE(out.has_value());
  CHECK(term_equal(*out->sigma.lookup(x.uid), mk_const("c")));
}

TEST_CASE("a bare eigenvariable meets its own skolem application") {
  UidSource uids;
  Var x2 = uids.fresh_existential("x2");
  Var u = uids.fresh_eigen("u");
  auto store = fresh_store();
  store.sigma = store.sigma.extended(u, mk_eigen_app(u, {mk_var(x2)}));
  SFormulaPtr bare = mk_satom_neg("A", {mk_var(u)}, VarContext{});
  SFormulaPtr applied =
      mk_satom_neg("A", {mk_eigen_app(u, {mk_var(x2)})}, VarContext{});
  CHECK(unify_atoms(bare, applied, store, nullptr).has_value());
}

TEST_CASE("the admissibility gate fires inside unification") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var u = uids.fresh_eigen("u");
  auto [aL, aR] = uids.fresh_special_pair("a");
  auto store = fresh_store();
  store.sigma = store.sigma.extended(u, mk_eigen_app(u, {mk_var(aR)}));

  SFormulaPtr lhs =
      mk_satom_neg("B", {mk_var(x)}, VarContext{}.appended(x).appended(aL));
  SFormulaPtr rhs =
      mk_satom_neg("B", {mk_var(u)}, VarContext{}.appended(aR).appended(u));
  std::vector<TraceEvent> trace;
  CHECK_FALSE(unify_atoms(lhs, rhs, store, &trace).has_value());
  CHECK(store.stats->adm_condition2 == 1);
  REQUIRE(trace.size() == 1);
  CHECK(trace[0].condition == 2);

  // Without the partner in context the same unification goes through.
  SFormulaPtr lhs2 = mk_satom_neg("B", {mk_var(x)}, VarContext{}.appended(x));
  CHECK(unify_atoms(lhs2, rhs, fresh_store(), nullptr).has_value());
}

TEST_CASE("resources are consumed exactly once") {
  CHECK(prove("A |- A").res.verdict == Verdict::Proved);
  CHECK(prove("A |- B").res.verdict == Verdict::Unprovable);
  CHECK(prove("A, B |- A").res.verdict == Verdict::Unprovable);  // leftover B
  CHECK(prove("A, A |- A").res.verdict == Verdict::Unprovable);
  CHECK(prove("A |- A * A").res.verdict == Verdict::Unprovable);
  CHECK(prove("A, B |- A * B").res.verdict == Verdict::Proved);
  CHECK(prove("A, B |- B * A").res.verdict == Verdict::Proved);
  CHECK(prove("|- A -o A").res.verdict == Verdict::Proved);
  CHECK(prove("A -o B, A |- B").res.verdict == Verdict::Proved);
}

TEST_CASE("the unrestricted zone replicates under the copy bound") {
  Run two = prove("A ; |- A * A");
  CHECK(two.res.verdict == Verdict::Proved);
  CHECK(two.res.stats.copies == 2);
  CHECK(prove("! A |- A").res.verdict == Verdict::Proved);
  CHECK(prove("|- ! (A -o A)").res.verdict == Verdict::Proved);
  // The right bang rule requires an empty linear context.
  CHECK(prove("A |- ! A").res.verdict == Verdict::Unprovable);

  // A chain that needs three applications of one closure along a single
  // branch is out of reach at copy bound two.
  std::string chain =
      "%const s 1\n%const z\n"
      "fa x. (A(x) -o A(s(x))) ; A(z) |- A(s(s(s(z))))";
  Budget b2;
  b2.copy_bound = 2;
  CHECK(prove(chain, false, b2).res.verdict == Verdict::Unprovable);
  Budget b3;
  b3.copy_bound = 3;
  Run r3 = prove(chain, false, b3);
  CHECK(r3.res.verdict == Verdict::Proved);
  CHECK(r3.res.stats.copies == 3);
  CHECK(check_sljf(r3.res.tree, r3.sk.ssequent).ok);
}

TEST_CASE("the depth budget reports exhaustion rather than unprovability") {
  Budget tight;
  tight.max_depth = 2;
  Run r = prove("A, B |- A * B", false, tight);
  CHECK(r.res.verdict == Verdict::BudgetExhausted);
  Budget expansions;
  expansions.max_expansions = 1;
  CHECK(prove("A, B |- A * B", false, expansions).res.verdict ==
        Verdict::BudgetExhausted);
  CHECK(to_string(Verdict::Proved) == "proved");
  CHECK(to_string(Verdict::Unprovable) == "unprovable");
  CHECK(to_string(Verdict::BudgetExhausted) == "budget_exhausted");
}

TEST_CASE("search never backtracks over term bindings") {
  for (const char* text :
       {"fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)",
        "fa x. (A(x) -o B(x)), A(c) |- ex y. B(y)",
        "fa x. fa y. (A(x) -o A(y)) ; A(c) |- A(d)",
        "fa x. (A * B(x)) |- A * fa y. B(y)", "fa x. ! A(x) |- ! fa u. A(u)"}) {
    Run r = prove(text);
    CAPTURE(text);
    CHECK(r.res.stats.term_backtracks == 0);
  }
}

TEST_CASE("the checker rejects tampered proofs") {
  Run r = prove("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)");
  REQUIRE(r.res.verdict == Verdict::Proved);
  REQUIRE(check_sljf(r.res.tree, r.sk.ssequent).ok);

  SUBCASE("wrong rule label") {
    auto bad = std::make_shared<SProofNode>(*r.res.tree);
    bad->rule = "tensorR";
    CheckResult chk = check_sljf(bad, r.sk.ssequent);
    CHECK_FALSE(chk.ok);
    CHECK_FALSE(chk.error.empty());
  }
  SUBCASE("dropped premise") {
    // Walk down to the first node with premises and drop one.
    auto bad = std::make_shared<SProofNode>(*r.res.tree);
    REQUIRE_FALSE(bad->premises.empty());
    bad->premises.clear();
    CHECK_FALSE(check_sljf(bad, r.sk.ssequent).ok);
  }
  SUBCASE("wrong root") {
    UidSource uids2;
    auto other = parse_sequent_text("A |- A", uids2);
    auto sk2 = skolemise_sequent(other.sequent, uids2);
    CheckResult chk = check_sljf(r.res.tree, sk2.ssequent);
    CHECK_FALSE(chk.ok);
  }
  SUBCASE("deep tampering is located by a path") {
    // Find a node at depth >= 1 to corrupt, rebuilding the spine above it.
    std::function<SProofPtr(const SProofPtr&, int)> corrupt =
        [&](const SProofPtr& n, int depth) -> SProofPtr {
      auto copy = std::make_shared<SProofNode>(*n);
      if (depth == 0 || copy->premises.empty()) {
        copy->rule = "ax+";
        return copy;
      }
      copy->premises[copy->premises.size() - 1] =
          corrupt(copy->premises.back(), depth - 1);
      return copy;
    };
    CheckResult chk = check_sljf(corrupt(r.res.tree, 2), r.sk.ssequent);
    CHECK_FALSE(chk.ok);
    CHECK_FALSE(chk.path.empty());
  }
}

TEST_CASE("proved stores are admissible and typed over the indexed variables") {
  for (const char* text :
       {"fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)",
        "fa x. (A(x) -o B(x)), A(c) |- ex y. B(y)",
        "A, B |- B * A"}) {
    Run r = prove(text);
    CAPTURE(text);
    REQUIRE(r.res.verdict == Verdict::Proved);
    std::vector<Var> all;
    std::unordered_set<int> seen;
    for (const auto& d : r.sk.ssequent.delta) sformula_all_vars(d, all, seen);
    sformula_all_vars(r.sk.ssequent.goal, all, seen);
    VarContext everything;
    for (const auto& v : all)
      if (!everything.contains(v.uid)) everything = everything.appended(v);
    CHECK(admissible(r.res.sigma_final, everything).ok);
  }
}
