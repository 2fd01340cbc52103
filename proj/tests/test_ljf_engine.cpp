// Reference backtracking prover for the focused first-order calculus.
#include "doctest.h"
#include "linskol/ljf_engine.hpp"
#include "linskol/parser.hpp"
#include "linskol/syntax.hpp"

using namespace linskol;

namespace {
struct Run {
  UidSource uids;
  Sequent sequent;
  LProveResult res;
};

Run prove(const std::string& text, Budget budget = {}) {
  Run r;
  r.sequent = parse_sequent_text(text, r.uids).sequent;
  r.res = prove_ljf(r.sequent, budget, r.uids);
  return r;
}

// First node with the given rule in prefix order, nullptr if absent.
LProofPtr find_rule(const LProofPtr& p, const std::string& rule) {
  if (!p) return nullptr;
  if (p->rule == rule) return p;
  for (const auto& q : p->premises)
    if (auto hit = find_rule(q, rule)) return hit;
  return nullptr;
}
}  // namespace

TEST_CASE("the linear syllogism needs a term backtrack but is proved") {
  Run r = prove("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)");
  REQUIRE(r.res.verdict == Verdict::Proved);
  CHECK(r.res.stats.term_backtracks >= 1);
  REQUIRE(r.res.tree);
  CHECK(check_ljf(r.res.tree, r.sequent).ok);

  // The successful branch focuses the existential assumption first and
  // introduces its parameter before the goal witness is chosen.
  REQUIRE(r.res.tree->rule == "focusL");
  LProofPtr exl = find_rule(r.res.tree, "existsL");
  REQUIRE(exl);
  CHECK(exl->eigen.kind == VarKind::Eigen);
  LProofPtr exr = find_rule(r.res.tree, "existsR");
  REQUIRE(exr);
  REQUIRE(exr->witness);
  CHECK(term_equal(exr->witness, mk_var(exl->eigen)));
  // The parameter rule sits above the witness rule on the same branch.
  CHECK(find_rule(exl, "existsR"));

  // The vacuous universal is grounded to the signature constant.
  LProofPtr fal = find_rule(r.res.tree, "forallL");
  REQUIRE(fal);
  CHECK(term_equal(fal->witness, mk_const("t0")));
}

TEST_CASE("the quantified tensor and bang goals are unprovable") {
  CHECK(prove("fa x. (A * B(x)) |- A * fa y. B(y)").res.verdict ==
        Verdict::Unprovable);
  CHECK(prove("fa x. ! A(x) |- ! fa u. A(u)").res.verdict ==
        Verdict::Unprovable);
}

TEST_CASE("propositional verdicts match the linear discipline") {
  CHECK(prove("A |- A").res.verdict == Verdict::Proved);
  CHECK(prove("A |- B").res.verdict == Verdict::Unprovable);
  CHECK(prove("A, B |- A").res.verdict == Verdict::Unprovable);
  CHECK(prove("A |- A * A").res.verdict == Verdict::Unprovable);
  CHECK(prove("A, B |- B * A").res.verdict == Verdict::Proved);
  CHECK(prove("|- A -o A").res.verdict == Verdict::Proved);
  CHECK(prove("A -o B, A |- B").res.verdict == Verdict::Proved);
  CHECK(prove("A ; |- A * A").res.verdict == Verdict::Proved);
  CHECK(prove("A |- ! A").res.verdict == Verdict::Unprovable);
  CHECK(prove("! A |- A").res.verdict == Verdict::Proved);
}

TEST_CASE("eigenvariable scoping blocks out-of-order witnesses") {
  // A parameter may justify a later witness...
  CHECK(prove("fa y. B(y,y) |- fa u. ex x. B(x,u)").res.verdict ==
        Verdict::Proved);
  // ...but a witness chosen before the parameter exists cannot mention it.
  CHECK(prove("fa y. B(y,y) |- ex x. fa u. B(x,u)").res.verdict ==
        Verdict::Unprovable);
  CHECK(prove("ex x. A(x) |- fa u. A(u)").res.verdict == Verdict::Unprovable);
  CHECK(prove("fa u. A(u) |- ex x. A(x)").res.verdict == Verdict::Proved);
}

TEST_CASE("returned trees are ground") {
  Run r = prove("fa x. (A(x) -o B(x)), A(c) |- ex y. B(y)");
  REQUIRE(r.res.verdict == Verdict::Proved);
  std::function<void(const LProofPtr&)> walk = [&](const LProofPtr& p) {
    if (!p) return;
    if (p->witness)
      for (const auto& v : term_vars(p->witness))
        CHECK(v.kind != VarKind::Existential);
    for (const auto& q : p->premises) walk(q);
  };
  walk(r.res.tree);
  CHECK(check_ljf(r.res.tree, r.sequent).ok);
}

TEST_CASE("the checker rejects tampered trees") {
  Run r = prove("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)");
  REQUIRE(r.res.verdict == Verdict::Proved);

  SUBCASE("wrong rule label") {
    auto bad = std::make_shared<LProofNode>(*r.res.tree);
    bad->rule = "tensorR";
    CHECK_FALSE(check_ljf(bad, r.sequent).ok);
  }
  SUBCASE("dropped premises") {
    auto bad = std::make_shared<LProofNode>(*r.res.tree);
    bad->premises.clear();
    CHECK_FALSE(check_ljf(bad, r.sequent).ok);
  }
  SUBCASE("wrong root sequent") {
    UidSource uids2;
    Sequent other = parse_sequent_text("A |- A", uids2).sequent;
    CHECK_FALSE(check_ljf(r.res.tree, other).ok);
  }
  SUBCASE("forged witness") {
    // Rebuild the spine down to the existsR node and replace its witness;
    // the grounded premise no longer matches the substituted body.
    std::function<LProofPtr(const LProofPtr&)> forge =
        [&](const LProofPtr& n) -> LProofPtr {
      auto copy = std::make_shared<LProofNode>(*n);
      if (copy->rule == "existsR") {
        copy->witness = mk_const("t0");
        return copy;
      }
      for (auto& q : copy->premises) q = forge(q);
      return copy;
    };
    CheckResult chk = check_ljf(forge(r.res.tree), r.sequent);
    CHECK_FALSE(chk.ok);
    CHECK_FALSE(chk.path.empty());
  }
  SUBCASE("forged parameter") {
    // Renaming the existsL parameter orphans its occurrences in the premise.
    UidSource uids2;
    Var rogue = uids2.fresh_eigen("w");
    std::function<LProofPtr(const LProofPtr&)> forge =
        [&](const LProofPtr& n) -> LProofPtr {
      auto copy = std::make_shared<LProofNode>(*n);
      if (copy->rule == "existsL") {
        copy->eigen = rogue;
        return copy;
      }
      for (auto& q : copy->premises) q = forge(q);
      return copy;
    };
    CHECK_FALSE(check_ljf(forge(r.res.tree), r.sequent).ok);
  }
}

TEST_CASE("a stale parameter in a split branch is caught") {
  // tensorR sends the eigenvariable's branch left and the witness branch
  // right; moving the witness across the split must fail the check.
  Run r = prove("fa u. A(u), B |- (ex x. A(x)) * B");
  REQUIRE(r.res.verdict == Verdict::Proved);
  REQUIRE(check_ljf(r.res.tree, r.sequent).ok);
  LProofPtr tr = find_rule(r.res.tree, "tensorR");
  REQUIRE(tr);
  REQUIRE(tr->premises.size() == 2);
  // Swapping the tensor premises breaks the exact split bookkeeping.
  auto forge = [&](const LProofPtr& n) -> LProofPtr {
    std::function<LProofPtr(const LProofPtr&)> go =
        [&](const LProofPtr& m) -> LProofPtr {
      auto copy = std::make_shared<LProofNode>(*m);
      if (copy->rule == "tensorR") {
        std::swap(copy->premises[0], copy->premises[1]);
        return copy;
      }
      for (auto& q : copy->premises) q = go(q);
      return copy;
    };
    return go(n);
  };
  CHECK_FALSE(check_ljf(forge(r.res.tree), r.sequent).ok);
}

TEST_CASE("budgets cut the reference search too") {
  Budget tight;
  tight.max_depth = 2;
  CHECK(prove("A, B |- A * B", tight).res.verdict ==
        Verdict::BudgetExhausted);
  std::string chain =
      "%const s 1\n%const z\n"
      "fa x. (A(x) -o A(s(x))) ; A(z) |- A(s(s(s(z))))";
  Budget b2;
  b2.copy_bound = 2;
  CHECK(prove(chain, b2).res.verdict == Verdict::Unprovable);
  Budget b3;
  b3.copy_bound = 3;
  Run r3 = prove(chain, b3);
  REQUIRE(r3.res.verdict == Verdict::Proved);
  CHECK(check_ljf(r3.res.tree, r3.sequent).ok);
}
