// Rebuilding first-order focused proofs from skolemised skeletons.
#include "doctest.h"
#include "linskol/parser.hpp"
#include "linskol/reconstructor.hpp"
#include "linskol/skolemiser.hpp"
#include "linskol/sljf_engine.hpp"
#include "linskol/substitution.hpp"
#include "linskol/syntax.hpp"

using namespace linskol;

namespace {
struct Pipeline {
  UidSource uids;
  Sequent parsed;
  SkolemisedSequent sk;
  SProveResult sres;
  ReconstructResult rec;
};

Pipeline run(const std::string& text, Budget budget = {}) {
  Pipeline p;
  p.parsed = parse_sequent_text(text, p.uids).sequent;
  p.sk = skolemise_sequent(p.parsed, p.uids);
  p.sres = prove_sljf(p.sk.ssequent, budget, p.uids);
  REQUIRE(p.sres.verdict == Verdict::Proved);
  p.rec = reconstruct(p.sres.tree, p.sres.sigma_final, p.sk);
  return p;
}

int count_rule(const LProofPtr& p, const std::string& rule) {
  if (!p) return 0;
  int n = p->rule == rule ? 1 : 0;
  for (const auto& q : p->premises) n += count_rule(q, rule);
  return n;
}
}  // namespace

TEST_CASE("the rebuilt syllogism proof checks against original and renaming") {
  Pipeline p = run("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)");
  REQUIRE(p.rec.tree);
  CHECK(check_ljf(p.rec.tree, p.sk.renamed_original).ok);
  // The renamed copy is alpha-equal to the input, so the tree also proves
  // the sequent as parsed.
  CHECK(check_ljf(p.rec.tree, p.parsed).ok);

  // One quantifier rule per erased quantifier.
  CHECK(count_rule(p.rec.tree, "forallL") == 2);
  CHECK(count_rule(p.rec.tree, "existsL") == 1);
  CHECK(count_rule(p.rec.tree, "existsR") == 1);
  CHECK(count_rule(p.rec.tree, "forallR") == 0);

  // The goal witness is the parameter introduced for the assumption.
  std::function<LProofPtr(const LProofPtr&, const std::string&)> find =
      [&](const LProofPtr& n, const std::string& rule) -> LProofPtr {
    if (!n) return nullptr;
    if (n->rule == rule) return n;
    for (const auto& q : n->premises)
      if (auto hit = find(q, rule)) return hit;
    return nullptr;
  };
  LProofPtr exl = find(p.rec.tree, "existsL");
  LProofPtr exr = find(p.rec.tree, "existsR");
  REQUIRE(exl);
  REQUIRE(exr);
  CHECK(term_equal(exr->witness, mk_var(exl->eigen)));

  CHECK(schedule_respects_order(p.rec.schedule, p.sres.sigma_final, nullptr));
}

TEST_CASE("the schedule orders parameter introductions before their uses") {
  Pipeline p = run("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)");
  int seen_eigen = -1, used_at = -1;
  for (int i = 0; i < static_cast<int>(p.rec.schedule.size()); ++i) {
    const Event& e = p.rec.schedule[i];
    if (e.kind == Event::Kind::IntroduceEigen) seen_eigen = i;
    if (e.kind == Event::Kind::Instantiate && e.witness &&
        e.witness->kind == Term::Kind::Variable &&
        e.witness->var.kind == VarKind::Eigen)
      used_at = i;
  }
  REQUIRE(seen_eigen >= 0);
  REQUIRE(used_at >= 0);
  CHECK(seen_eigen < used_at);
}

TEST_CASE("quantifier-free skeletons mirror one to one") {
  Pipeline p = run("A |- A");
  CHECK(check_ljf(p.rec.tree, p.sk.renamed_original).ok);
  CHECK(count_rule(p.rec.tree, "forallL") == 0);
  CHECK(count_rule(p.rec.tree, "existsR") == 0);
  for (const Event& e : p.rec.schedule)
    CHECK(e.kind == Event::Kind::Structural);
}

TEST_CASE("tensor splits rebuild with the recorded resource partition") {
  Pipeline p = run("A, B |- B * A");
  CHECK(check_ljf(p.rec.tree, p.sk.renamed_original).ok);
  CHECK(count_rule(p.rec.tree, "tensorR") == 1);

  Pipeline q = run("fa x. (A(x) -o B(x)), A(c) |- ex y. B(y)");
  CHECK(check_ljf(q.rec.tree, q.sk.renamed_original).ok);
  CHECK(check_ljf(q.rec.tree, q.parsed).ok);
}

TEST_CASE("copies and closures rebuild with captured witnesses") {
  Pipeline p = run("A ; |- A * A");
  CHECK(check_ljf(p.rec.tree, p.sk.renamed_original).ok);
  CHECK(count_rule(p.rec.tree, "copy") == 2);

  Pipeline q = run("! A |- A");
  CHECK(check_ljf(q.rec.tree, q.sk.renamed_original).ok);
  CHECK(count_rule(q.rec.tree, "bangL") == 1);

  // The closure context variable is instantiated on replication.
  Pipeline r = run("fa x. ! B(x) |- ! B(c)");
  CHECK(check_ljf(r.rec.tree, r.sk.renamed_original).ok);
  CHECK(count_rule(r.rec.tree, "bangR") == 1);
  CHECK(count_rule(r.rec.tree, "forallL") == 1);
}

TEST_CASE("right universals rebuild below dependent witnesses") {
  Pipeline p = run("fa y. B(y,y) |- fa u. ex x. B(x,u)");
  CHECK(check_ljf(p.rec.tree, p.sk.renamed_original).ok);
  CHECK(count_rule(p.rec.tree, "forallR") == 1);
  CHECK(count_rule(p.rec.tree, "existsR") == 1);
  CHECK(schedule_respects_order(p.rec.schedule, p.sres.sigma_final, nullptr));
}

TEST_CASE("witnesses collapse skolem applications and default unbound slots") {
  UidSource uids;
  Var x1 = uids.fresh_existential("x1");
  Var x2 = uids.fresh_existential("x2");
  Var x3 = uids.fresh_existential("x3");
  Var u = uids.fresh_eigen("u");
  Substitution s = Substitution{}
                       .extended(x1, mk_var(u))
                       .extended(x3, mk_var(x1))
                       .extended(u, mk_eigen_app(u, {mk_var(x2)}));
  CHECK(term_equal(reconstruction_witness(s, x3), mk_var(u)));
  CHECK(term_equal(reconstruction_witness(s, x1), mk_var(u)));
  CHECK(term_equal(reconstruction_witness(s, x2), mk_const("t0")));

  Var y = uids.fresh_existential("y");
  Substitution nested = Substitution{}
                            .extended(y, mk_app("g", {mk_var(u), mk_var(x2)}))
                            .extended(u, mk_eigen_app(u, {mk_var(x2)}));
  CHECK(term_equal(reconstruction_witness(nested, y),
                   mk_app("g", {mk_var(u), mk_const("t0")})));
}

TEST_CASE("order validation accepts linear extensions and names violations") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var u = uids.fresh_eigen("u");
  Substitution s = Substitution{}.extended(x, mk_var(u));

  EventSchedule good{{Event::Kind::IntroduceEigen, u, nullptr},
                     {Event::Kind::Instantiate, x, mk_var(u)}};
  CHECK(schedule_respects_order(good, s, nullptr));

  EventSchedule bad{{Event::Kind::Instantiate, x, mk_var(u)},
                    {Event::Kind::IntroduceEigen, u, nullptr}};
  std::string why;
  CHECK_FALSE(schedule_respects_order(bad, s, &why));
  CHECK(why.find("precedes") != std::string::npos);

  // Variables without events impose no constraints.
  EventSchedule partial{{Event::Kind::Instantiate, x, mk_var(u)}};
  CHECK(schedule_respects_order(partial, s, nullptr));
  CHECK(schedule_respects_order(EventSchedule{}, s, nullptr));

  // Skolem arguments order parameters after the instantiations they mention.
  Var x2 = uids.fresh_existential("x2");
  Substitution sk =
      Substitution{}.extended(u, mk_eigen_app(u, {mk_var(x2)}));
  EventSchedule arg_ok{{Event::Kind::Instantiate, x2, mk_const("t0")},
                       {Event::Kind::IntroduceEigen, u, nullptr}};
  CHECK(schedule_respects_order(arg_ok, sk, nullptr));
  EventSchedule arg_bad{{Event::Kind::IntroduceEigen, u, nullptr},
                        {Event::Kind::Instantiate, x2, mk_const("t0")}};
  CHECK_FALSE(schedule_respects_order(arg_bad, sk, &why));
}

TEST_CASE("reconstruction validates its skeleton first") {
  Pipeline p = run("A |- A");
  auto bad = std::make_shared<SProofNode>(*p.sres.tree);
  bad->rule = "tensorR";
  CHECK_THROWS_AS(reconstruct(bad, p.sres.sigma_final, p.sk),
                  ReconstructError);
}

TEST_CASE("rebuilt trees stay checkable across a mixed batch") {
  for (const char* text :
       {"A -o B, A |- B", "|- A -o A", "fa u. A(u) |- ex x. A(x)",
        "fa x. (A(x) -o B(x)) ; A(c), A(d) |- B(c) * B(d)",
        "ex x. A(x) |- ex y. A(y)", "! (A -o B) , A |- B",
        "fa x. fa y. C(x,y) |- C(s,t) "}) {
    CAPTURE(text);
    Pipeline p = run(text);
    CHECK(check_ljf(p.rec.tree, p.sk.renamed_original).ok);
    CHECK(check_ljf(p.rec.tree, p.parsed).ok);
    CHECK(schedule_respects_order(p.rec.schedule, p.sres.sigma_final,
                                  nullptr));
  }
}
