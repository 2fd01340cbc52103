// Substitutions: extension, application, typing, dependency order,
// admissibility.
#include "doctest.h"
#include "linskol/substitution.hpp"
#include "linskol/syntax.hpp"

using namespace linskol;

namespace {
// Shared cast of variables for store-building tests.
struct Cast {
  UidSource uids;
  Var x1 = uids.fresh_existential("x1");
  Var x2 = uids.fresh_existential("x2");
  Var x3 = uids.fresh_existential("x3");
  Var u = uids.fresh_eigen("u");
  Var b = uids.fresh_special("b");
  std::pair<Var, Var> pr = uids.fresh_special_pair("a");
  Var aL = pr.first;
  Var aR = pr.second;
};
}  // namespace

TEST_CASE("extension binds each variable once and validates eigen images") {
  Cast c;
  Substitution s;
  s = s.extended(c.x1, mk_var(c.u));
  CHECK(s.has(c.x1));
  CHECK(term_equal(*s.lookup(c.x1.uid), mk_var(c.u)));
  CHECK_THROWS_AS(s.extended(c.x1, mk_const("t0")), std::logic_error);
  // An eigenvariable's image must be its own skolem application.
  CHECK_THROWS_AS(s.extended(c.u, mk_const("t0")), std::logic_error);
  Substitution s2 = s.extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  CHECK(s2.entries().back().is_skolem());
}

TEST_CASE("special variables accumulate tuple elements without duplicates") {
  Cast c;
  Substitution s;
  s = s.extended_merge_special(c.b, {mk_var(c.x1)});
  s = s.extended_merge_special(c.b, {mk_var(c.x1), mk_var(c.x2)});
  TermPtr img = *s.lookup(c.b.uid);
  REQUIRE(img->kind == Term::Kind::Tuple);
  REQUIRE(img->args.size() == 2);
  CHECK(term_equal(img->args[0], mk_var(c.x1)));
  CHECK(term_equal(img->args[1], mk_var(c.x2)));
  CHECK_THROWS_AS(s.extended_merge_special(c.x1, {mk_var(c.x2)}),
                  std::logic_error);
}

TEST_CASE("merging stores unions entries and rejects conflicts") {
  Cast c;
  Substitution s1 = Substitution{}.extended(c.x1, mk_var(c.u));
  Substitution s2 = Substitution{}.extended(c.x2, mk_const("t0"));
  Substitution both = s1.merged(s2);
  CHECK(both.size() == 2);
  CHECK(both.contains_all(s1));
  CHECK(both.contains_all(s2));
  CHECK_FALSE(s1.contains_all(both));
  // The same entry twice is fine; a different image for the same uid is not.
  CHECK(s1.merged(s1) == s1);
  Substitution clash = Substitution{}.extended(c.x1, mk_const("t0"));
  CHECK_THROWS_AS(s1.merged(clash), std::logic_error);
  // Special tuples union element-wise instead of clashing.
  Substitution t1 = Substitution{}.extended_merge_special(c.b, {mk_var(c.x1)});
  Substitution t2 = Substitution{}.extended_merge_special(c.b, {mk_var(c.x2)});
  Substitution tu = t1.merged(t2);
  CHECK((*tu.lookup(c.b.uid))->args.size() == 2);
}

TEST_CASE("application is one parallel pass") {
  Cast c;
  Substitution s = Substitution{}
                       .extended(c.x1, mk_var(c.x2))
                       .extended(c.x2, mk_const("t0"));
  // x1 steps to x2 only; the fixpoint closes the chain.
  CHECK(term_equal(linskol::apply(s, mk_var(c.x1)), mk_var(c.x2)));
  CHECK(term_equal(apply_fix(s, mk_var(c.x1)), mk_const("t0")));
  TermPtr nested = mk_app("f", {mk_var(c.x1), mk_var(c.x3)});
  TermPtr once = linskol::apply(s, nested);
  CHECK(term_equal(once, mk_app("f", {mk_var(c.x2), mk_var(c.x3)})));
}

TEST_CASE("skolem heads are rigid under application") {
  Cast c;
  Substitution s =
      Substitution{}.extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  // A bare eigenvariable occurrence is expanded to its skolem application...
  CHECK(term_equal(linskol::apply(s, mk_var(c.u)), mk_eigen_app(c.u, {mk_var(c.x2)})));
  // ...but the head of an existing application is never rewritten again.
  TermPtr app = mk_eigen_app(c.u, {mk_const("t0")});
  CHECK(term_equal(linskol::apply(s, app), app));
  CHECK(term_equal(apply_fix(s, mk_var(c.u)),
                   mk_eigen_app(c.u, {mk_var(c.x2)})));
}

TEST_CASE("fixpoint application raises on cyclic stores") {
  Cast c;
  Substitution s = Substitution{}
                       .extended(c.x1, mk_var(c.u))
                       .extended(c.b, mk_var(c.x1))  // via x1 back to u
                       .extended(c.u, mk_eigen_app(c.u, {mk_var(c.b)}));
  CHECK_THROWS_AS(apply_fix(s, mk_var(c.b)), CycleError);
  // Terms outside the cycle still reach a fixpoint.
  CHECK(term_equal(apply_fix(s, mk_var(c.x2)), mk_var(c.x2)));
}

TEST_CASE("restriction and removal partition a store") {
  Cast c;
  Substitution s = Substitution{}
                       .extended(c.x1, mk_var(c.u))
                       .extended(c.x2, mk_const("t0"))
                       .extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  VarContext phi = VarContext{}.appended(c.x1).appended(c.x3);
  Substitution kept = s.restrict_to(phi);
  Substitution dropped = s.remove(phi);
  CHECK(kept.size() == 1);
  CHECK(kept.has(c.x1));
  CHECK(dropped.size() == 2);
  CHECK_FALSE(dropped.has(c.x1));
  CHECK(kept.merged(dropped) == s);
}

TEST_CASE("renaming rewrites domain and image variables together") {
  Cast c;
  Substitution s = Substitution{}.extended(c.x1, mk_var(c.u));
  Var y = c.uids.fresh_existential("y");
  Var w = c.uids.fresh_eigen("w");
  std::unordered_map<int, Var> ren{{c.x1.uid, y}, {c.u.uid, w}};
  Substitution r = s.renamed(ren);
  CHECK_FALSE(r.has(c.x1));
  CHECK(term_equal(*r.lookup(y.uid), mk_var(w)));
}

TEST_CASE("the typing judgment checks codomain membership and image supports") {
  Cast c;
  VarContext dom = VarContext{}.appended(c.x2);
  VarContext cod = VarContext{}.appended(c.u);
  CHECK(typecheck(Substitution{}, dom, cod));
  CHECK(typecheck(Substitution{}, VarContext{}, VarContext{}));

  Substitution sk =
      Substitution{}.extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  CHECK(typecheck(sk, dom, cod));
  // The skolem head itself need not be in the domain, only its arguments.
  std::string why;
  CHECK_FALSE(typecheck(sk, VarContext{}, cod, &why));
  CHECK(why.find("not in the domain") != std::string::npos);
  CHECK_FALSE(typecheck(sk, dom, VarContext{}, &why));
  CHECK(why.find("not in the codomain") != std::string::npos);

  Substitution sb = Substitution{}.extended(c.x1, mk_var(c.u));
  CHECK(typecheck(sb, VarContext{}.appended(c.u),
                  VarContext{}.appended(c.x1)));
  CHECK_FALSE(typecheck(sb, VarContext{}, VarContext{}.appended(c.x1)));
}

TEST_CASE("typing stays true when the codomain grows") {
  Cast c;
  Substitution s = Substitution{}.extended(c.x1, mk_var(c.u));
  VarContext dom = VarContext{}.appended(c.u);
  VarContext cod = VarContext{}.appended(c.x1);
  REQUIRE(typecheck(s, dom, cod));
  CHECK(typecheck(s, dom, cod.appended(c.x2).appended(c.b)));
}

TEST_CASE("the dependency order relates bound variables to their images") {
  Cast c;
  CHECK(dependency_order(Substitution{}).edges().empty());

  Substitution s1 = Substitution{}.extended(c.x1, mk_var(c.u));
  auto e1 = dependency_order(s1).edges();
  REQUIRE(e1.size() == 1);
  CHECK(e1[0].first == c.x1);
  CHECK(e1[0].second == c.u);

  Substitution s2 =
      Substitution{}.extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  auto e2 = dependency_order(s2).edges();
  REQUIRE(e2.size() == 1);
  CHECK(e2[0].first == c.u);
  CHECK(e2[0].second == c.x2);

  // Tuple images of specials contribute edges to each element variable.
  Substitution s3 = Substitution{}.extended_merge_special(
      c.b, {mk_var(c.x1), mk_eigen_app(c.u, {mk_var(c.x3)})});
  DependencyGraph g3 = dependency_order(s3);
  auto reach = g3.reachable(c.b.uid);
  CHECK(reach.count(c.x1.uid));
  CHECK(reach.count(c.u.uid));
  CHECK(reach.count(c.x3.uid));
}

TEST_CASE("reachability composes chains and acyclicity finds cycles") {
  Cast c;
  Substitution s = Substitution{}
                       .extended(c.x3, mk_var(c.x1))
                       .extended(c.x1, mk_var(c.u))
                       .extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  DependencyGraph g = dependency_order(s);
  auto reach = g.reachable(c.x3.uid);
  CHECK(reach.count(c.x1.uid));
  CHECK(reach.count(c.u.uid));
  CHECK(reach.count(c.x2.uid));
  CHECK_FALSE(reach.count(c.x3.uid));
  CHECK(g.acyclic());

  Substitution bad = Substitution{}
                         .extended(c.x1, mk_var(c.u))
                         .extended(c.u, mk_eigen_app(c.u, {mk_var(c.x1)}));
  std::vector<Var> cyc;
  CHECK_FALSE(dependency_order(bad).acyclic(&cyc));
  REQUIRE(cyc.size() >= 3);
  CHECK(cyc.front() == cyc.back());
}

TEST_CASE("an instantiated detour store is admissible") {
  Cast c;
  // u for x1, x1 for x3, and u skolemised over x2.
  Substitution s = Substitution{}
                       .extended(c.x1, mk_var(c.u))
                       .extended(c.x3, mk_var(c.x1))
                       .extended(c.u, mk_eigen_app(c.u, {mk_var(c.x2)}));
  VarContext phi = VarContext{}
                       .appended(c.x1)
                       .appended(c.aL)
                       .appended(c.x2)
                       .appended(c.aR)
                       .appended(c.x3);
  AdmissibilityVerdict v = admissible(s, phi);
  CHECK(v.ok);
  CHECK(bool(v));
  CHECK(v.condition == 0);
}

TEST_CASE("reaching a special whose partner is in scope violates condition 2") {
  Cast c;
  // x unifies with u, and u's skolem argument is the right special: any
  // x-instantiation would smuggle the pair across its own split.
  Substitution s = Substitution{}
                       .extended(c.x1, mk_var(c.u))
                       .extended(c.u, mk_eigen_app(c.u, {mk_var(c.aR)}));
  VarContext phi = VarContext{}.appended(c.x1).appended(c.aL);
  AdmissibilityVerdict v = admissible(s, phi);
  REQUIRE_FALSE(v.ok);
  CHECK(v.condition == 2);
  REQUIRE(v.witnesses.size() == 3);
  CHECK(v.witnesses[0] == c.x1);
  CHECK(v.witnesses[1] == c.aR);
  CHECK(v.witnesses[2] == c.aL);
  CHECK(v.detail.find("condition 2") != std::string::npos);

  // Without the partner in scope the same store is fine.
  VarContext phi2 = VarContext{}.appended(c.x1);
  CHECK(admissible(s, phi2).ok);
}

TEST_CASE("a cycle through a closure special violates condition 1") {
  Cast c;
  Substitution s = Substitution{}
                       .extended(c.x1, mk_var(c.u))
                       .extended(c.b, mk_var(c.x1))
                       .extended(c.u, mk_eigen_app(c.u, {mk_var(c.b)}));
  VarContext phi =
      VarContext{}.appended(c.x1).appended(c.u).appended(c.b).appended(c.aL);
  AdmissibilityVerdict v = admissible(s, phi);
  REQUIRE_FALSE(v.ok);
  CHECK(v.condition == 1);
  bool b_witnessed = false;
  for (const auto& w : v.witnesses) b_witnessed = b_witnessed || w == c.b;
  CHECK(b_witnessed);
  REQUIRE_FALSE(v.cycle.empty());
  CHECK(v.cycle.front() == v.cycle.back());
  CHECK(v.detail.find("condition 1") != std::string::npos);
  CHECK(v.detail.find("cycle") != std::string::npos);
}

TEST_CASE("the empty store is admissible for any context") {
  Cast c;
  CHECK(admissible(Substitution{}, VarContext{}).ok);
  CHECK(admissible(Substitution{},
                   VarContext{}.appended(c.x1).appended(c.aL).appended(c.aR))
            .ok);
}

TEST_CASE("store printing lists entries image/variable") {
  Cast c;
  Substitution s = Substitution{}.extended(c.x1, mk_var(c.u));
  std::string out = to_string(s);
  CHECK(out.find("u/x1") != std::string::npos);
  CHECK(to_string(Substitution{}) ==
        to_string(Substitution{}));  // stable empty rendering
}
