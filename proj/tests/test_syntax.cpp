// Core syntax: variables, terms, formulas, contexts, renaming, printing.
#include "doctest.h"
#include "linskol/substitution.hpp"
#include "linskol/syntax.hpp"

using namespace linskol;

TEST_CASE("variable identity goes by uid, not name") {
  UidSource uids;
  Var a = uids.fresh_existential("x");
  Var b = uids.fresh_existential("x");
  CHECK(a != b);
  CHECK(a == a);
  CHECK(a.uid != b.uid);
}

TEST_CASE("special pairs share a pair id and know their partner") {
  UidSource uids;
  auto [l, r] = uids.fresh_special_pair("a");
  CHECK(l.kind == VarKind::Special);
  CHECK(r.kind == VarKind::Special);
  CHECK(l.pair_id == r.pair_id);
  CHECK(l.partner_uid == r.uid);
  CHECK(r.partner_uid == l.uid);
  auto [l2, r2] = uids.fresh_special_pair("a");
  CHECK(l2.pair_id != l.pair_id);
  Var lone = uids.fresh_special("a");
  CHECK(lone.pair_id == -1);
  CHECK(lone.partner_uid == -1);
}

TEST_CASE("occurs check sees variables under applications and eigen heads") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var u = uids.fresh_eigen("u");
  Var y = uids.fresh_existential("y");
  TermPtr t = mk_app("f", {mk_var(x), mk_eigen_app(u, {mk_var(y)})});
  CHECK(occurs_in_term(x, t));
  CHECK(occurs_in_term(y, t));
  CHECK(occurs_in_term(u, t));  // the rigid head still counts as occurring
  Var z = uids.fresh_existential("z");
  CHECK_FALSE(occurs_in_term(z, t));
}

TEST_CASE("term variables are collected in first-occurrence order, deduplicated") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var y = uids.fresh_existential("y");
  TermPtr t = mk_app("f", {mk_var(y), mk_var(x), mk_var(y)});
  auto vs = term_vars(t);
  REQUIRE(vs.size() == 2);
  CHECK(vs[0] == y);
  CHECK(vs[1] == x);
}

TEST_CASE("term equality is structural over all four term forms") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var u = uids.fresh_eigen("u");
  CHECK(term_equal(mk_const("c"), mk_const("c")));
  CHECK_FALSE(term_equal(mk_const("c"), mk_const("d")));
  CHECK(term_equal(mk_app("f", {mk_var(x)}), mk_app("f", {mk_var(x)})));
  CHECK_FALSE(term_equal(mk_app("f", {mk_var(x)}), mk_var(x)));
  CHECK(term_equal(mk_eigen_app(u, {mk_var(x)}), mk_eigen_app(u, {mk_var(x)})));
  CHECK(term_equal(mk_tuple({mk_var(x)}), mk_tuple({mk_var(x)})));
  CHECK_FALSE(term_equal(mk_tuple({mk_var(x)}), mk_tuple({})));
}

TEST_CASE("signature declares symbols once and rejects arity clashes") {
  Signature sig;
  CHECK(sig.known("t0"));
  CHECK(sig.arity("t0") == 0);
  sig.declare("f", 2);
  CHECK(sig.arity("f") == 2);
  sig.declare("f", 2);  // re-declaration at the same arity is fine
  CHECK_THROWS_AS(sig.declare("f", 3), std::runtime_error);
}

TEST_CASE("polarity predicates split the formula kinds") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  FormulaPtr an = mk_atom_neg("A", {});
  FormulaPtr ap = mk_atom_pos("p", {});
  CHECK(is_negative(an));
  CHECK(is_positive(ap));
  CHECK(is_negative(mk_lolli(mk_down(an), an)));
  CHECK(is_negative(mk_forall(x, an)));
  CHECK(is_negative(mk_up(ap)));
  CHECK(is_positive(mk_tensor(ap, ap)));
  CHECK(is_positive(mk_bang(an)));
  CHECK(is_positive(mk_exists(x, ap)));
  CHECK(is_positive(mk_down(an)));
}

TEST_CASE("binder instantiation substitutes exactly the bound variable") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var y = uids.fresh_existential("y");
  FormulaPtr body = mk_atom_neg("A", {mk_var(x), mk_var(y)});
  FormulaPtr inst = subst_formula(body, x, mk_const("c"));
  REQUIRE(inst->kind == FKind::AtomNeg);
  CHECK(term_equal(inst->args[0], mk_const("c")));
  CHECK(term_equal(inst->args[1], mk_var(y)));
}

TEST_CASE("alpha renaming refreshes binders but keeps shape and free variables") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var y = uids.fresh_existential("y");
  FormulaPtr f =
      mk_forall(x, mk_lolli(mk_down(mk_atom_neg("A", {mk_var(x), mk_var(y)})),
                            mk_atom_neg("B", {mk_var(x)})));
  FormulaPtr g = alpha_rename(f, uids);
  CHECK(g->binder.uid != x.uid);
  CHECK(g->binder.name == "x");
  CHECK(alpha_equal(f, g));
  auto fv = formula_free_vars(g);
  REQUIRE(fv.size() == 1);
  CHECK(fv[0] == y);
}

TEST_CASE("alpha equality ignores binder names but not structure") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var z = uids.fresh_existential("z");
  FormulaPtr f = mk_forall(x, mk_atom_neg("A", {mk_var(x)}));
  FormulaPtr g = mk_forall(z, mk_atom_neg("A", {mk_var(z)}));
  CHECK(alpha_equal(f, g));
  FormulaPtr h = mk_forall(z, mk_atom_neg("B", {mk_var(z)}));
  CHECK_FALSE(alpha_equal(f, h));
  CHECK_FALSE(alpha_equal(f, mk_atom_neg("A", {mk_var(x)})));
  // Distinct free variables are not identified.
  FormulaPtr p = mk_atom_neg("A", {mk_var(x)});
  FormulaPtr q = mk_atom_neg("A", {mk_var(z)});
  CHECK_FALSE(alpha_equal(p, q));
}

TEST_CASE("renaming maps terms and binder occurrences simultaneously") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var x2 = uids.fresh_existential("x'");
  FormulaPtr f = mk_exists(x, mk_atom_pos("p", {mk_var(x)}));
  std::unordered_map<int, Var> ren{{x.uid, x2}};
  FormulaPtr g = rename_formula(f, ren);
  CHECK(g->binder == x2);
  CHECK(term_equal(g->left->args[0], mk_var(x2)));
}

TEST_CASE("variable contexts keep insertion order and reject duplicates on merge") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var u = uids.fresh_eigen("u");
  auto [al, ar] = uids.fresh_special_pair("a");
  VarContext phi;
  phi = phi.appended(x).appended(u).appended(al);
  CHECK(phi.size() == 3);
  CHECK(phi.contains(x));
  CHECK_FALSE(phi.contains(ar));
  VarContext psi;
  psi = psi.appended(al).appended(ar);
  VarContext both = phi.merged(psi);
  CHECK(both.size() == 4);
  CHECK(both.vars()[0] == x);
  CHECK(both.vars()[3] == ar);
  auto tilde = both.existential_and_special();
  REQUIRE(tilde.size() == 3);  // x, aL, aR; the eigenvariable is dropped
  CHECK(tilde[0] == x);
  CHECK(tilde[1] == al);
  CHECK(tilde[2] == ar);
  CHECK(both.same_set(psi.merged(phi)));
  CHECK_FALSE(phi.same_set(psi));
}

TEST_CASE("skolemised free variables come from indices and closure contexts") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var y = uids.fresh_existential("y");
  Var a = uids.fresh_special("a");
  VarContext phix = VarContext{}.appended(x);
  SFormulaPtr atom = mk_satom_neg("A", {mk_var(x)}, phix);
  VarContext fv = sformula_free_vars(mk_sup(mk_sdown(atom)));
  CHECK(fv.size() == 1);
  CHECK(fv.contains(x));

  // A closure binds its body: only the closure context is free.
  VarContext phicl = VarContext{}.appended(y);
  SFormulaPtr bang = mk_sbang(a, phicl, empty_subst(), atom);
  VarContext fv2 = sformula_free_vars(bang);
  CHECK(fv2.contains(y));
  CHECK_FALSE(fv2.contains(x));
  CHECK(fv2.size() == 1);
}

TEST_CASE("skolemised renaming rewrites args, indices and closure annotations") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  Var x2 = uids.fresh_existential("x'");
  Var a = uids.fresh_special("a");
  SFormulaPtr atom =
      mk_satom_neg("A", {mk_var(x)}, VarContext{}.appended(x).appended(a));
  SFormulaPtr bang = mk_sbang(a, VarContext{}.appended(x), empty_subst(), atom);
  std::unordered_map<int, Var> ren{{x.uid, x2}};
  SFormulaPtr out = rename_sformula(bang, ren);
  CHECK(out->phi_cl.contains(x2));
  CHECK_FALSE(out->phi_cl.contains(x));
  CHECK(out->left->phi.contains(x2));
  CHECK(term_equal(out->left->args[0], mk_var(x2)));
  CHECK(sformula_equal(bang, bang));
  CHECK_FALSE(sformula_equal(bang, out));
}

TEST_CASE("printer disambiguates colliding display names by subscripts") {
  UidSource uids;
  Var x1 = uids.fresh_existential("x");
  Var x2 = uids.fresh_existential("x");
  Namer nm;
  CHECK(nm.name(x1) == "x");
  CHECK(nm.name(x2) == "x2");
  CHECK(nm.name(x1) == "x");  // stable across calls
}

TEST_CASE("printing a term uses the concrete input syntax") {
  UidSource uids;
  Var x = uids.fresh_existential("x");
  TermPtr t = mk_app("f", {mk_var(x), mk_const("t0")});
  CHECK(to_string(t) == "f(x,t0)");
}
