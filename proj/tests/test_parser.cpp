// Concrete syntax: parsing, polarisation, directives, error positions.
#include "doctest.h"
#include "linskol/parser.hpp"
#include "linskol/syntax.hpp"

using namespace linskol;

namespace {
ParseResult parse(const std::string& text, UidSource& uids,
                  bool auto_shift = true) {
  ParseOptions opts;
  opts.auto_shift = auto_shift;
  return parse_sequent_text(text, uids, opts);
}
}  // namespace

TEST_CASE("a sequent splits into gamma, delta and goal") {
  UidSource uids;
  auto res = parse("C ; A, B |- D", uids);
  REQUIRE(res.sequent.gamma.size() == 1);
  REQUIRE(res.sequent.delta.size() == 2);
  CHECK(res.sequent.gamma[0]->kind == FKind::AtomNeg);
  CHECK(res.sequent.gamma[0]->pred == "C");
  // Linear assumptions are polarised positively: a negative atom gets a down.
  CHECK(res.sequent.delta[0]->kind == FKind::Down);
  CHECK(res.sequent.delta[0]->left->pred == "A");
  CHECK(res.sequent.goal->pred == "D");
}

TEST_CASE("the semicolon is optional when gamma is empty") {
  UidSource uids;
  auto res = parse("A |- B", uids);
  CHECK(res.sequent.gamma.empty());
  CHECK(res.sequent.delta.size() == 1);
  auto res2 = parse("; A |- B", uids);
  CHECK(res2.sequent.gamma.empty());
  CHECK(res2.sequent.delta.size() == 1);
  auto res3 = parse("|- B", uids);
  CHECK(res3.sequent.delta.empty());
  CHECK(res3.sequent.goal->pred == "B");
}

TEST_CASE("implication chains polarise with minimal shifts") {
  UidSource uids;
  auto res = parse("fa x. (A(x) -o B(x)) |- C", uids);
  FormulaPtr f = res.sequent.delta[0];
  // down(forall x. (down A(x)) -o B(x))
  REQUIRE(f->kind == FKind::Down);
  f = f->left;
  REQUIRE(f->kind == FKind::Forall);
  f = f->left;
  REQUIRE(f->kind == FKind::Lolli);
  CHECK(f->left->kind == FKind::Down);
  CHECK(f->left->left->kind == FKind::AtomNeg);
  CHECK(f->right->kind == FKind::AtomNeg);
  CHECK(term_equal(f->right->args[0], mk_var(f->right->args[0]->var)));
}

TEST_CASE("a quantifier after a connective binds the rest of the operand") {
  UidSource uids;
  auto res = parse_formula_text("A * fa u. B(u)", uids);
  FormulaPtr f = res.formula;
  REQUIRE(f->kind == FKind::Tensor);
  CHECK(f->left->kind == FKind::Down);
  REQUIRE(f->right->kind == FKind::Down);
  REQUIRE(f->right->left->kind == FKind::Forall);
  CHECK(f->right->left->left->kind == FKind::AtomNeg);

  auto res2 = parse_formula_text("! fa u. A(u)", uids);
  REQUIRE(res2.formula->kind == FKind::Bang);
  CHECK(res2.formula->left->kind == FKind::Forall);
}

TEST_CASE("existential goals get an up shift") {
  UidSource uids;
  auto res = parse("|- ex x. B(x)", uids);
  FormulaPtr g = res.sequent.goal;
  REQUIRE(g->kind == FKind::Up);
  REQUIRE(g->left->kind == FKind::Exists);
  CHECK(g->left->left->kind == FKind::Down);
  CHECK(g->left->left->left->kind == FKind::AtomNeg);
}

TEST_CASE("explicit shifts parse and round-trip through the printer") {
  UidSource uids;
  auto res = parse_formula_text("fa x. (v A(x) -o ^ (B(x) * v C))", uids);
  REQUIRE(res.formula->kind == FKind::Forall);
  std::string printed =
      render_declarations(res.positive_preds, res.signature) +
      to_string(res.formula);
  UidSource uids2;
  auto back = parse_formula_text(printed, uids2);
  CHECK(alpha_equal(res.formula, back.formula));
}

TEST_CASE("declared positive atoms stay bare in positive positions") {
  UidSource uids;
  auto res = parse("%pos p\np |- ^ p", uids);
  CHECK(res.sequent.delta[0]->kind == FKind::AtomPos);
  REQUIRE(res.sequent.goal->kind == FKind::Up);
  CHECK(res.sequent.goal->left->kind == FKind::AtomPos);
  CHECK(res.positive_preds.at("p") == true);
}

TEST_CASE("conflicting polarity directives are rejected") {
  UidSource uids;
  CHECK_THROWS_WITH_AS(parse("%pos p\n%neg p\np |- p", uids),
                       doctest::Contains("declared both"), ParseError);
  CHECK_THROWS_WITH_AS(parse("%flip p\np |- p", uids),
                       doctest::Contains("unknown directive"), ParseError);
}

TEST_CASE("constant directives declare arities and re-render") {
  UidSource uids;
  auto res = parse("%const f 2\n%const c\nA(f(c,c)) |- A(c)", uids);
  CHECK(res.signature.arity("f") == 2);
  CHECK(res.signature.arity("c") == 0);
  std::string decls = render_declarations(res.positive_preds, res.signature);
  CHECK(decls.find("%const f 2\n") != std::string::npos);
  CHECK(decls.find("%const c\n") != std::string::npos);
  CHECK(decls.find("t0") == std::string::npos);
}

TEST_CASE("strict mode reports the connective at the polarity mismatch") {
  UidSource uids;
  CHECK_THROWS_WITH_AS(
      parse("A |- B", uids, /*auto_shift=*/false),
      doctest::Contains("negative atom 'A' is negative but appears in a "
                        "positive position (strict mode)"),
      ParseError);
  CHECK_THROWS_WITH_AS(parse("v (A * B) |- C", uids, false),
                       doctest::Contains("'*' is positive"), ParseError);
  try {
    parse("# comment line\n\nA |- ex x. B", uids, false);
    FAIL("expected a strict-mode error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.col == 1);
    CHECK(std::string(e.what()).find("'A'") != std::string::npos);
  }
}

TEST_CASE("reserved words cannot name binders or atoms") {
  UidSource uids;
  CHECK_THROWS_WITH_AS(parse("fa fa. A |- B", uids),
                       doctest::Contains("reserved word"), ParseError);
  CHECK_THROWS_WITH_AS(parse("ex v. A |- B", uids),
                       doctest::Contains("reserved word"), ParseError);
}

TEST_CASE("bound variables cannot take arguments") {
  UidSource uids;
  CHECK_THROWS_WITH_AS(parse("fa x. A(x(c)) |- B", uids),
                       doctest::Contains("cannot take arguments"), ParseError);
}

TEST_CASE("arity clashes are reported for predicates and symbols") {
  UidSource uids;
  CHECK_THROWS_WITH_AS(parse("A(c) |- A", uids),
                       doctest::Contains("predicate 'A' used with arity 0"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse("A(f(c),f) |- B", uids),
                       doctest::Contains("symbol 'f' used with arity 0"),
                       ParseError);
}

TEST_CASE("inner binders shadow outer ones") {
  UidSource uids;
  auto res = parse_formula_text("fa x. (v A(x) -o fa x. B(x))", uids);
  FormulaPtr outer = res.formula;
  REQUIRE(outer->kind == FKind::Forall);
  FormulaPtr inner = outer->left->right;
  REQUIRE(inner->kind == FKind::Forall);
  CHECK(inner->binder.uid != outer->binder.uid);
  CHECK(outer->left->left->left->args[0]->var == outer->binder);
  CHECK(inner->left->args[0]->var == inner->binder);
  CHECK(formula_free_vars(res.formula).empty());
}

TEST_CASE("unbound term identifiers become signature constants") {
  UidSource uids;
  auto res = parse("A(c) |- fa x. B(x, g(c))", uids);
  CHECK(res.signature.known("c"));
  CHECK(res.signature.arity("g") == 1);
  FormulaPtr g = res.sequent.goal;
  REQUIRE(g->kind == FKind::Forall);
  CHECK(g->left->args[0]->kind == Term::Kind::Variable);
  CHECK(g->left->args[1]->kind == Term::Kind::Application);
}

TEST_CASE("comments and blank lines do not disturb error positions") {
  UidSource uids;
  try {
    parse("%const k\n# nothing here\nA |- B C", uids);
    FAIL("expected trailing-input error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("trailing input") != std::string::npos);
  }
}

TEST_CASE("sequent parses reproduce the worked linear syllogism") {
  UidSource uids;
  auto res =
      parse("fa x1. (A(x1) -o B(x1)), fa x2. ex u. A(u) |- ex x3. B(x3)", uids);
  REQUIRE(res.sequent.delta.size() == 2);
  FormulaPtr second = res.sequent.delta[1];
  REQUIRE(second->kind == FKind::Down);
  REQUIRE(second->left->kind == FKind::Forall);
  REQUIRE(second->left->left->kind == FKind::Up);
  REQUIRE(second->left->left->left->kind == FKind::Exists);
  CHECK(second->left->left->left->left->kind == FKind::Down);
  REQUIRE(res.sequent.goal->kind == FKind::Up);
  CHECK(res.sequent.goal->left->kind == FKind::Exists);
}
