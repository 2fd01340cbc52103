// Concrete syntax for terms, polarised formulas and sequents.
//
//   sequent   :=  [gamma] ";" [delta] "|-" formula   (";" optional when gamma
//                 is empty; formulas separated by ",")
//   formula   :=  "fa" x "." formula | "ex" x "." formula | lolli
//   lolli     :=  tensor [ "-o" formula ]            (right associative)
//   tensor    :=  prefix { "*" prefix }              (left associative)
//   prefix    :=  "!" prefix | "^" prefix | "v" prefix | quantified
//                 | "(" formula ")" | atom           (quantifiers bind the
//                 rest of the operand: A * fa u. B(u) is A ⊗ (∀u. B(u)))
//   atom      :=  pred [ "(" term { "," term } ")" ]
//   term      :=  ident [ "(" term { "," term } ")" ]
//
// Directive lines start with '%': "%pos p" / "%neg p" declare predicate
// polarity (default negative), "%const f [arity]" declares a function symbol.
// '#' starts a line comment. Quantifiers scope maximally to the right;
// identifiers bound by an enclosing quantifier are variables, all other term
// identifiers are signature symbols. "fa", "ex" and "v" are reserved words.
//
// In auto-shift mode (default) minimal shifts are inserted at polarity
// mismatches; in strict mode a mismatch is an error naming the connective.
#pragma once

#include "linskol/syntax.hpp"

namespace linskol {

struct ParseOptions {
  bool auto_shift = true;
};

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line, int col, const std::string& msg);
};

struct ParseResult {
  Sequent sequent;
  Signature signature;
  std::map<std::string, bool> positive_preds;  // pred -> declared positive
};

// Parses declarations plus one sequent.
ParseResult parse_sequent_text(const std::string& text, UidSource& uids,
                               const ParseOptions& opts = {});

// Parses declarations plus one formula. The formula is polarised negatively
// when its outermost connective is negative, positively otherwise.
struct ParsedFormula {
  FormulaPtr formula;
  Signature signature;
  std::map<std::string, bool> positive_preds;
};
ParsedFormula parse_formula_text(const std::string& text, UidSource& uids,
                                 const ParseOptions& opts = {});

// Renders "%pos"/"%const" directive lines matching the given tables, so that
// printed formulas can be re-parsed under the same declarations.
std::string render_declarations(const std::map<std::string, bool>& positive,
                                const Signature& sig);

}  // namespace linskol
