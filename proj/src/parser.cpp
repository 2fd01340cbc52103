#include "linskol/parser.hpp"

#include <cctype>
#include <sstream>

namespace linskol {

ParseError::ParseError(int line, int col, const std::string& msg)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(col) + ": " + msg),
      line(line),
      col(col) {}

namespace {

struct Token {
  enum Kind { Ident, LParen, RParen, Comma, Dot, Semi, Turnstile, Lolli,
              Star, Bang, Caret, End };
  Kind kind;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++i_;
      } else if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (i_ >= s_.size()) {
      tok_.kind = Token::End;
      tok_.text = "<end>";
      return;
    }
    char c = s_[i_];
    auto one = [&](Token::Kind k, const char* t) {
      tok_.kind = k;
      tok_.text = t;
      ++i_;
      ++col_;
    };
    switch (c) {
      case '(': one(Token::LParen, "("); return;
      case ')': one(Token::RParen, ")"); return;
      case ',': one(Token::Comma, ","); return;
      case '.': one(Token::Dot, "."); return;
      case ';': one(Token::Semi, ";"); return;
      case '*': one(Token::Star, "*"); return;
      case '!': one(Token::Bang, "!"); return;
      case '^': one(Token::Caret, "^"); return;
      case '|':
        if (i_ + 1 < s_.size() && s_[i_ + 1] == '-') {
          tok_.kind = Token::Turnstile;
          tok_.text = "|-";
          i_ += 2;
          col_ += 2;
          return;
        }
        throw ParseError(line_, col_, "unexpected '|'");
      case '-':
        if (i_ + 1 < s_.size() && s_[i_ + 1] == 'o') {
          tok_.kind = Token::Lolli;
          tok_.text = "-o";
          i_ += 2;
          col_ += 2;
          return;
        }
        throw ParseError(line_, col_, "unexpected '-'");
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
              s_[i_] == '_' || s_[i_] == '\'')) {
        id += s_[i_++];
        ++col_;
      }
      tok_.kind = Token::Ident;
      tok_.text = std::move(id);
      return;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c +
                                      "'");
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// Raw formula tree: structure resolved, polarity not yet.
struct Raw {
  enum Kind { Atom, Lolli, Tensor, Bang, Up, Down, Forall, Exists } kind;
  std::string pred;
  std::vector<TermPtr> args;
  Var binder;
  std::shared_ptr<Raw> left, right;
  int line = 0, col = 0;
};
using RawPtr = std::shared_ptr<Raw>;

struct Tables {
  Signature sig;
  std::map<std::string, bool> positive;     // predicate polarity
  std::map<std::string, int> pred_arity;
};

class Parser {
 public:
  Parser(const std::string& text, UidSource& uids, Tables& tabs)
      : lex_(text), uids_(uids), tabs_(tabs) {}

  RawPtr parse_formula() {
    RawPtr f = formula();
    return f;
  }

  // gamma ; delta |- goal
  void parse_sequent(std::vector<RawPtr>& gamma, std::vector<RawPtr>& delta,
                     RawPtr& goal) {
    std::vector<RawPtr> first = formula_list();
    if (lex_.peek().kind == Token::Semi) {
      lex_.take();
      gamma = std::move(first);
      delta = formula_list();
    } else {
      delta = std::move(first);
    }
    expect(Token::Turnstile, "'|-'");
    goal = formula();
  }

  void expect_end() {
    if (lex_.peek().kind != Token::End)
      throw ParseError(lex_.peek().line, lex_.peek().col,
                       "trailing input: '" + lex_.peek().text + "'");
  }

 private:
  Token expect(Token::Kind k, const char* what) {
    if (lex_.peek().kind != k)
      throw ParseError(lex_.peek().line, lex_.peek().col,
                       std::string("expected ") + what + ", found '" +
                           lex_.peek().text + "'");
    return lex_.take();
  }

  std::vector<RawPtr> formula_list() {
    std::vector<RawPtr> fs;
    if (lex_.peek().kind == Token::Turnstile ||
        lex_.peek().kind == Token::Semi)
      return fs;
    fs.push_back(formula());
    while (lex_.peek().kind == Token::Comma) {
      lex_.take();
      fs.push_back(formula());
    }
    return fs;
  }

  RawPtr formula() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Ident && (t.text == "fa" || t.text == "ex")) {
      Token q = lex_.take();
      Token x = expect(Token::Ident, "a variable name");
      if (x.text == "fa" || x.text == "ex" || x.text == "v")
        throw ParseError(x.line, x.col, "'" + x.text + "' is a reserved word");
      expect(Token::Dot, "'.'");
      Var v = uids_.fresh_existential(x.text);
      scope_.emplace_back(x.text, v);
      RawPtr body = formula();
      scope_.pop_back();
      auto r = std::make_shared<Raw>();
      r->kind = q.text == "fa" ? Raw::Forall : Raw::Exists;
      r->binder = v;
      r->left = body;
      r->line = q.line;
      r->col = q.col;
      return r;
    }
    return lolli();
  }

  RawPtr lolli() {
    RawPtr l = tensor();
    if (lex_.peek().kind == Token::Lolli) {
      Token op = lex_.take();
      RawPtr r = formula();  // right associative, quantifiers allowed
      auto f = std::make_shared<Raw>();
      f->kind = Raw::Lolli;
      f->left = l;
      f->right = r;
      f->line = op.line;
      f->col = op.col;
      return f;
    }
    return l;
  }

  RawPtr tensor() {
    RawPtr l = prefix();
    while (lex_.peek().kind == Token::Star) {
      Token op = lex_.take();
      RawPtr r = prefix();
      auto f = std::make_shared<Raw>();
      f->kind = Raw::Tensor;
      f->left = l;
      f->right = r;
      f->line = op.line;
      f->col = op.col;
      l = f;
    }
    return l;
  }

  RawPtr prefix() {
    const Token& t = lex_.peek();
    auto unary = [&](Raw::Kind k) {
      Token op = lex_.take();
      auto f = std::make_shared<Raw>();
      f->kind = k;
      f->left = prefix();
      f->line = op.line;
      f->col = op.col;
      return f;
    };
    if (t.kind == Token::Bang) return unary(Raw::Bang);
    if (t.kind == Token::Caret) return unary(Raw::Up);
    if (t.kind == Token::Ident && t.text == "v") return unary(Raw::Down);
    if (t.kind == Token::Ident && (t.text == "fa" || t.text == "ex"))
      return formula();  // quantifiers scope maximally to the right
    if (t.kind == Token::LParen) {
      lex_.take();
      RawPtr f = formula();
      expect(Token::RParen, "')'");
      return f;
    }
    if (t.kind == Token::Ident) return atom();
    throw ParseError(t.line, t.col,
                     "expected a formula, found '" + t.text + "'");
  }

  RawPtr atom() {
    Token p = expect(Token::Ident, "a predicate");
    if (p.text == "fa" || p.text == "ex" || p.text == "v")
      throw ParseError(p.line, p.col, "'" + p.text + "' is a reserved word");
    auto f = std::make_shared<Raw>();
    f->kind = Raw::Atom;
    f->pred = p.text;
    f->line = p.line;
    f->col = p.col;
    if (lex_.peek().kind == Token::LParen) {
      lex_.take();
      f->args.push_back(term());
      while (lex_.peek().kind == Token::Comma) {
        lex_.take();
        f->args.push_back(term());
      }
      expect(Token::RParen, "')'");
    }
    auto it = tabs_.pred_arity.find(f->pred);
    int ar = static_cast<int>(f->args.size());
    if (it == tabs_.pred_arity.end()) {
      tabs_.pred_arity[f->pred] = ar;
    } else if (it->second != ar) {
      throw ParseError(p.line, p.col,
                       "predicate '" + f->pred + "' used with arity " +
                           std::to_string(ar) + " but seen with " +
                           std::to_string(it->second));
    }
    return f;
  }

  TermPtr term() {
    Token id = expect(Token::Ident, "a term");
    // Bound occurrence (innermost scope wins)?
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == id.text) {
        if (lex_.peek().kind == Token::LParen)
          throw ParseError(id.line, id.col,
                           "variable '" + id.text + "' cannot take arguments");
        return mk_var(it->second);
      }
    }
    std::vector<TermPtr> args;
    if (lex_.peek().kind == Token::LParen) {
      lex_.take();
      args.push_back(term());
      while (lex_.peek().kind == Token::Comma) {
        lex_.take();
        args.push_back(term());
      }
      expect(Token::RParen, "')'");
    }
    try {
      tabs_.sig.declare(id.text, static_cast<int>(args.size()));
    } catch (const std::runtime_error& e) {
      throw ParseError(id.line, id.col, e.what());
    }
    return mk_app(id.text, std::move(args));
  }

  Lexer lex_;
  UidSource& uids_;
  Tables& tabs_;
  std::vector<std::pair<std::string, Var>> scope_;
};

// ---------------------------------------------------------------------------
// Polarisation

class Polariser {
 public:
  Polariser(const Tables& tabs, const ParseOptions& opts)
      : tabs_(tabs), opts_(opts) {}

  FormulaPtr neg(const RawPtr& r) {
    switch (r->kind) {
      case Raw::Atom:
        if (!positive(r->pred)) return mk_atom_neg(r->pred, r->args);
        return shift_up(r, "positive atom '" + r->pred + "'");
      case Raw::Lolli:
        return mk_lolli(pos(r->left), neg(r->right));
      case Raw::Forall:
        return mk_forall(r->binder, neg(r->left));
      case Raw::Up:
        return mk_up(pos(r->left));
      case Raw::Exists:
        return shift_up(r, "'ex'");
      case Raw::Tensor:
        return shift_up(r, "'*'");
      case Raw::Bang:
        return shift_up(r, "'!'");
      case Raw::Down:
        return shift_up(r, "'v'");
    }
    throw std::logic_error("unreachable");
  }

  FormulaPtr pos(const RawPtr& r) {
    switch (r->kind) {
      case Raw::Atom:
        if (positive(r->pred)) return mk_atom_pos(r->pred, r->args);
        return shift_down(r, "negative atom '" + r->pred + "'");
      case Raw::Tensor:
        return mk_tensor(pos(r->left), pos(r->right));
      case Raw::Bang:
        return mk_bang(neg(r->left));
      case Raw::Exists:
        return mk_exists(r->binder, pos(r->left));
      case Raw::Down:
        return mk_down(neg(r->left));
      case Raw::Lolli:
        return shift_down(r, "'-o'");
      case Raw::Forall:
        return shift_down(r, "'fa'");
      case Raw::Up:
        return shift_down(r, "'^'");
    }
    throw std::logic_error("unreachable");
  }

  // Is the raw tree naturally negative at the top?
  bool naturally_negative(const RawPtr& r) const {
    switch (r->kind) {
      case Raw::Atom: return !positive(r->pred);
      case Raw::Lolli:
      case Raw::Forall:
      case Raw::Up: return true;
      default: return false;
    }
  }

 private:
  bool positive(const std::string& pred) const {
    auto it = tabs_.positive.find(pred);
    return it != tabs_.positive.end() && it->second;
  }
  FormulaPtr shift_up(const RawPtr& r, const std::string& what) {
    if (!opts_.auto_shift)
      throw ParseError(r->line, r->col,
                       what + " is positive but appears in a negative "
                              "position (strict mode)");
    return mk_up(pos(r));
  }
  FormulaPtr shift_down(const RawPtr& r, const std::string& what) {
    if (!opts_.auto_shift)
      throw ParseError(r->line, r->col,
                       what + " is negative but appears in a positive "
                              "position (strict mode)");
    return mk_down(neg(r));
  }

  const Tables& tabs_;
  const ParseOptions& opts_;
};

// ---------------------------------------------------------------------------
// Directives

// Splits directive lines from the body and fills the tables.
std::string strip_directives(const std::string& text, Tables& tabs) {
  std::istringstream in(text);
  std::string line, body;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i < line.size() && line[i] == '%') {
      std::istringstream d(line.substr(i + 1));
      std::string kw;
      d >> kw;
      if (kw == "pos" || kw == "neg") {
        std::string p;
        if (!(d >> p))
          throw ParseError(lineno, static_cast<int>(i) + 1,
                           "%" + kw + " needs a predicate name");
        bool want = kw == "pos";
        auto it = tabs.positive.find(p);
        if (it != tabs.positive.end() && it->second != want)
          throw ParseError(lineno, static_cast<int>(i) + 1,
                           "predicate '" + p + "' declared both %pos and %neg");
        tabs.positive[p] = want;
      } else if (kw == "const") {
        std::string f;
        int arity = 0;
        if (!(d >> f))
          throw ParseError(lineno, static_cast<int>(i) + 1,
                           "%const needs a symbol name");
        d >> arity;
        try {
          tabs.sig.declare(f, arity);
        } catch (const std::runtime_error& e) {
          throw ParseError(lineno, static_cast<int>(i) + 1, e.what());
        }
      } else {
        throw ParseError(lineno, static_cast<int>(i) + 1,
                         "unknown directive '%" + kw + "'");
      }
      body += "\n";  // keep line numbers aligned
    } else {
      body += line;
      body += "\n";
    }
  }
  return body;
}

}  // namespace

ParseResult parse_sequent_text(const std::string& text, UidSource& uids,
                               const ParseOptions& opts) {
  Tables tabs;
  std::string body = strip_directives(text, tabs);
  Parser p(body, uids, tabs);
  std::vector<RawPtr> gamma, delta;
  RawPtr goal;
  p.parse_sequent(gamma, delta, goal);
  p.expect_end();

  Polariser pol(tabs, opts);
  ParseResult res;
  for (const auto& g : gamma) res.sequent.gamma.push_back(pol.neg(g));
  for (const auto& d : delta) res.sequent.delta.push_back(pol.pos(d));
  res.sequent.goal = pol.neg(goal);
  res.signature = tabs.sig;
  res.positive_preds = tabs.positive;
  return res;
}

ParsedFormula parse_formula_text(const std::string& text, UidSource& uids,
                                 const ParseOptions& opts) {
  Tables tabs;
  std::string body = strip_directives(text, tabs);
  Parser p(body, uids, tabs);
  RawPtr raw = p.parse_formula();
  p.expect_end();

  Polariser pol(tabs, opts);
  ParsedFormula res;
  res.formula = pol.naturally_negative(raw) ? pol.neg(raw) : pol.pos(raw);
  res.signature = tabs.sig;
  res.positive_preds = tabs.positive;
  return res;
}

std::string render_declarations(const std::map<std::string, bool>& positive,
                                const Signature& sig) {
  std::string out;
  for (const auto& [p, is_pos] : positive)
    out += std::string(is_pos ? "%pos " : "%neg ") + p + "\n";
  for (const auto& [f, ar] : sig.symbols()) {
    if (f == Signature::t0_name() && ar == 0) continue;
    out += "%const " + f;
    if (ar != 0) out += " " + std::to_string(ar);
    out += "\n";
  }
  return out;
}

}  // namespace linskol
