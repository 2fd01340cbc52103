#include "linskol/syntax.hpp"

#include <algorithm>
#include <sstream>

#include "linskol/substitution.hpp"

namespace linskol {

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Existential: return "existential";
    case VarKind::Eigen: return "eigen";
    case VarKind::Special: return "special";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Terms

TermPtr mk_var(Var v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Variable;
  t->var = std::move(v);
  return t;
}

TermPtr mk_app(std::string sym, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Application;
  t->sym = std::move(sym);
  t->args = std::move(args);
  return t;
}

TermPtr mk_const(std::string sym) { return mk_app(std::move(sym), {}); }

TermPtr mk_tuple(std::vector<TermPtr> elems) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Tuple;
  t->args = std::move(elems);
  return t;
}

TermPtr mk_eigen_app(Var head, std::vector<TermPtr> args) {
  assert(head.kind == VarKind::Eigen);
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::EigenApp;
  t->var = std::move(head);
  t->args = std::move(args);
  return t;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Variable:
      return a->var.uid == b->var.uid;
    case Term::Kind::Application:
      if (a->sym != b->sym) return false;
      break;
    case Term::Kind::EigenApp:
      if (a->var.uid != b->var.uid) return false;
      break;
    case Term::Kind::Tuple:
      break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool occurs_in_term(const Var& v, const TermPtr& t) {
  if (!t) return false;
  if (t->kind == Term::Kind::Variable) return t->var.uid == v.uid;
  if (t->kind == Term::Kind::EigenApp && t->var.uid == v.uid) return true;
  for (const auto& a : t->args)
    if (occurs_in_term(v, a)) return true;
  return false;
}

void collect_vars(const TermPtr& t, std::vector<Var>& out,
                  std::unordered_set<int>& seen) {
  if (!t) return;
  if (t->kind == Term::Kind::Variable || t->kind == Term::Kind::EigenApp) {
    if (seen.insert(t->var.uid).second) out.push_back(t->var);
  }
  for (const auto& a : t->args) collect_vars(a, out, seen);
}

std::vector<Var> term_vars(const TermPtr& t) {
  std::vector<Var> out;
  std::unordered_set<int> seen;
  collect_vars(t, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// Signature

void Signature::declare(const std::string& name, int arity) {
  auto it = arity_.find(name);
  if (it == arity_.end()) {
    arity_[name] = arity;
    return;
  }
  if (it->second != arity)
    throw std::runtime_error("symbol '" + name + "' used with arity " +
                             std::to_string(arity) + " but declared with " +
                             std::to_string(it->second));
}

int Signature::arity(const std::string& name) const {
  auto it = arity_.find(name);
  if (it == arity_.end())
    throw std::runtime_error("unknown symbol '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// LJF formulas

bool is_negative(FKind k) {
  return k == FKind::AtomNeg || k == FKind::Lolli || k == FKind::Forall ||
         k == FKind::Up;
}
bool is_positive(FKind k) { return !is_negative(k); }
bool is_negative(const FormulaPtr& f) { return f && is_negative(f->kind); }
bool is_positive(const FormulaPtr& f) { return f && is_positive(f->kind); }

static std::shared_ptr<Formula> mk_f(FKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr mk_atom_neg(std::string pred, std::vector<TermPtr> args) {
  auto f = mk_f(FKind::AtomNeg);
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}
FormulaPtr mk_atom_pos(std::string pred, std::vector<TermPtr> args) {
  auto f = mk_f(FKind::AtomPos);
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}
FormulaPtr mk_lolli(FormulaPtr p, FormulaPtr n) {
  assert(is_positive(p) && is_negative(n));
  auto f = mk_f(FKind::Lolli);
  f->left = std::move(p);
  f->right = std::move(n);
  return f;
}
FormulaPtr mk_forall(Var x, FormulaPtr n) {
  assert(is_negative(n));
  auto f = mk_f(FKind::Forall);
  f->binder = std::move(x);
  f->left = std::move(n);
  return f;
}
FormulaPtr mk_up(FormulaPtr p) {
  assert(is_positive(p));
  auto f = mk_f(FKind::Up);
  f->left = std::move(p);
  return f;
}
FormulaPtr mk_tensor(FormulaPtr p1, FormulaPtr p2) {
  assert(is_positive(p1) && is_positive(p2));
  auto f = mk_f(FKind::Tensor);
  f->left = std::move(p1);
  f->right = std::move(p2);
  return f;
}
FormulaPtr mk_bang(FormulaPtr n) {
  assert(is_negative(n));
  auto f = mk_f(FKind::Bang);
  f->left = std::move(n);
  return f;
}
FormulaPtr mk_exists(Var x, FormulaPtr p) {
  assert(is_positive(p));
  auto f = mk_f(FKind::Exists);
  f->binder = std::move(x);
  f->left = std::move(p);
  return f;
}
FormulaPtr mk_down(FormulaPtr n) {
  assert(is_negative(n));
  auto f = mk_f(FKind::Down);
  f->left = std::move(n);
  return f;
}

static TermPtr term_subst_var(const TermPtr& t, const Var& x,
                              const TermPtr& image) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Variable:
      return t->var.uid == x.uid ? image : t;
    case Term::Kind::Application:
    case Term::Kind::Tuple:
    case Term::Kind::EigenApp: {
      bool changed = false;
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) {
        auto a2 = term_subst_var(a, x, image);
        changed = changed || a2 != a;
        args.push_back(a2);
      }
      if (!changed) return t;
      auto t2 = std::make_shared<Term>(*t);
      t2->args = std::move(args);
      return t2;
    }
  }
  return t;
}

FormulaPtr subst_formula(const FormulaPtr& f, const Var& x, const TermPtr& t) {
  if (!f) return f;
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos: {
      bool changed = false;
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const auto& a : f->args) {
        auto a2 = term_subst_var(a, x, t);
        changed = changed || a2 != a;
        args.push_back(a2);
      }
      if (!changed) return f;
      auto f2 = std::make_shared<Formula>(*f);
      f2->args = std::move(args);
      return f2;
    }
    case FKind::Forall:
    case FKind::Exists: {
      // Alpha-distinct by construction: binders never shadow.
      assert(f->binder.uid != x.uid);
      auto b = subst_formula(f->left, x, t);
      if (b == f->left) return f;
      auto f2 = std::make_shared<Formula>(*f);
      f2->left = b;
      return f2;
    }
    default: {
      auto l = subst_formula(f->left, x, t);
      auto r = subst_formula(f->right, x, t);
      if (l == f->left && r == f->right) return f;
      auto f2 = std::make_shared<Formula>(*f);
      f2->left = l;
      f2->right = r;
      return f2;
    }
  }
}

TermPtr rename_term(const TermPtr& t, const std::unordered_map<int, Var>& ren) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Variable: {
      auto it = ren.find(t->var.uid);
      return it == ren.end() ? t : mk_var(it->second);
    }
    case Term::Kind::EigenApp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(rename_term(a, ren));
      auto it = ren.find(t->var.uid);
      Var head = it == ren.end() ? t->var : it->second;
      assert(head.kind == VarKind::Eigen);
      return mk_eigen_app(head, std::move(args));
    }
    case Term::Kind::Application:
    case Term::Kind::Tuple: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(rename_term(a, ren));
      auto t2 = std::make_shared<Term>(*t);
      t2->args = std::move(args);
      return t2;
    }
  }
  return t;
}

FormulaPtr rename_formula(const FormulaPtr& f,
                          const std::unordered_map<int, Var>& ren) {
  if (!f) return f;
  auto f2 = std::make_shared<Formula>(*f);
  for (auto& a : f2->args) a = rename_term(a, ren);
  if (f->kind == FKind::Forall || f->kind == FKind::Exists) {
    auto it = ren.find(f->binder.uid);
    if (it != ren.end()) f2->binder = it->second;
  }
  f2->left = rename_formula(f->left, ren);
  f2->right = rename_formula(f->right, ren);
  return f2;
}

static FormulaPtr alpha_rename_rec(const FormulaPtr& f, UidSource& uids,
                                   std::unordered_map<int, Var>& ren) {
  if (!f) return f;
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos: {
      auto f2 = std::make_shared<Formula>(*f);
      for (auto& a : f2->args) a = rename_term(a, ren);
      return f2;
    }
    case FKind::Forall:
    case FKind::Exists: {
      Var fresh = uids.fresh_var(f->binder.name, f->binder.kind);
      auto saved = ren;
      ren[f->binder.uid] = fresh;
      auto body = alpha_rename_rec(f->left, uids, ren);
      ren = saved;
      auto f2 = std::make_shared<Formula>(*f);
      f2->binder = fresh;
      f2->left = body;
      return f2;
    }
    default: {
      auto f2 = std::make_shared<Formula>(*f);
      f2->left = alpha_rename_rec(f->left, uids, ren);
      f2->right = alpha_rename_rec(f->right, uids, ren);
      return f2;
    }
  }
}

FormulaPtr alpha_rename(const FormulaPtr& f, UidSource& uids) {
  std::unordered_map<int, Var> ren;
  return alpha_rename_rec(f, uids, ren);
}

static bool term_alpha_equal(const TermPtr& a, const TermPtr& b,
                             const std::unordered_map<int, int>& env) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  if (a->kind == Term::Kind::Variable || a->kind == Term::Kind::EigenApp) {
    auto it = env.find(a->var.uid);
    int want = it == env.end() ? a->var.uid : it->second;
    if (want != b->var.uid) return false;
  }
  if (a->kind == Term::Kind::Application && a->sym != b->sym) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_alpha_equal(a->args[i], b->args[i], env)) return false;
  return true;
}

static bool alpha_equal_rec(const FormulaPtr& a, const FormulaPtr& b,
                            std::unordered_map<int, int>& env) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_alpha_equal(a->args[i], b->args[i], env)) return false;
      return true;
    }
    case FKind::Forall:
    case FKind::Exists: {
      auto saved = env;
      env[a->binder.uid] = b->binder.uid;
      bool ok = alpha_equal_rec(a->left, b->left, env);
      env = saved;
      return ok;
    }
    default:
      return alpha_equal_rec(a->left, b->left, env) &&
             alpha_equal_rec(a->right, b->right, env);
  }
}

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  std::unordered_map<int, int> env;
  return alpha_equal_rec(a, b, env);
}

static void formula_fv_rec(const FormulaPtr& f, std::unordered_set<int>& bound,
                           std::vector<Var>& out,
                           std::unordered_set<int>& seen) {
  if (!f) return;
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos:
      for (const auto& a : f->args) {
        std::vector<Var> vs = term_vars(a);
        for (const auto& v : vs)
          if (!bound.count(v.uid) && seen.insert(v.uid).second)
            out.push_back(v);
      }
      return;
    case FKind::Forall:
    case FKind::Exists: {
      bool inserted = bound.insert(f->binder.uid).second;
      formula_fv_rec(f->left, bound, out, seen);
      if (inserted) bound.erase(f->binder.uid);
      return;
    }
    default:
      formula_fv_rec(f->left, bound, out, seen);
      formula_fv_rec(f->right, bound, out, seen);
  }
}

std::vector<Var> formula_free_vars(const FormulaPtr& f) {
  std::unordered_set<int> bound, seen;
  std::vector<Var> out;
  formula_fv_rec(f, bound, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// VarContext

VarContext::VarContext(std::vector<Var> vars) {
  for (auto& v : vars) {
    if (uids_.insert(v.uid).second) vars_.push_back(std::move(v));
  }
}

VarContext VarContext::appended(const Var& v) const {
  assert(!contains(v.uid) && "variable context entries must be distinct");
  VarContext c = *this;
  c.uids_.insert(v.uid);
  c.vars_.push_back(v);
  return c;
}

VarContext VarContext::merged(const VarContext& o) const {
  VarContext c = *this;
  for (const auto& v : o.vars_) {
    if (c.uids_.insert(v.uid).second) c.vars_.push_back(v);
  }
  return c;
}

std::vector<Var> VarContext::existential_and_special() const {
  std::vector<Var> out;
  for (const auto& v : vars_)
    if (v.kind != VarKind::Eigen) out.push_back(v);
  return out;
}

bool VarContext::same_set(const VarContext& o) const {
  if (size() != o.size()) return false;
  for (const auto& v : vars_)
    if (!o.contains(v.uid)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// SLJF formulas

bool is_negative(SKind k) {
  return k == SKind::AtomNeg || k == SKind::Lolli || k == SKind::Up;
}
bool is_positive(SKind k) { return !is_negative(k); }
bool is_negative(const SFormulaPtr& f) { return f && is_negative(f->kind); }
bool is_positive(const SFormulaPtr& f) { return f && is_positive(f->kind); }

static std::shared_ptr<SFormula> mk_s(SKind k) {
  auto f = std::make_shared<SFormula>();
  f->kind = k;
  return f;
}

SFormulaPtr mk_satom_neg(std::string pred, std::vector<TermPtr> args,
                         VarContext phi) {
  auto f = mk_s(SKind::AtomNeg);
  f->pred = std::move(pred);
  f->args = std::move(args);
  f->phi = std::move(phi);
  return f;
}
SFormulaPtr mk_satom_pos(std::string pred, std::vector<TermPtr> args,
                         VarContext phi) {
  auto f = mk_s(SKind::AtomPos);
  f->pred = std::move(pred);
  f->args = std::move(args);
  f->phi = std::move(phi);
  return f;
}
SFormulaPtr mk_slolli(SFormulaPtr p, SFormulaPtr n) {
  assert(is_positive(p) && is_negative(n));
  auto f = mk_s(SKind::Lolli);
  f->left = std::move(p);
  f->right = std::move(n);
  return f;
}
SFormulaPtr mk_sup(SFormulaPtr p) {
  assert(is_positive(p));
  auto f = mk_s(SKind::Up);
  f->left = std::move(p);
  return f;
}
SFormulaPtr mk_stensor(SFormulaPtr p1, SFormulaPtr p2) {
  assert(is_positive(p1) && is_positive(p2));
  auto f = mk_s(SKind::Tensor);
  f->left = std::move(p1);
  f->right = std::move(p2);
  return f;
}
SFormulaPtr mk_sbang(Var a, VarContext phi_cl,
                     std::shared_ptr<const Substitution> sigma_cl,
                     SFormulaPtr body) {
  assert(is_negative(body));
  assert(a.kind == VarKind::Special);
  auto f = mk_s(SKind::BangClosure);
  f->a = std::move(a);
  f->phi_cl = std::move(phi_cl);
  f->sigma_cl = sigma_cl ? std::move(sigma_cl) : empty_subst();
  f->left = std::move(body);
  return f;
}
SFormulaPtr mk_sdown(SFormulaPtr n) {
  assert(is_negative(n));
  auto f = mk_s(SKind::Down);
  f->left = std::move(n);
  return f;
}

VarContext sformula_free_vars(const SFormulaPtr& f) {
  if (!f) return {};
  switch (f->kind) {
    case SKind::AtomNeg:
    case SKind::AtomPos:
      return f->phi;
    case SKind::BangClosure:
      return f->phi_cl;
    case SKind::Lolli:
    case SKind::Tensor:
      return sformula_free_vars(f->left).merged(sformula_free_vars(f->right));
    case SKind::Up:
    case SKind::Down:
      return sformula_free_vars(f->left);
  }
  return {};
}

void sformula_all_vars(const SFormulaPtr& f, std::vector<Var>& out,
                       std::unordered_set<int>& seen) {
  if (!f) return;
  auto add = [&](const Var& v) {
    if (seen.insert(v.uid).second) out.push_back(v);
  };
  switch (f->kind) {
    case SKind::AtomNeg:
    case SKind::AtomPos:
      for (const auto& v : f->phi) add(v);
      for (const auto& t : f->args) collect_vars(t, out, seen);
      return;
    case SKind::BangClosure:
      add(f->a);
      for (const auto& v : f->phi_cl) add(v);
      for (const auto& b : f->sigma_cl->entries()) {
        add(b.var);
        collect_vars(b.image, out, seen);
      }
      sformula_all_vars(f->left, out, seen);
      return;
    default:
      sformula_all_vars(f->left, out, seen);
      sformula_all_vars(f->right, out, seen);
  }
}

static VarContext rename_context(const VarContext& phi,
                                 const std::unordered_map<int, Var>& ren) {
  std::vector<Var> vs;
  vs.reserve(phi.size());
  for (const auto& v : phi) {
    auto it = ren.find(v.uid);
    vs.push_back(it == ren.end() ? v : it->second);
  }
  return VarContext(std::move(vs));
}

SFormulaPtr rename_sformula(const SFormulaPtr& f,
                            const std::unordered_map<int, Var>& ren) {
  if (!f) return f;
  switch (f->kind) {
    case SKind::AtomNeg:
    case SKind::AtomPos: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const auto& t : f->args) args.push_back(rename_term(t, ren));
      auto f2 = std::make_shared<SFormula>(*f);
      f2->args = std::move(args);
      f2->phi = rename_context(f->phi, ren);
      return f2;
    }
    case SKind::BangClosure: {
      auto f2 = std::make_shared<SFormula>(*f);
      auto it = ren.find(f->a.uid);
      if (it != ren.end()) f2->a = it->second;
      f2->phi_cl = rename_context(f->phi_cl, ren);
      f2->sigma_cl = make_subst(f->sigma_cl->renamed(ren));
      f2->left = rename_sformula(f->left, ren);
      return f2;
    }
    default: {
      auto f2 = std::make_shared<SFormula>(*f);
      f2->left = rename_sformula(f->left, ren);
      f2->right = rename_sformula(f->right, ren);
      return f2;
    }
  }
}

bool sformula_equal(const SFormulaPtr& a, const SFormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SKind::AtomNeg:
    case SKind::AtomPos: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_equal(a->args[i], b->args[i])) return false;
      return a->phi.same_set(b->phi);
    }
    case SKind::BangClosure:
      return a->a.uid == b->a.uid && a->phi_cl.same_set(b->phi_cl) &&
             *a->sigma_cl == *b->sigma_cl && sformula_equal(a->left, b->left);
    default:
      return sformula_equal(a->left, b->left) &&
             sformula_equal(a->right, b->right);
  }
}

// ---------------------------------------------------------------------------
// Printing

std::string Namer::name(const Var& v) const {
  auto it = assigned_.find(v.uid);
  if (it != assigned_.end()) return it->second;
  int n = ++used_[v.name];
  std::string s = n == 1 ? v.name : v.name + std::to_string(n);
  assigned_[v.uid] = s;
  return s;
}

static void print_term(const TermPtr& t, const Namer& nm, std::string& out) {
  if (!t) {
    out += "<null>";
    return;
  }
  auto print_args = [&](const char* open, const char* close) {
    out += open;
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ",";
      print_term(t->args[i], nm, out);
    }
    out += close;
  };
  switch (t->kind) {
    case Term::Kind::Variable:
      out += nm.name(t->var);
      return;
    case Term::Kind::Application:
      out += t->sym;
      if (!t->args.empty()) print_args("(", ")");
      return;
    case Term::Kind::EigenApp:
      out += nm.name(t->var);
      print_args("(", ")");
      return;
    case Term::Kind::Tuple:
      print_args("(", ")");
      return;
  }
}

std::string to_string(const TermPtr& t, const Namer& nm) {
  std::string s;
  print_term(t, nm, s);
  return s;
}
std::string to_string(const TermPtr& t) {
  Namer nm;
  return to_string(t, nm);
}

// Precedence levels: 0 quantifier, 1 lolli, 2 tensor, 3 prefix, 4 atom.
static void print_formula(const FormulaPtr& f, const Namer& nm, int level,
                          std::string& out) {
  if (!f) {
    out += "<null>";
    return;
  }
  auto atom = [&]() {
    out += f->pred;
    if (!f->args.empty()) {
      out += "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) out += ",";
        print_term(f->args[i], nm, out);
      }
      out += ")";
    }
  };
  auto wrap = [&](int own, auto&& body) {
    if (own < level) out += "(";
    body();
    if (own < level) out += ")";
  };
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos:
      atom();
      return;
    case FKind::Forall:
    case FKind::Exists:
      wrap(0, [&] {
        out += f->kind == FKind::Forall ? "fa " : "ex ";
        out += nm.name(f->binder);
        out += ". ";
        print_formula(f->left, nm, 0, out);
      });
      return;
    case FKind::Lolli:
      wrap(1, [&] {
        print_formula(f->left, nm, 2, out);
        out += " -o ";
        print_formula(f->right, nm, 1, out);
      });
      return;
    case FKind::Tensor:
      wrap(2, [&] {
        print_formula(f->left, nm, 2, out);
        out += " * ";
        print_formula(f->right, nm, 3, out);
      });
      return;
    case FKind::Bang:
      wrap(3, [&] {
        out += "!";
        print_formula(f->left, nm, 3, out);
      });
      return;
    case FKind::Up:
      wrap(3, [&] {
        out += "^";
        print_formula(f->left, nm, 3, out);
      });
      return;
    case FKind::Down:
      wrap(3, [&] {
        out += "v ";
        print_formula(f->left, nm, 3, out);
      });
      return;
  }
}

std::string to_string(const FormulaPtr& f, const Namer& nm) {
  std::string s;
  print_formula(f, nm, 0, s);
  return s;
}
std::string to_string(const FormulaPtr& f) {
  Namer nm;
  return to_string(f, nm);
}

std::string to_string(const VarContext& phi, const Namer& nm) {
  std::string s;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (i) s += ",";
    s += nm.name(phi.vars()[i]);
  }
  return s;
}

static void print_sformula(const SFormulaPtr& f, const Namer& nm, int level,
                           std::string& out) {
  if (!f) {
    out += "<null>";
    return;
  }
  auto wrap = [&](int own, auto&& body) {
    if (own < level) out += "(";
    body();
    if (own < level) out += ")";
  };
  switch (f->kind) {
    case SKind::AtomNeg:
    case SKind::AtomPos:
      out += f->pred;
      if (!f->args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < f->args.size(); ++i) {
          if (i) out += ",";
          print_term(f->args[i], nm, out);
        }
        out += ")";
      }
      out += "_{" + to_string(f->phi, nm) + "}";
      return;
    case SKind::Lolli:
      wrap(1, [&] {
        print_sformula(f->left, nm, 2, out);
        out += " -o ";
        print_sformula(f->right, nm, 1, out);
      });
      return;
    case SKind::Tensor:
      wrap(2, [&] {
        print_sformula(f->left, nm, 2, out);
        out += " * ";
        print_sformula(f->right, nm, 3, out);
      });
      return;
    case SKind::BangClosure:
      wrap(3, [&] {
        out += "!{" + nm.name(f->a) + "; " + to_string(f->phi_cl, nm) + "; " +
               to_string(*f->sigma_cl, nm) + "}";
        print_sformula(f->left, nm, 3, out);
      });
      return;
    case SKind::Up:
      wrap(3, [&] {
        out += "^";
        print_sformula(f->left, nm, 3, out);
      });
      return;
    case SKind::Down:
      wrap(3, [&] {
        out += "v ";
        print_sformula(f->left, nm, 3, out);
      });
      return;
  }
}

std::string to_string(const SFormulaPtr& f, const Namer& nm) {
  std::string s;
  print_sformula(f, nm, 0, s);
  return s;
}
std::string to_string(const SFormulaPtr& f) {
  Namer nm;
  return to_string(f, nm);
}

std::string to_string(const Sequent& s) {
  Namer nm;
  std::string out;
  for (std::size_t i = 0; i < s.gamma.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.gamma[i], nm);
  }
  if (!s.gamma.empty()) out += " ; ";
  for (std::size_t i = 0; i < s.delta.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.delta[i], nm);
  }
  if (s.focus_left) {
    if (!s.delta.empty()) out += ", ";
    out += "[" + to_string(s.focus_left, nm) + "]";
  }
  out += " |- ";
  if (s.focus_right)
    out += "[" + to_string(s.focus_right, nm) + "]";
  else
    out += to_string(s.goal, nm);
  return out;
}

std::string to_string(const SSequent& s) {
  Namer nm;
  std::string out;
  for (std::size_t i = 0; i < s.gamma.size(); ++i) {
    if (i) out += ", ";
    const Closure& c = s.gamma[i];
    out += "(" + nm.name(c.a) + "; " + to_string(c.phi, nm) + "; " +
           to_string(*c.sigma, nm) + "): " + to_string(c.body, nm);
  }
  if (!s.gamma.empty()) out += " ; ";
  for (std::size_t i = 0; i < s.delta.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.delta[i], nm);
  }
  if (s.focus_left) {
    if (!s.delta.empty()) out += ", ";
    out += "[" + to_string(s.focus_left, nm) + "]";
  }
  out += " |- ";
  if (s.focus_right)
    out += "[" + to_string(s.focus_right, nm) + "]";
  else
    out += to_string(s.goal, nm);
  out += " ; " + to_string(*s.sigma, nm);
  return out;
}

}  // namespace linskol
