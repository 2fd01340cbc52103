#include "linskol/json_io.hpp"

#include <utility>
#include <vector>

namespace linskol {

namespace {

const char* var_kind_tag(VarKind k) {
  switch (k) {
    case VarKind::Existential: return "existential";
    case VarKind::Eigen: return "eigen";
    case VarKind::Special: return "special";
  }
  return "existential";
}

VarKind var_kind_from_tag(const std::string& s, const std::string& where) {
  if (s == "existential") return VarKind::Existential;
  if (s == "eigen") return VarKind::Eigen;
  if (s == "special") return VarKind::Special;
  throw JsonError("unknown variable kind '" + s + "'", where);
}

const char* fkind_tag(FKind k) {
  switch (k) {
    case FKind::AtomNeg: return "atom-";
    case FKind::Lolli: return "lolli";
    case FKind::Forall: return "forall";
    case FKind::Up: return "up";
    case FKind::AtomPos: return "atom+";
    case FKind::Tensor: return "tensor";
    case FKind::Bang: return "bang";
    case FKind::Exists: return "exists";
    case FKind::Down: return "down";
  }
  return "?";
}

const char* skind_tag(SKind k) {
  switch (k) {
    case SKind::AtomNeg: return "atom-";
    case SKind::Lolli: return "lolli";
    case SKind::Up: return "up";
    case SKind::AtomPos: return "atom+";
    case SKind::Tensor: return "tensor";
    case SKind::BangClosure: return "bang-closure";
    case SKind::Down: return "down";
  }
  return "?";
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw JsonError(std::string("missing field '") + key + "'", where);
  return j.at(key);
}

std::string need_string(const json& j, const char* key,
                        const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string())
    throw JsonError(std::string("field '") + key + "' is not a string", where);
  return v.get<std::string>();
}

int need_int(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw JsonError(std::string("field '") + key + "' is not an integer",
                    where);
  return v.get<int>();
}

const json& need_array(const json& j, const char* key,
                       const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_array())
    throw JsonError(std::string("field '") + key + "' is not an array", where);
  return v;
}

std::string sub(const std::string& where, const std::string& field) {
  return where + "." + field;
}
std::string subi(const std::string& where, const std::string& field,
                 size_t i) {
  return where + "." + field + "[" + std::to_string(i) + "]";
}

}  // namespace

json to_json(const Var& v) {
  json j{{"name", v.name}, {"kind", var_kind_tag(v.kind)}, {"uid", v.uid}};
  if (v.pair_id >= 0) j["pair_id"] = v.pair_id;
  if (v.partner_uid >= 0) j["partner_uid"] = v.partner_uid;
  return j;
}

Var var_from_json(const json& j, const std::string& where) {
  Var v;
  v.name = need_string(j, "name", where);
  v.kind = var_kind_from_tag(need_string(j, "kind", where), where);
  v.uid = need_int(j, "uid", where);
  if (j.contains("pair_id")) v.pair_id = need_int(j, "pair_id", where);
  if (j.contains("partner_uid"))
    v.partner_uid = need_int(j, "partner_uid", where);
  return v;
}

json to_json(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return json{{"t", "var"}, {"var", to_json(t->var)}};
    case Term::Kind::Application: {
      json args = json::array();
      for (const auto& a : t->args) args.push_back(to_json(a));
      return json{{"t", "app"}, {"sym", t->sym}, {"args", std::move(args)}};
    }
    case Term::Kind::Tuple: {
      json elems = json::array();
      for (const auto& a : t->args) elems.push_back(to_json(a));
      return json{{"t", "tuple"}, {"elems", std::move(elems)}};
    }
    case Term::Kind::EigenApp: {
      json args = json::array();
      for (const auto& a : t->args) args.push_back(to_json(a));
      return json{{"t", "eigenapp"},
                  {"head", to_json(t->var)},
                  {"args", std::move(args)}};
    }
  }
  return json();
}

TermPtr term_from_json(const json& j, const std::string& where) {
  const std::string t = need_string(j, "t", where);
  if (t == "var") return mk_var(var_from_json(need(j, "var", where), sub(where, "var")));
  if (t == "app") {
    const json& args = need_array(j, "args", where);
    std::vector<TermPtr> as;
    for (size_t i = 0; i < args.size(); ++i)
      as.push_back(term_from_json(args[i], subi(where, "args", i)));
    return mk_app(need_string(j, "sym", where), std::move(as));
  }
  if (t == "tuple") {
    const json& elems = need_array(j, "elems", where);
    std::vector<TermPtr> as;
    for (size_t i = 0; i < elems.size(); ++i)
      as.push_back(term_from_json(elems[i], subi(where, "elems", i)));
    return mk_tuple(std::move(as));
  }
  if (t == "eigenapp") {
    const json& args = need_array(j, "args", where);
    std::vector<TermPtr> as;
    for (size_t i = 0; i < args.size(); ++i)
      as.push_back(term_from_json(args[i], subi(where, "args", i)));
    return mk_eigen_app(var_from_json(need(j, "head", where), sub(where, "head")),
                        std::move(as));
  }
  throw JsonError("unknown term tag '" + t + "'", where);
}

json to_json(const FormulaPtr& f) {
  json j{{"f", fkind_tag(f->kind)}};
  switch (f->kind) {
    case FKind::AtomNeg:
    case FKind::AtomPos: {
      j["pred"] = f->pred;
      json args = json::array();
      for (const auto& a : f->args) args.push_back(to_json(a));
      j["args"] = std::move(args);
      break;
    }
    case FKind::Forall:
    case FKind::Exists:
      j["binder"] = to_json(f->binder);
      j["body"] = to_json(f->left);
      break;
    case FKind::Lolli:
    case FKind::Tensor:
      j["left"] = to_json(f->left);
      j["right"] = to_json(f->right);
      break;
    case FKind::Up:
    case FKind::Bang:
    case FKind::Down:
      j["body"] = to_json(f->left);
      break;
  }
  return j;
}

FormulaPtr formula_from_json(const json& j, const std::string& where) {
  const std::string f = need_string(j, "f", where);
  auto body = [&](const char* key) {
    return formula_from_json(need(j, key, where), sub(where, key));
  };
  try {
    if (f == "atom-" || f == "atom+") {
      const json& args = need_array(j, "args", where);
      std::vector<TermPtr> as;
      for (size_t i = 0; i < args.size(); ++i)
        as.push_back(term_from_json(args[i], subi(where, "args", i)));
      const std::string pred = need_string(j, "pred", where);
      return f == "atom-" ? mk_atom_neg(pred, std::move(as))
                          : mk_atom_pos(pred, std::move(as));
    }
    if (f == "lolli") return mk_lolli(body("left"), body("right"));
    if (f == "tensor") return mk_tensor(body("left"), body("right"));
    if (f == "forall")
      return mk_forall(var_from_json(need(j, "binder", where),
                                     sub(where, "binder")),
                       body("body"));
    if (f == "exists")
      return mk_exists(var_from_json(need(j, "binder", where),
                                     sub(where, "binder")),
                       body("body"));
    if (f == "up") return mk_up(body("body"));
    if (f == "down") return mk_down(body("body"));
    if (f == "bang") return mk_bang(body("body"));
  } catch (const std::invalid_argument& e) {
    throw JsonError(e.what(), where);
  }
  throw JsonError("unknown formula tag '" + f + "'", where);
}

json to_json(const VarContext& phi) {
  json j = json::array();
  for (const auto& v : phi) j.push_back(to_json(v));
  return j;
}

VarContext varcontext_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw JsonError("variable context is not an array", where);
  std::vector<Var> vs;
  for (size_t i = 0; i < j.size(); ++i)
    vs.push_back(var_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  try {
    return VarContext(std::move(vs));
  } catch (const std::exception& e) {
    throw JsonError(e.what(), where);
  }
}

json to_json(const Substitution& s) {
  json j = json::array();
  for (const auto& b : s.entries())
    j.push_back(json{{"var", to_json(b.var)}, {"image", to_json(b.image)}});
  return j;
}

Substitution subst_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw JsonError("substitution is not an array", where);
  Substitution s;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    Var v = var_from_json(need(j[i], "var", w), sub(w, "var"));
    TermPtr img = term_from_json(need(j[i], "image", w), sub(w, "image"));
    try {
      s = s.extended(v, std::move(img));
    } catch (const std::logic_error& e) {
      throw JsonError(e.what(), w);
    }
  }
  return s;
}

json to_json(const SFormulaPtr& f) {
  json j{{"f", skind_tag(f->kind)}};
  switch (f->kind) {
    case SKind::AtomNeg:
    case SKind::AtomPos: {
      j["pred"] = f->pred;
      json args = json::array();
      for (const auto& a : f->args) args.push_back(to_json(a));
      j["args"] = std::move(args);
      j["phi"] = to_json(f->phi);
      break;
    }
    case SKind::Lolli:
    case SKind::Tensor:
      j["left"] = to_json(f->left);
      j["right"] = to_json(f->right);
      break;
    case SKind::Up:
    case SKind::Down:
      j["body"] = to_json(f->left);
      break;
    case SKind::BangClosure:
      j["a"] = to_json(f->a);
      j["phi"] = to_json(f->phi_cl);
      j["sigma"] = to_json(*f->sigma_cl);
      j["body"] = to_json(f->left);
      break;
  }
  return j;
}

SFormulaPtr sformula_from_json(const json& j, const std::string& where) {
  const std::string f = need_string(j, "f", where);
  auto body = [&](const char* key) {
    return sformula_from_json(need(j, key, where), sub(where, key));
  };
  try {
    if (f == "atom-" || f == "atom+") {
      const json& args = need_array(j, "args", where);
      std::vector<TermPtr> as;
      for (size_t i = 0; i < args.size(); ++i)
        as.push_back(term_from_json(args[i], subi(where, "args", i)));
      VarContext phi =
          varcontext_from_json(need(j, "phi", where), sub(where, "phi"));
      const std::string pred = need_string(j, "pred", where);
      return f == "atom-" ? mk_satom_neg(pred, std::move(as), std::move(phi))
                          : mk_satom_pos(pred, std::move(as), std::move(phi));
    }
    if (f == "lolli") return mk_slolli(body("left"), body("right"));
    if (f == "tensor") return mk_stensor(body("left"), body("right"));
    if (f == "up") return mk_sup(body("body"));
    if (f == "down") return mk_sdown(body("body"));
    if (f == "bang-closure") {
      Var a = var_from_json(need(j, "a", where), sub(where, "a"));
      VarContext phi =
          varcontext_from_json(need(j, "phi", where), sub(where, "phi"));
      Substitution sig =
          subst_from_json(need(j, "sigma", where), sub(where, "sigma"));
      return mk_sbang(std::move(a), std::move(phi), make_subst(std::move(sig)),
                      body("body"));
    }
  } catch (const std::invalid_argument& e) {
    throw JsonError(e.what(), where);
  }
  throw JsonError("unknown formula tag '" + f + "'", where);
}

json to_json(const Closure& c) {
  return json{{"a", to_json(c.a)},
              {"phi", to_json(c.phi)},
              {"sigma", to_json(*c.sigma)},
              {"body", to_json(c.body)}};
}

namespace {
Closure closure_from_json(const json& j, const std::string& where) {
  Closure c;
  c.a = var_from_json(need(j, "a", where), sub(where, "a"));
  c.phi = varcontext_from_json(need(j, "phi", where), sub(where, "phi"));
  c.sigma = make_subst(
      subst_from_json(need(j, "sigma", where), sub(where, "sigma")));
  c.body = sformula_from_json(need(j, "body", where), sub(where, "body"));
  return c;
}
}  // namespace

json to_json(const Sequent& s) {
  json j;
  json gamma = json::array();
  for (const auto& g : s.gamma) gamma.push_back(to_json(g));
  j["gamma"] = std::move(gamma);
  json delta = json::array();
  for (const auto& d : s.delta) delta.push_back(to_json(d));
  j["delta"] = std::move(delta);
  if (s.focus_left) j["focus_left"] = to_json(s.focus_left);
  if (s.goal) j["goal"] = to_json(s.goal);
  if (s.focus_right) j["focus_right"] = to_json(s.focus_right);
  return j;
}

Sequent sequent_from_json(const json& j, const std::string& where) {
  Sequent s;
  const json& gamma = need_array(j, "gamma", where);
  for (size_t i = 0; i < gamma.size(); ++i)
    s.gamma.push_back(formula_from_json(gamma[i], subi(where, "gamma", i)));
  const json& delta = need_array(j, "delta", where);
  for (size_t i = 0; i < delta.size(); ++i)
    s.delta.push_back(formula_from_json(delta[i], subi(where, "delta", i)));
  if (j.contains("focus_left"))
    s.focus_left =
        formula_from_json(j.at("focus_left"), sub(where, "focus_left"));
  if (j.contains("goal"))
    s.goal = formula_from_json(j.at("goal"), sub(where, "goal"));
  if (j.contains("focus_right"))
    s.focus_right =
        formula_from_json(j.at("focus_right"), sub(where, "focus_right"));
  return s;
}

json to_json(const SSequent& s) {
  json j;
  json gamma = json::array();
  for (const auto& g : s.gamma) gamma.push_back(to_json(g));
  j["gamma"] = std::move(gamma);
  json delta = json::array();
  for (const auto& d : s.delta) delta.push_back(to_json(d));
  j["delta"] = std::move(delta);
  if (s.focus_left) j["focus_left"] = to_json(s.focus_left);
  if (s.goal) j["goal"] = to_json(s.goal);
  if (s.focus_right) j["focus_right"] = to_json(s.focus_right);
  j["sigma"] = to_json(*s.sigma);
  return j;
}

SSequent ssequent_from_json(const json& j, const std::string& where) {
  SSequent s;
  const json& gamma = need_array(j, "gamma", where);
  for (size_t i = 0; i < gamma.size(); ++i)
    s.gamma.push_back(closure_from_json(gamma[i], subi(where, "gamma", i)));
  const json& delta = need_array(j, "delta", where);
  for (size_t i = 0; i < delta.size(); ++i)
    s.delta.push_back(sformula_from_json(delta[i], subi(where, "delta", i)));
  if (j.contains("focus_left"))
    s.focus_left =
        sformula_from_json(j.at("focus_left"), sub(where, "focus_left"));
  if (j.contains("goal"))
    s.goal = sformula_from_json(j.at("goal"), sub(where, "goal"));
  if (j.contains("focus_right"))
    s.focus_right =
        sformula_from_json(j.at("focus_right"), sub(where, "focus_right"));
  s.sigma =
      make_subst(subst_from_json(need(j, "sigma", where), sub(where, "sigma")));
  return s;
}

json to_json(const SProofPtr& p) {
  json j{{"rule", p->rule}, {"conclusion", to_json(p->conclusion)}};
  json prem = json::array();
  for (const auto& q : p->premises) prem.push_back(to_json(q));
  j["premises"] = std::move(prem);
  j["sigma_before"] = to_json(*p->sigma_before);
  j["sigma_after"] = to_json(*p->sigma_after);
  if (p->gamma_index >= 0) j["gamma_index"] = p->gamma_index;
  if (!p->copy_renaming.empty()) {
    json ren = json::array();
    for (const auto& [from, to] : p->copy_renaming)
      ren.push_back(json{{"from", to_json(from)}, {"to", to_json(to)}});
    j["copy_renaming"] = std::move(ren);
  }
  return j;
}

SProofPtr sproof_from_json(const json& j, const std::string& where) {
  auto n = std::make_shared<SProofNode>();
  n->rule = need_string(j, "rule", where);
  n->conclusion =
      ssequent_from_json(need(j, "conclusion", where), sub(where, "conclusion"));
  const json& prem = need_array(j, "premises", where);
  for (size_t i = 0; i < prem.size(); ++i)
    n->premises.push_back(sproof_from_json(prem[i], subi(where, "premises", i)));
  n->sigma_before = make_subst(subst_from_json(need(j, "sigma_before", where),
                                               sub(where, "sigma_before")));
  n->sigma_after = make_subst(subst_from_json(need(j, "sigma_after", where),
                                              sub(where, "sigma_after")));
  if (j.contains("gamma_index"))
    n->gamma_index = need_int(j, "gamma_index", where);
  if (j.contains("copy_renaming")) {
    const json& ren = need_array(j, "copy_renaming", where);
    for (size_t i = 0; i < ren.size(); ++i) {
      const std::string w = subi(where, "copy_renaming", i);
      n->copy_renaming.emplace_back(
          var_from_json(need(ren[i], "from", w), sub(w, "from")),
          var_from_json(need(ren[i], "to", w), sub(w, "to")));
    }
  }
  return n;
}

json to_json(const LProofPtr& p) {
  json j{{"rule", p->rule}, {"conclusion", to_json(p->conclusion)}};
  json prem = json::array();
  for (const auto& q : p->premises) prem.push_back(to_json(q));
  j["premises"] = std::move(prem);
  if (p->witness) j["witness"] = to_json(p->witness);
  if (p->rule == "forallR" || p->rule == "existsL")
    j["eigen"] = to_json(p->eigen);
  if (p->gamma_index >= 0) j["gamma_index"] = p->gamma_index;
  return j;
}

LProofPtr lproof_from_json(const json& j, const std::string& where) {
  auto n = std::make_shared<LProofNode>();
  n->rule = need_string(j, "rule", where);
  n->conclusion =
      sequent_from_json(need(j, "conclusion", where), sub(where, "conclusion"));
  const json& prem = need_array(j, "premises", where);
  for (size_t i = 0; i < prem.size(); ++i)
    n->premises.push_back(lproof_from_json(prem[i], subi(where, "premises", i)));
  if (j.contains("witness"))
    n->witness = term_from_json(j.at("witness"), sub(where, "witness"));
  if (j.contains("eigen"))
    n->eigen = var_from_json(j.at("eigen"), sub(where, "eigen"));
  if (j.contains("gamma_index"))
    n->gamma_index = need_int(j, "gamma_index", where);
  return n;
}

json to_json(const SearchStats& st) {
  return json{{"node_expansions", st.node_expansions},
              {"unifications", st.unifications},
              {"unify_failures", st.unify_failures},
              {"admissibility_checks", st.admissibility_checks},
              {"admissibility_failures", st.admissibility_failures},
              {"adm_condition1", st.adm_condition1},
              {"adm_condition2", st.adm_condition2},
              {"focus_backtracks", st.focus_backtracks},
              {"term_backtracks", st.term_backtracks},
              {"copies", st.copies}};
}

json to_json(const TraceEvent& e) {
  json j{{"kind", e.kind}, {"outcome", e.outcome}};
  if (!e.rule.empty()) j["rule"] = e.rule;
  if (e.condition) j["condition"] = e.condition;
  if (!e.detail.empty()) j["detail"] = e.detail;
  if (!e.witnesses.empty()) j["witnesses"] = e.witnesses;
  if (!e.witness_uids.empty()) j["witness_uids"] = e.witness_uids;
  return j;
}

json to_json(const EventSchedule& es) {
  json j = json::array();
  for (const auto& e : es) {
    json je;
    switch (e.kind) {
      case Event::Kind::Instantiate: je["event"] = "instantiate"; break;
      case Event::Kind::IntroduceEigen: je["event"] = "introduce"; break;
      case Event::Kind::Structural: je["event"] = "structural"; break;
    }
    je["var"] = to_json(e.var);
    if (e.witness) je["witness"] = to_json(e.witness);
    j.push_back(std::move(je));
  }
  return j;
}

json to_json(const ProofDocument& d) {
  json j{{"schema", kSchema},
         {"engine", d.engine},
         {"verdict", to_string(d.verdict)},
         {"stats", to_json(d.stats)}};
  if (d.engine == "sljf") {
    j["root"] = to_json(d.sroot);
    if (d.stree) j["tree"] = to_json(d.stree);
    j["sigma_final"] = to_json(d.sigma_final);
  } else {
    j["root"] = to_json(d.lroot);
    if (d.ltree) j["tree"] = to_json(d.ltree);
  }
  return j;
}

ProofDocument proof_document_from_json(const json& j) {
  const std::string where = "$";
  const std::string schema = need_string(j, "schema", where);
  if (schema != kSchema)
    throw JsonError("unsupported schema '" + schema + "'", sub(where, "schema"));
  ProofDocument d;
  d.engine = need_string(j, "engine", where);
  const std::string verdict = need_string(j, "verdict", where);
  if (verdict == "proved")
    d.verdict = Verdict::Proved;
  else if (verdict == "unprovable")
    d.verdict = Verdict::Unprovable;
  else if (verdict == "budget_exhausted")
    d.verdict = Verdict::BudgetExhausted;
  else
    throw JsonError("unknown verdict '" + verdict + "'", sub(where, "verdict"));
  if (d.engine == "sljf") {
    d.sroot = ssequent_from_json(need(j, "root", where), sub(where, "root"));
    if (j.contains("tree"))
      d.stree = sproof_from_json(j.at("tree"), sub(where, "tree"));
    if (j.contains("sigma_final"))
      d.sigma_final = subst_from_json(j.at("sigma_final"),
                                      sub(where, "sigma_final"));
  } else if (d.engine == "ljf") {
    d.lroot = sequent_from_json(need(j, "root", where), sub(where, "root"));
    if (j.contains("tree"))
      d.ltree = lproof_from_json(j.at("tree"), sub(where, "tree"));
  } else {
    throw JsonError("unknown engine '" + d.engine + "'", sub(where, "engine"));
  }
  return d;
}

}  // namespace linskol
