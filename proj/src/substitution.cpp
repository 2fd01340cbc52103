#include "linskol/substitution.hpp"

#include <algorithm>
#include <deque>

namespace linskol {

std::optional<TermPtr> Substitution::lookup(int uid) const {
  auto it = index_.find(uid);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].image;
}

Substitution Substitution::extended(const Var& v, TermPtr image) const {
  if (has(v.uid))
    throw std::logic_error("substitution already binds '" + v.name + "'");
  if (!image) throw std::logic_error("null image");
  if (v.kind == VarKind::Eigen) {
    if (image->kind != Term::Kind::EigenApp || image->var.uid != v.uid)
      throw std::logic_error(
          "eigenvariable must bind to a skolem application headed by itself");
  }
  Substitution s = *this;
  s.index_[v.uid] = static_cast<int>(s.entries_.size());
  s.entries_.push_back(Binding{v, std::move(image)});
  return s;
}

Substitution Substitution::extended_merge_special(
    const Var& a, const std::vector<TermPtr>& elems) const {
  if (a.kind != VarKind::Special)
    throw std::logic_error("tuple merge is only defined for special variables");
  auto existing = lookup(a.uid);
  if (!existing) return extended(a, mk_tuple(elems));
  if ((*existing)->kind != Term::Kind::Tuple)
    throw std::logic_error("special variable bound to a non-tuple");
  std::vector<TermPtr> merged = (*existing)->args;
  for (const auto& e : elems) {
    bool dup = false;
    for (const auto& m : merged)
      if (term_equal(m, e)) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(e);
  }
  Substitution s = *this;
  s.entries_[s.index_.at(a.uid)].image = mk_tuple(std::move(merged));
  return s;
}

Substitution Substitution::merged(const Substitution& o) const {
  Substitution s = *this;
  for (const auto& b : o.entries_) {
    auto mine = s.lookup(b.var.uid);
    if (!mine) {
      s = s.extended(b.var, b.image);
    } else if (!term_equal(*mine, b.image)) {
      if (b.var.kind == VarKind::Special &&
          (*mine)->kind == Term::Kind::Tuple &&
          b.image->kind == Term::Kind::Tuple) {
        s = s.extended_merge_special(b.var, b.image->args);
      } else {
        throw std::logic_error("conflicting images for '" + b.var.name +
                               "' in substitution merge");
      }
    }
  }
  return s;
}

Substitution Substitution::restrict_to(const VarContext& phi) const {
  Substitution s;
  for (const auto& b : entries_)
    if (phi.contains(b.var.uid)) s = s.extended(b.var, b.image);
  return s;
}

Substitution Substitution::remove(const VarContext& phi) const {
  Substitution s;
  for (const auto& b : entries_)
    if (!phi.contains(b.var.uid)) s = s.extended(b.var, b.image);
  return s;
}

Substitution Substitution::renamed(
    const std::unordered_map<int, Var>& ren) const {
  Substitution s;
  for (const auto& b : entries_) {
    auto it = ren.find(b.var.uid);
    Var v = it == ren.end() ? b.var : it->second;
    s = s.extended(v, rename_term(b.image, ren));
  }
  return s;
}

bool Substitution::operator==(const Substitution& o) const {
  if (size() != o.size()) return false;
  for (const auto& b : entries_) {
    auto img = o.lookup(b.var.uid);
    if (!img || !term_equal(*img, b.image)) return false;
  }
  return true;
}

bool Substitution::contains_all(const Substitution& o) const {
  for (const auto& b : o.entries()) {
    auto img = lookup(b.var.uid);
    if (!img || !term_equal(*img, b.image)) return false;
  }
  return true;
}

SubstPtr empty_subst() {
  static const SubstPtr e = std::make_shared<Substitution>();
  return e;
}

SubstPtr make_subst(Substitution s) {
  return std::make_shared<Substitution>(std::move(s));
}

TermPtr apply(const Substitution& s, const TermPtr& t) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Variable: {
      auto img = s.lookup(t->var.uid);
      return img ? *img : t;
    }
    case Term::Kind::EigenApp: {
      // The head is rigid: an eigenvariable's skolem binding replaces bare
      // occurrences only, never the head of an existing application.
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        auto a2 = apply(s, a);
        changed = changed || a2 != a;
        args.push_back(a2);
      }
      return changed ? mk_eigen_app(t->var, std::move(args)) : t;
    }
    case Term::Kind::Application:
    case Term::Kind::Tuple: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        auto a2 = apply(s, a);
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

TermPtr apply_fix(const Substitution& s, const TermPtr& t) {
  TermPtr cur = t;
  // In an acyclic store every substitution chain has length at most |dom|,
  // so |dom|+1 passes must reach a fixpoint. The qualification avoids ADL
  // pulling in std::apply for shared_ptr arguments.
  for (std::size_t i = 0; i <= s.size() + 1; ++i) {
    TermPtr next = linskol::apply(s, cur);
    if (term_equal(next, cur)) return cur;
    cur = next;
  }
  throw CycleError("substitution is cyclic: no fixpoint within |dom|+1 passes");
}

bool typecheck(const Substitution& s, const VarContext& domain,
               const VarContext& codomain, std::string* why) {
  Namer nm;
  for (const auto& b : s.entries()) {
    if (!codomain.contains(b.var.uid)) {
      if (why)
        *why = "bound variable '" + nm.name(b.var) + "' not in the codomain";
      return false;
    }
    // For skolem entries only the argument list must be well-built over the
    // domain (the head is the bound variable itself).
    std::vector<Var> vs;
    std::unordered_set<int> seen;
    if (b.is_skolem()) {
      for (const auto& a : b.image->args) collect_vars(a, vs, seen);
    } else {
      collect_vars(b.image, vs, seen);
    }
    for (const auto& v : vs) {
      if (!domain.contains(v.uid)) {
        if (why)
          *why = "image of '" + nm.name(b.var) + "' mentions '" + nm.name(v) +
                 "' which is not in the domain";
        return false;
      }
    }
  }
  return true;
}

std::vector<std::pair<Var, Var>> DependencyGraph::edges() const {
  std::vector<std::pair<Var, Var>> out;
  for (const auto& [uid, succs] : adj)
    for (int to : succs) out.emplace_back(var_of.at(uid), var_of.at(to));
  return out;
}

std::unordered_set<int> DependencyGraph::reachable(int from) const {
  std::unordered_set<int> seen;
  std::deque<int> work;
  auto it = adj.find(from);
  if (it != adj.end())
    for (int s : it->second) {
      if (seen.insert(s).second) work.push_back(s);
    }
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    auto jt = adj.find(v);
    if (jt == adj.end()) continue;
    for (int s : jt->second)
      if (seen.insert(s).second) work.push_back(s);
  }
  return seen;
}

bool DependencyGraph::acyclic(std::vector<Var>* cycle) const {
  // Iterative DFS with colors; on a back edge, reconstruct the cycle from
  // the stack.
  std::unordered_map<int, int> color;  // 0 white, 1 gray, 2 black
  std::vector<int> stack;
  for (const auto& n : nodes) {
    if (color[n.uid] != 0) continue;
    // (node, next successor index)
    std::vector<std::pair<int, std::size_t>> dfs{{n.uid, 0}};
    color[n.uid] = 1;
    stack.push_back(n.uid);
    while (!dfs.empty()) {
      auto& [v, i] = dfs.back();
      auto it = adj.find(v);
      const std::vector<int>* succs = it == adj.end() ? nullptr : &it->second;
      if (!succs || i >= succs->size()) {
        color[v] = 2;
        stack.pop_back();
        dfs.pop_back();
        continue;
      }
      int w = (*succs)[i++];
      if (color[w] == 1) {
        if (cycle) {
          cycle->clear();
          auto pos = std::find(stack.begin(), stack.end(), w);
          for (auto p = pos; p != stack.end(); ++p)
            cycle->push_back(var_of.at(*p));
          cycle->push_back(var_of.at(w));
        }
        return false;
      }
      if (color[w] == 0) {
        color[w] = 1;
        stack.push_back(w);
        dfs.emplace_back(w, 0);
      }
    }
  }
  return true;
}

DependencyGraph dependency_order(const Substitution& s) {
  DependencyGraph g;
  std::unordered_set<int> node_seen;
  auto add_node = [&](const Var& v) {
    if (node_seen.insert(v.uid).second) {
      g.nodes.push_back(v);
      g.var_of[v.uid] = v;
    }
  };
  for (const auto& b : s.entries()) {
    add_node(b.var);
    std::vector<Var> vs;
    std::unordered_set<int> seen;
    if (b.is_skolem()) {
      for (const auto& a : b.image->args) collect_vars(a, vs, seen);
    } else {
      collect_vars(b.image, vs, seen);
    }
    auto& succ = g.adj[b.var.uid];
    for (const auto& v : vs) {
      add_node(v);
      succ.push_back(v.uid);
    }
  }
  return g;
}

AdmissibilityVerdict admissible(const Substitution& s, const VarContext& phi) {
  DependencyGraph g = dependency_order(s);
  Namer nm;

  // Condition 1: no existential/special source reaches itself. Every cycle
  // in the graph passes through an existential or special node (skolem
  // argument lists contain no eigenvariables), so this is cycle-freeness.
  AdmissibilityVerdict v;
  std::vector<Var> violating;
  for (const auto& b : s.entries()) {
    if (b.var.kind == VarKind::Eigen) continue;
    auto reach = g.reachable(b.var.uid);
    if (reach.count(b.var.uid)) violating.push_back(b.var);
  }
  if (!violating.empty()) {
    v.ok = false;
    v.condition = 1;
    v.witnesses = violating;
    std::vector<Var> cyc;
    g.acyclic(&cyc);
    v.cycle = cyc;
    std::string who;
    for (const auto& w : violating) {
      if (!who.empty()) who += ", ";
      who += nm.name(w);
    }
    v.detail = "condition 1 violated: " + who +
               " occur(s) in their own iterated image";
    if (!cyc.empty()) {
      v.detail += " (cycle:";
      for (const auto& c : cyc) v.detail += " " + nm.name(c);
      v.detail += ")";
    }
    return v;
  }

  // Condition 2: for every variable of Phi, if a paired special a occurs in
  // some iterate of its image then a's partner must not be in Phi as well.
  // The quantification is over Phi, not over the whole domain of s: a
  // binding is only constrained by the contexts it can actually flow into.
  for (const Var& src : phi) {
    auto reach = g.reachable(src.uid);
    for (const Var& a : g.nodes) {
      if (!reach.count(a.uid)) continue;
      if (a.kind != VarKind::Special || a.partner_uid < 0) continue;
      if (phi.contains(a.partner_uid)) {
        Var partner;
        bool found = false;
        for (const auto& pv : phi)
          if (pv.uid == a.partner_uid) {
            partner = pv;
            found = true;
            break;
          }
        if (!found) partner = Var{a.name + "'", VarKind::Special,
                                  a.partner_uid, a.pair_id, a.uid};
        v.ok = false;
        v.condition = 2;
        v.witnesses = {src, a, partner};
        v.detail = "condition 2 violated: " + nm.name(src) + " reaches " +
                   nm.name(a) + " while its partner " + nm.name(partner) +
                   " is in the context";
        return v;
      }
    }
  }
  return v;
}

std::string to_string(const Substitution& s, const Namer& nm) {
  if (s.empty()) return ".";
  std::string out;
  for (const auto& b : s.entries()) {
    if (!out.empty()) out += ", ";
    out += to_string(b.image, nm) + "/" + nm.name(b.var);
  }
  return out;
}

std::string to_string(const Substitution& s) {
  Namer nm;
  return to_string(s, nm);
}

}  // namespace linskol
