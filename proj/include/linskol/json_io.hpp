// JSON serialisation for every artefact the CLI emits or re-checks: terms,
// formulas (both calculi), substitutions, sequents, proof trees, search
// stats, and traces. Proof documents carry a version tag and round-trip:
// a document written by cmd_prove is accepted by cmd_check.
#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "linskol/ljf_engine.hpp"
#include "linskol/reconstructor.hpp"
#include "linskol/skolemiser.hpp"
#include "linskol/sljf_engine.hpp"

namespace linskol {

inline constexpr const char* kSchema = "linskol/1";

// Raised on malformed input; `where` is the path of the offending node
// (e.g. "tree.premises[1].conclusion.delta[0]").
struct JsonError : std::runtime_error {
  std::string where;
  JsonError(const std::string& msg, std::string where_)
      : std::runtime_error(msg + " at " + (where_.empty() ? "$" : where_)),
        where(std::move(where_)) {}
};

using json = nlohmann::json;

json to_json(const Var& v);
json to_json(const TermPtr& t);
json to_json(const FormulaPtr& f);
json to_json(const SFormulaPtr& f);
json to_json(const VarContext& phi);
json to_json(const Substitution& s);
json to_json(const Closure& c);
json to_json(const Sequent& s);
json to_json(const SSequent& s);
json to_json(const SProofPtr& p);
json to_json(const LProofPtr& p);
json to_json(const SearchStats& st);
json to_json(const TraceEvent& e);
json to_json(const EventSchedule& es);

Var var_from_json(const json& j, const std::string& where = "$");
TermPtr term_from_json(const json& j, const std::string& where = "$");
FormulaPtr formula_from_json(const json& j, const std::string& where = "$");
SFormulaPtr sformula_from_json(const json& j, const std::string& where = "$");
VarContext varcontext_from_json(const json& j, const std::string& where = "$");
Substitution subst_from_json(const json& j, const std::string& where = "$");
Sequent sequent_from_json(const json& j, const std::string& where = "$");
SSequent ssequent_from_json(const json& j, const std::string& where = "$");
SProofPtr sproof_from_json(const json& j, const std::string& where = "$");
LProofPtr lproof_from_json(const json& j, const std::string& where = "$");

// Proof document: schema tag, engine ("sljf"/"ljf"), verdict, root sequent,
// final substitution (sljf), tree, stats.
struct ProofDocument {
  std::string engine;
  Verdict verdict = Verdict::Unprovable;
  // exactly one root/tree pair is populated, by engine
  SSequent sroot;
  SProofPtr stree;
  Substitution sigma_final;
  Sequent lroot;
  LProofPtr ltree;
  SearchStats stats;
};

json to_json(const ProofDocument& d);
ProofDocument proof_document_from_json(const json& j);

}  // namespace linskol
