#pragma once

// Textual formats (terms, definitions, environments, proofs, computations)
// and JSON report emission.

#include <map>
#include <string>

#include <json.hpp>

#include "pvw/comp.hpp"
#include "pvw/proof.hpp"
#include "pvw/sexpr.hpp"
#include "pvw/term.hpp"
#include "pvw/transform.hpp"

namespace pvw {

using DefsTable = std::map<std::string, Fn>;

// definitions --------------------------------------------------------------
Fn parse_def(const Sexpr& s, const DefsTable& defs);
Sexpr emit_def(const Fn& f);
DefsTable parse_defs_file(const std::string& text);  // (defs (def NAME DEF) ...)
std::string emit_defs_file(const DefsTable& defs);

// terms ---------------------------------------------------------------------
Term parse_term(const Sexpr& s, const DefsTable& defs);
Term parse_term_text(const std::string& text, const DefsTable& defs);
Sexpr emit_term(const Term& t);
std::string emit_term_text(const Term& t);

// environments ---------------------------------------------------------------
Development parse_env(const Sexpr& s, const DefsTable& defs);
Development parse_env_text(const std::string& text, const DefsTable& defs);
Sexpr emit_env(const Development& rho);
std::string emit_env_text(const Development& rho);

// proofs ----------------------------------------------------------------------
Proof parse_proof(const Sexpr& s, const DefsTable& defs);
Proof parse_proof_text(const std::string& text, const DefsTable& defs);
Sexpr emit_proof(const Proof& p);
std::string emit_proof_text(const Proof& p);

// computations -----------------------------------------------------------------
CompDag parse_comp(const Sexpr& s, const DefsTable& defs);
CompDag parse_comp_text(const std::string& text, const DefsTable& defs);
Sexpr emit_comp(const CompDag& dag);
std::string emit_comp_text(const CompDag& dag);

// JSON reports ------------------------------------------------------------------
nlohmann::json metrics_json(const Metrics& m);
nlohmann::json audit_json(const CompDag& dag, Count C);
nlohmann::json check_proof_json(const CheckResult& r);
nlohmann::json ledger_json(const Ledger& l);

}  // namespace pvw
