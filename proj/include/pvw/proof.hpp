#pragma once

// Tree-like equational derivations: defining-axiom instantiation, the proof
// checker and the proof-size measure.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pvw/term.hpp"

namespace pvw {

struct Equation {
  Term lhs;
  Term rhs;
};

bool eq_equal(const Equation& a, const Equation& b);
Count equation_size(const Equation& e);  // ||lhs|| + ||rhs|| + 1

enum class AxiomCase { EpsCase, S0Case, S1Case, CompCase, ConstNCase, ProjCase };
std::string axiom_case_name(AxiomCase c);

// The open defining axiom of f for the given case, over canonical variables
// x, x1..xn. Throws std::invalid_argument when the case does not apply
// (in particular eps and the successors have no defining axiom).
Equation axiom_schema(const Fn& f, AxiomCase c);

// True iff `instance` arises from the schema by substituting terms for the
// schema's variables (simultaneously, both sides).
bool matches_schema(const Equation& schema, const Equation& instance);

// ---------------------------------------------------------------------------

class ProofTree;
using Proof = std::shared_ptr<const ProofTree>;

class ProofTree {
 public:
  enum Kind { DefAxiom, Identity, Symmetry, Transitivity, Congruence, SubstRule };
  Kind kind;

  // DefAxiom
  Fn fn;
  AxiomCase axiom_case = AxiomCase::EpsCase;
  std::optional<Equation> instance;
  // Identity
  Term term;
  // Congruence head symbol reuses fn; children below.
  std::vector<Proof> children;  // Symmetry: 1; Transitivity: 2; Congruence: n; SubstRule: 1
  // SubstRule
  Term subst_term;
  std::string subst_var;

  static Proof axiom(Fn f, AxiomCase c, Equation instance);
  static Proof identity(Term t);
  static Proof symmetry(Proof p);
  static Proof transitivity(Proof p, Proof q);
  static Proof congruence(Fn f, std::vector<Proof> ps);
  static Proof subst(Proof p, Term r, std::string x);
};

struct ProofViolation {
  std::string path;  // e.g. "root.trans[0].cong[2]"
  std::string condition;
};

struct CheckResult {
  bool ok = false;
  std::optional<Equation> conclusion;
  Count size = 0;
  std::optional<ProofViolation> violation;
};

// Equation derived at the root; throws std::invalid_argument on a malformed
// node (the checker wraps this into a located violation).
Equation conclusion(const Proof& p);

CheckResult check(const Proof& p);

// Sum over all nodes of (||lhs|| + ||rhs|| + 1) of the node's conclusion.
Count proof_size(const Proof& p);

Count proof_node_count(const Proof& p);

// Rewrites every occurrence of variable `from` to `to` throughout the proof
// (terms in instances, identity terms and substitution payloads). Sizes are
// preserved; `to` must be fresh for the proof.
Proof rename_var(const Proof& p, const std::string& from, const std::string& to);

// Variable names appearing anywhere in the proof.
std::set<std::string> proof_var_names(const Proof& p);

}  // namespace pvw
