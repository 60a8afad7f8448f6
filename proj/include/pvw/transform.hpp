#pragma once

// Constructive computation-DAG transformations: fusion, the substitution
// lemmas, defining-axiom unfold/fold, and the soundness walk along a proof,
// each with an audited size ledger.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvw/comp.hpp"
#include "pvw/eval.hpp"
#include "pvw/proof.hpp"

namespace pvw {

class TransformError : public std::runtime_error {
 public:
  explicit TransformError(const std::string& what) : std::runtime_error(what) {}
};

// Strict-mode failure of a budget precondition.
class BudgetError : public TransformError {
 public:
  explicit BudgetError(const std::string& what) : TransformError(what) {}
};

struct Budget {
  Count U = 0;  // global budget
  Count B = 0;  // node-count bound on the input computation
  Count V = 0;  // main-term bound
  Count C = 8;  // constant for M-audits
};

struct LedgerEntry {
  std::string op;
  Count claimed_nodes = 0;  // upper bound on the node count after the step
  Count actual_nodes = 0;
  Count claimed_M = 0;
  Count actual_M = 0;
  bool pass = true;
};

struct Ledger {
  std::vector<LedgerEntry> steps;
  bool overall = true;

  void record(std::string op, Count claimed_nodes, Count actual_nodes,
              Count claimed_M, Count actual_M) {
    LedgerEntry e{std::move(op), claimed_nodes, actual_nodes, claimed_M, actual_M,
                  actual_nodes <= claimed_nodes && actual_M <= claimed_M};
    overall = overall && e.pass;
    steps.push_back(std::move(e));
  }
  void flag(std::string op, const std::string& why) {
    steps.push_back(LedgerEntry{std::move(op) + ": " + why, 0, 0, 0, 0, false});
    overall = false;
  }
};

// ---------------------------------------------------------------------------
// Claim fusion: turn a numeric head < f(v*...), () > |_ z plus argument
// statements < t_i, rho > |_ v_i into a conclusion < f(t...), rho > |_ z.
// arg_nodes maps argument positions (0-based) to nodes for the non-g-numeral
// arguments. Adds at most one node.
CompDag fuse(const CompDag& dag, const Fn& f, const std::vector<Term>& args,
             const Development& rho, std::size_t head,
             const std::map<std::size_t, std::size_t>& arg_nodes);

// ---------------------------------------------------------------------------
// Substitution lemmas. A target pairs a conclusion with the pattern term the
// substitution acts on: for subst_in, stmt = <pattern[u/x], rho> |_ v and the
// result concludes <pattern, [u/x]rho> |_ v; subst_out is the mirror image.
struct SubstTarget {
  Statement stmt;
  Term pattern;
};

CompDag subst_in(const CompDag& dag, const std::vector<SubstTarget>& targets,
                 const Term& u, const std::string& x, const Budget& budget,
                 bool strict, Ledger* ledger = nullptr);

CompDag subst_out(const CompDag& dag, const std::vector<SubstTarget>& targets,
                  const Term& u, const std::string& x, const Budget& budget,
                  bool strict, Ledger* ledger = nullptr);

// ---------------------------------------------------------------------------
// Defining-axiom steps on a conclusion (Lemma-style: the other conclusions
// keep their derivations).
CompDag unfold_axiom(const CompDag& dag, const Statement& target,
                     const Equation& axiom);
CompDag fold_axiom(const CompDag& dag, const Statement& target,
                   const Equation& axiom);

// ---------------------------------------------------------------------------
// Soundness walk

enum class Direction { Forward, Backward };

struct TransformResult {
  CompDag dag;
  Statement conclusion;
  Ledger ledger;
};

// Carries the computation of the target conclusion across the proof: forward
// rewrites the proof's left side to its right side, backward the reverse.
// The new value approximates from below (old value approximates new value).
TransformResult transform_along_proof(const CompDag& dag, const Statement& target,
                                      const Proof& proof, Direction dir,
                                      const Budget& budget, bool strict);

}  // namespace pvw
