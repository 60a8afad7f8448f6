#pragma once

// Computation statements, computation DAGs, the eleven rule schemas, the
// validator, size metrics, structural audits and elementary DAG surgery.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pvw/term.hpp"

namespace pvw {

// ---------------------------------------------------------------------------
// Statements  < t, rho > |_ v

struct Statement {
  Term main;
  Development env;
  Term value;  // must be a g-numeral

  std::size_t hash() const {
    return hash_combine(hash_combine(main->hash, env.hash()), value->hash);
  }
};

bool stmt_equal(const Statement& a, const Statement& b);
std::string stmt_brief(const Statement& s);

struct StmtHash {
  std::size_t operator()(const Statement& s) const { return s.hash(); }
};
struct StmtEq {
  bool operator()(const Statement& a, const Statement& b) const {
    return stmt_equal(a, b);
  }
};

// ---------------------------------------------------------------------------
// Rule tags

struct RuleTag {
  enum Kind {
    Subst,    // variable lookup in the environment
    Star,     // <t, rho> |_ *
    Eps,      // <eps, rho> |_ eps, rho nonempty
    EpsN,     // <eps, ()> |_ eps
    Succ,     // <s_i t, rho> |_ s_i v*
    SuccN,    // <s_i v, ()> |_ s_i v
    ConstFn,  // <eps^m(...), rho> |_ eps
    Proj,     // <proj^i_m(...), rho> |_ v*_i
    Comp,     // composition
    RecEps,   // recursion, eps branch
    RecSucc,  // recursion, successor branch
  } kind;
  int bit = -1;  // Succ / SuccN / RecSucc
  int m = -1;    // ConstFn / Proj
  int i = -1;    // Proj

  static RuleTag subst() { return {Subst, -1, -1, -1}; }
  static RuleTag star_rule() { return {Star, -1, -1, -1}; }
  static RuleTag eps_rule() { return {Eps, -1, -1, -1}; }
  static RuleTag eps_n() { return {EpsN, -1, -1, -1}; }
  static RuleTag succ_rule(int b) { return {Succ, b, -1, -1}; }
  static RuleTag succ_n(int b) { return {SuccN, b, -1, -1}; }
  static RuleTag const_fn(int m) { return {ConstFn, -1, m, -1}; }
  static RuleTag proj_rule(int i, int m) { return {Proj, -1, m, i}; }
  static RuleTag comp_rule() { return {Comp, -1, -1, -1}; }
  static RuleTag rec_eps() { return {RecEps, -1, -1, -1}; }
  static RuleTag rec_succ(int b) { return {RecSucc, b, -1, -1}; }
};

bool tag_equal(const RuleTag& a, const RuleTag& b);
std::string tag_name(const RuleTag& t);

// ---------------------------------------------------------------------------
// Computation DAGs

struct CompNode {
  std::vector<std::size_t> premises;  // indices of earlier nodes
  RuleTag rule;
  Statement stmt;
};

class CompDag {
 public:
  std::vector<CompNode> nodes;

  std::size_t size() const { return nodes.size(); }
  // Indices of nodes never used as a premise, in index order.
  std::vector<std::size_t> conclusion_indices() const;
  std::vector<Statement> conclusions() const;
  bool concludes(const Statement& s) const;
  std::optional<std::size_t> find_stmt(const Statement& s) const;
};

// ---------------------------------------------------------------------------
// Validation

struct RuleViolation {
  std::size_t node;
  std::string condition;
};

// ok iff every node instantiates its rule schema; reports the first failure.
std::optional<RuleViolation> validate(const CompDag& dag);

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
  Count node_count = 0;
  Count M = 0;          // max main-term size over all nodes
  Count T = 0;          // max over conclusions of main-term and env sizes
  Count value_max = 0;  // max ||v|| over all nodes
};

Metrics metrics(const CompDag& dag);

struct MBoundAudit {
  bool holds = false;
  Count minimal_c_num = 0;  // M
  Count minimal_c_den = 1;  // (T + n + 1)^2
  double minimal_c = 0.0;
};

// M(sigma) <= C * (T + n + 1)^2 with the given C.
MBoundAudit audit_M_bound(const CompDag& dag, Count C);

// ---------------------------------------------------------------------------
// Structural audits (one flag per lemma-shaped check)

struct StructuralAudit {
  bool succ_values = true;      // <eps,rho>|_v has v in {eps, *}
  bool num_approx = true;       // numeral main <= value pointwise
  bool const_value = true;      // every non-* value v has a <v,()>|_v node
  bool env_subseq = true;       // every env is a subsequence of a conclusion env
  bool value_bound = true;      // ||v|| <= 3 * node count
  bool numeral_subterm = true;  // proper g-numeral subterms of mains bounded
  bool base_closed = true;      // symbols of the dag lie in Base(conclusions)
  bool all() const {
    return succ_values && num_approx && const_value && env_subseq && value_bound &&
           numeral_subterm && base_closed;
  }
};

StructuralAudit audit_structural(const CompDag& dag);

// ---------------------------------------------------------------------------
// Surgery

// Surfaces stmt(i) as a conclusion by duplicating its inference if needed.
CompDag make_conclusion(const CompDag& dag, std::size_t i);

// Removes s from the conclusion set, garbage-collecting unreachable nodes.
// Throws std::invalid_argument if s is not a conclusion or would empty the set.
CompDag drop_conclusion(const CompDag& dag, const Statement& s);

// ---------------------------------------------------------------------------
// Builder: append-only construction with statement-level sharing.

class DagBuilder {
 public:
  DagBuilder() = default;
  explicit DagBuilder(CompDag dag);

  // Adds a node unless an identical statement already exists (then reuses it).
  std::size_t add(RuleTag rule, std::vector<std::size_t> premises, Statement stmt);
  // Always appends.
  std::size_t add_new(RuleTag rule, std::vector<std::size_t> premises, Statement stmt);
  std::optional<std::size_t> find(const Statement& s) const;

  // Marks statements whose conclusion status must survive premise reuse.
  void protect(const Statement& s);
  void unprotect(const Statement& s);
  // Returns idx, first duplicating idx's inference if consuming it as a
  // premise would remove a protected statement from the conclusion set.
  std::size_t use_as_premise(std::size_t idx);

  bool is_unused(std::size_t idx) const { return use_count_[idx] == 0; }
  const CompDag& dag() const { return dag_; }
  CompDag take() { return std::move(dag_); }

  // Derives <v, rho> |_ v for a g-numeral v (shares existing statements).
  std::size_t numeral_node(const Term& v, const Development& rho);
  // Derives <t, rho> |_ * .
  std::size_t star_node(const Term& t, const Development& rho);

 private:
  CompDag dag_;
  std::vector<Count> use_count_;
  std::unordered_map<Statement, std::size_t, StmtHash, StmtEq> memo_;
  std::unordered_map<Statement, Count, StmtHash, StmtEq> protected_;
};

// Drops every conclusion whose statement is in `stale` (if still a conclusion)
// and garbage-collects; keeps everything reachable from the other conclusions.
CompDag drop_stale_conclusions(CompDag dag, const std::vector<Statement>& stale);

}  // namespace pvw
