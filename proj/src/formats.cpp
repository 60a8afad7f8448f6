#include "pvw/formats.hpp"

#include <charconv>

namespace pvw {

namespace {

int parse_int(const Sexpr& s) {
  if (!s.is_atom) s.fail("expected a number");
  int value = 0;
  auto [p, ec] = std::from_chars(s.atom.data(), s.atom.data() + s.atom.size(), value);
  if (ec != std::errc{} || p != s.atom.data() + s.atom.size())
    s.fail("expected a number, got '" + s.atom + "'");
  return value;
}

std::string parse_name(const Sexpr& s) {
  if (!s.is_atom) s.fail("expected a name");
  return s.atom;
}

}  // namespace

// ---------------------------------------------------------------------------
// Definitions

Fn parse_def(const Sexpr& s, const DefsTable& defs) {
  if (s.is_atom) {
    if (s.atom == "eps") return FunctionDef::eps();
    if (s.atom == "s0") return FunctionDef::succ(0);
    if (s.atom == "s1") return FunctionDef::succ(1);
    s.fail("unknown definition atom '" + s.atom + "'");
  }
  const std::string& h = s.head();
  try {
    if (h == "eps-n") {
      if (s.size() != 2) s.fail("eps-n takes one number");
      return FunctionDef::const_n(parse_int(s.at(1)));
    }
    if (h == "proj") {
      if (s.size() != 3) s.fail("proj takes arity and index");
      return FunctionDef::proj(parse_int(s.at(1)), parse_int(s.at(2)));
    }
    if (h == "comp") {
      if (s.size() < 3) s.fail("comp takes g and at least one h");
      Fn g = parse_def(s.at(1), defs);
      std::vector<Fn> hs;
      for (std::size_t i = 2; i < s.size(); ++i) hs.push_back(parse_def(s.at(i), defs));
      return FunctionDef::comp(std::move(g), std::move(hs));
    }
    if (h == "rec") {
      if (s.size() != 4) s.fail("rec takes three definitions");
      return FunctionDef::rec(parse_def(s.at(1), defs), parse_def(s.at(2), defs),
                              parse_def(s.at(3), defs));
    }
    if (h == "named") {
      if (s.size() != 2) s.fail("named takes one name");
      std::string name = parse_name(s.at(1));
      auto it = defs.find(name);
      if (it == defs.end()) s.fail("unknown named definition '" + name + "'");
      return it->second;
    }
  } catch (const std::invalid_argument& e) {
    s.fail(e.what());
  }
  s.fail("unknown definition form '" + h + "'");
}

Sexpr emit_def(const Fn& f) {
  switch (f->kind) {
    case FnKind::Eps: return atom("eps");
    case FnKind::Succ: return atom(f->bit ? "s1" : "s0");
    case FnKind::ConstN:
      return list({atom("eps-n"), atom(std::to_string(f->n))});
    case FnKind::Proj:
      return list({atom("proj"), atom(std::to_string(f->n)),
                   atom(std::to_string(f->index))});
    case FnKind::Comp: {
      std::vector<Sexpr> items{atom("comp"), emit_def(f->g)};
      for (const auto& h : f->hs) items.push_back(emit_def(h));
      return list(std::move(items));
    }
    case FnKind::Rec:
      return list({atom("rec"), emit_def(f->g_eps), emit_def(f->g0), emit_def(f->g1)});
  }
  return atom("?");
}

DefsTable parse_defs_file(const std::string& text) {
  Sexpr s = parse_sexpr(text);
  if (s.head() != "defs") s.fail("expected (defs ...)");
  DefsTable defs;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const Sexpr& d = s.at(i);
    if (d.head() != "def" || d.size() != 3) d.fail("expected (def NAME DEF)");
    std::string name = parse_name(d.at(1));
    if (defs.count(name)) d.fail("duplicate definition '" + name + "'");
    defs.emplace(name, parse_def(d.at(2), defs));
  }
  return defs;
}

std::string emit_defs_file(const DefsTable& defs) {
  std::vector<Sexpr> items{atom("defs")};
  for (const auto& [name, f] : defs)
    items.push_back(list({atom("def"), atom(name), emit_def(f)}));
  return print_sexpr(list(std::move(items)));
}

// ---------------------------------------------------------------------------
// Terms

Term parse_term(const Sexpr& s, const DefsTable& defs) {
  if (s.is_atom) {
    if (s.atom == "eps") return eps_term();
    if (s.atom == "star") return star();
    s.fail("unknown term atom '" + s.atom + "'");
  }
  const std::string& h = s.head();
  try {
    if (h == "s0" || h == "s1") {
      if (s.size() != 2) s.fail(h + " takes one term");
      return succ_term(h == "s1" ? 1 : 0, parse_term(s.at(1), defs));
    }
    if (h == "var") {
      if (s.size() != 2) s.fail("var takes one name");
      return var(parse_name(s.at(1)));
    }
    if (h == "app") {
      if (s.size() < 2) s.fail("app takes a definition and arguments");
      Fn f = parse_def(s.at(1), defs);
      std::vector<Term> args;
      for (std::size_t i = 2; i < s.size(); ++i)
        args.push_back(parse_term(s.at(i), defs));
      return app(std::move(f), std::move(args));
    }
  } catch (const std::invalid_argument& e) {
    s.fail(e.what());
  }
  s.fail("unknown term form '" + h + "'");
}

Term parse_term_text(const std::string& text, const DefsTable& defs) {
  return parse_term(parse_sexpr(text), defs);
}

Sexpr emit_term(const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return list({atom("var"), atom(t->name)});
    case TermKind::Star: return atom("star");
    case TermKind::App: {
      if (is_eps(t)) return atom("eps");
      if (auto s = succ_split(t))
        return list({atom(s->first ? "s1" : "s0"), emit_term(s->second)});
      std::vector<Sexpr> items{atom("app"), emit_def(t->fn)};
      for (const auto& a : t->args) items.push_back(emit_term(a));
      return list(std::move(items));
    }
  }
  return atom("?");
}

std::string emit_term_text(const Term& t) { return print_sexpr(emit_term(t)); }

// ---------------------------------------------------------------------------
// Environments

Development parse_env(const Sexpr& s, const DefsTable& defs) {
  if (s.head() != "env") s.fail("expected (env ...)");
  std::vector<Binding> bs;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const Sexpr& b = s.at(i);
    if (b.head() != "bind" || b.size() != 3) b.fail("expected (bind NAME TERM)");
    bs.push_back({parse_name(b.at(1)), parse_term(b.at(2), defs)});
  }
  try {
    return Development(std::move(bs));
  } catch (const std::invalid_argument& e) {
    s.fail(e.what());
  }
}

Development parse_env_text(const std::string& text, const DefsTable& defs) {
  return parse_env(parse_sexpr(text), defs);
}

Sexpr emit_env(const Development& rho) {
  std::vector<Sexpr> items{atom("env")};
  for (const auto& b : rho.bindings())
    items.push_back(list({atom("bind"), atom(b.var), emit_term(b.term)}));
  return list(std::move(items));
}

std::string emit_env_text(const Development& rho) { return print_sexpr(emit_env(rho)); }

// ---------------------------------------------------------------------------
// Proofs

namespace {

AxiomCase parse_axiom_case(const Sexpr& s) {
  std::string n = parse_name(s);
  if (n == "eps") return AxiomCase::EpsCase;
  if (n == "s0") return AxiomCase::S0Case;
  if (n == "s1") return AxiomCase::S1Case;
  if (n == "comp") return AxiomCase::CompCase;
  if (n == "constn") return AxiomCase::ConstNCase;
  if (n == "proj") return AxiomCase::ProjCase;
  s.fail("unknown axiom case '" + n + "'");
}

Equation parse_equation(const Sexpr& s, const DefsTable& defs) {
  if (s.head() != "eq" || s.size() != 3) s.fail("expected (eq TERM TERM)");
  return Equation{parse_term(s.at(1), defs), parse_term(s.at(2), defs)};
}

Proof parse_proof_node(const Sexpr& s, const DefsTable& defs) {
  if (s.is_atom) s.fail("expected a proof node");
  const std::string& h = s.head();
  if (h == "refl") {
    if (s.size() != 2) s.fail("refl takes one term");
    return ProofTree::identity(parse_term(s.at(1), defs));
  }
  if (h == "sym") {
    if (s.size() != 2) s.fail("sym takes one proof");
    return ProofTree::symmetry(parse_proof_node(s.at(1), defs));
  }
  if (h == "trans") {
    if (s.size() != 3) s.fail("trans takes two proofs");
    return ProofTree::transitivity(parse_proof_node(s.at(1), defs),
                                   parse_proof_node(s.at(2), defs));
  }
  if (h == "cong") {
    if (s.size() < 2) s.fail("cong takes a definition and proofs");
    Fn f = parse_def(s.at(1), defs);
    std::vector<Proof> ps;
    for (std::size_t i = 2; i < s.size(); ++i)
      ps.push_back(parse_proof_node(s.at(i), defs));
    return ProofTree::congruence(std::move(f), std::move(ps));
  }
  if (h == "substp") {
    if (s.size() != 4) s.fail("substp takes a proof, a term and a name");
    return ProofTree::subst(parse_proof_node(s.at(1), defs),
                            parse_term(s.at(2), defs), parse_name(s.at(3)));
  }
  if (h == "axiom") {
    if (s.size() != 4) s.fail("axiom takes a definition, a case and an equation");
    return ProofTree::axiom(parse_def(s.at(1), defs), parse_axiom_case(s.at(2)),
                            parse_equation(s.at(3), defs));
  }
  s.fail("unknown proof form '" + h + "' (induction is not representable)");
}

Sexpr emit_proof_node(const Proof& p) {
  switch (p->kind) {
    case ProofTree::Identity: return list({atom("refl"), emit_term(p->term)});
    case ProofTree::Symmetry:
      return list({atom("sym"), emit_proof_node(p->children[0])});
    case ProofTree::Transitivity:
      return list({atom("trans"), emit_proof_node(p->children[0]),
                   emit_proof_node(p->children[1])});
    case ProofTree::Congruence: {
      std::vector<Sexpr> items{atom("cong"), emit_def(p->fn)};
      for (const auto& c : p->children) items.push_back(emit_proof_node(c));
      return list(std::move(items));
    }
    case ProofTree::SubstRule:
      return list({atom("substp"), emit_proof_node(p->children[0]),
                   emit_term(p->subst_term), atom(p->subst_var)});
    case ProofTree::DefAxiom:
      return list({atom("axiom"), emit_def(p->fn), atom(axiom_case_name(p->axiom_case)),
                   list({atom("eq"), emit_term(p->instance->lhs),
                         emit_term(p->instance->rhs)})});
  }
  return atom("?");
}

}  // namespace

Proof parse_proof(const Sexpr& s, const DefsTable& defs) {
  if (s.head() != "proof" || s.size() != 2) s.fail("expected (proof P)");
  return parse_proof_node(s.at(1), defs);
}

Proof parse_proof_text(const std::string& text, const DefsTable& defs) {
  return parse_proof(parse_sexpr(text), defs);
}

Sexpr emit_proof(const Proof& p) { return list({atom("proof"), emit_proof_node(p)}); }

std::string emit_proof_text(const Proof& p) { return print_sexpr(emit_proof(p)); }

// ---------------------------------------------------------------------------
// Computations

namespace {

RuleTag parse_rule_tag(const Sexpr& s) {
  if (s.is_atom) {
    if (s.atom == "subst") return RuleTag::subst();
    if (s.atom == "star") return RuleTag::star_rule();
    if (s.atom == "eps") return RuleTag::eps_rule();
    if (s.atom == "epsn") return RuleTag::eps_n();
    if (s.atom == "comp") return RuleTag::comp_rule();
    if (s.atom == "receps") return RuleTag::rec_eps();
    s.fail("unknown rule tag '" + s.atom + "'");
  }
  const std::string& h = s.head();
  if (h == "succ" && s.size() == 2) return RuleTag::succ_rule(parse_int(s.at(1)));
  if (h == "succn" && s.size() == 2) return RuleTag::succ_n(parse_int(s.at(1)));
  if (h == "constfn" && s.size() == 2) return RuleTag::const_fn(parse_int(s.at(1)));
  if (h == "proj" && s.size() == 3)
    return RuleTag::proj_rule(parse_int(s.at(1)), parse_int(s.at(2)));
  if (h == "recsucc" && s.size() == 2) return RuleTag::rec_succ(parse_int(s.at(1)));
  s.fail("unknown rule tag form");
}

Sexpr emit_rule_tag(const RuleTag& t) {
  switch (t.kind) {
    case RuleTag::Subst: return atom("subst");
    case RuleTag::Star: return atom("star");
    case RuleTag::Eps: return atom("eps");
    case RuleTag::EpsN: return atom("epsn");
    case RuleTag::Succ: return list({atom("succ"), atom(std::to_string(t.bit))});
    case RuleTag::SuccN: return list({atom("succn"), atom(std::to_string(t.bit))});
    case RuleTag::ConstFn: return list({atom("constfn"), atom(std::to_string(t.m))});
    case RuleTag::Proj:
      return list({atom("proj"), atom(std::to_string(t.i)), atom(std::to_string(t.m))});
    case RuleTag::Comp: return atom("comp");
    case RuleTag::RecEps: return atom("receps");
    case RuleTag::RecSucc: return list({atom("recsucc"), atom(std::to_string(t.bit))});
  }
  return atom("?");
}

}  // namespace

CompDag parse_comp(const Sexpr& s, const DefsTable& defs) {
  if (s.head() != "comp") s.fail("expected (comp (node ...) ...)");
  CompDag dag;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const Sexpr& n = s.at(i);
    if (n.head() != "node" || n.size() != 5)
      n.fail("expected (node I (rule TAG) (prem I...) (stmt TERM ENV VALUE))");
    int idx = parse_int(n.at(1));
    if (idx != static_cast<int>(dag.nodes.size()))
      n.fail("node indices must be consecutive from 0");
    const Sexpr& rule = n.at(2);
    if (rule.head() != "rule" || rule.size() != 2) rule.fail("expected (rule TAG)");
    const Sexpr& prem = n.at(3);
    if (prem.head() != "prem") prem.fail("expected (prem I...)");
    const Sexpr& stmt = n.at(4);
    if (stmt.head() != "stmt" || stmt.size() != 4)
      stmt.fail("expected (stmt TERM ENV VALUE)");
    CompNode node;
    node.rule = parse_rule_tag(rule.at(1));
    for (std::size_t k = 1; k < prem.size(); ++k) {
      int p = parse_int(prem.at(k));
      if (p < 0 || p >= idx) prem.fail("premise index out of range");
      node.premises.push_back(static_cast<std::size_t>(p));
    }
    node.stmt = Statement{parse_term(stmt.at(1), defs), parse_env(stmt.at(2), defs),
                          parse_term(stmt.at(3), defs)};
    dag.nodes.push_back(std::move(node));
  }
  return dag;
}

CompDag parse_comp_text(const std::string& text, const DefsTable& defs) {
  return parse_comp(parse_sexpr(text), defs);
}

Sexpr emit_comp(const CompDag& dag) {
  std::vector<Sexpr> items{atom("comp")};
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    const CompNode& n = dag.nodes[i];
    std::vector<Sexpr> prem{atom("prem")};
    for (auto p : n.premises) prem.push_back(atom(std::to_string(p)));
    items.push_back(list({atom("node"), atom(std::to_string(i)),
                          list({atom("rule"), emit_rule_tag(n.rule)}),
                          list(std::move(prem)),
                          list({atom("stmt"), emit_term(n.stmt.main),
                                emit_env(n.stmt.env), emit_term(n.stmt.value)})}));
  }
  return list(std::move(items));
}

std::string emit_comp_text(const CompDag& dag) {
  std::string out = "(comp";
  Sexpr s = emit_comp(dag);
  for (std::size_t i = 1; i < s.size(); ++i) {
    out += "\n  ";
    out += print_sexpr(s.at(i));
  }
  out += ")\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSON reports

nlohmann::json metrics_json(const Metrics& m) {
  return nlohmann::json{{"node_count", m.node_count},
                        {"M", m.M},
                        {"T", m.T},
                        {"value_max", m.value_max}};
}

nlohmann::json audit_json(const CompDag& dag, Count C) {
  Metrics m = metrics(dag);
  StructuralAudit a = audit_structural(dag);
  MBoundAudit mb = audit_M_bound(dag, C);
  return nlohmann::json{
      {"node_count", m.node_count},
      {"M", m.M},
      {"T", m.T},
      {"audits",
       {{"succ", a.succ_values},
        {"num", a.num_approx},
        {"const_value", a.const_value},
        {"env_subseq", a.env_subseq},
        {"value_bound", a.value_bound},
        {"numeral_subterm", a.numeral_subterm},
        {"base", a.base_closed}}},
      {"minimal_C", mb.minimal_c}};
}

nlohmann::json check_proof_json(const CheckResult& r) {
  nlohmann::json j{{"ok", r.ok}};
  if (r.conclusion) {
    j["conclusion"] = print_sexpr(list({atom("eq"), emit_term(r.conclusion->lhs),
                                        emit_term(r.conclusion->rhs)}));
    j["size"] = r.size;
  }
  if (r.violation) {
    j["violation"] = {{"path", r.violation->path},
                      {"condition", r.violation->condition}};
  }
  return j;
}

nlohmann::json ledger_json(const Ledger& l) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& e : l.steps) {
    steps.push_back({{"op", e.op},
                     {"claimed", e.claimed_nodes},
                     {"actual_nodes", e.actual_nodes},
                     {"claimed_M", e.claimed_M},
                     {"actual_M", e.actual_M},
                     {"pass", e.pass}});
  }
  return nlohmann::json{{"steps", steps}, {"overall", l.overall}};
}

}  // namespace pvw
