#include "pvw/comp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pvw {

bool stmt_equal(const Statement& a, const Statement& b) {
  return term_equal(a.main, b.main) && term_equal(a.value, b.value) &&
         dev_equal(a.env, b.env);
}

namespace {

std::string term_brief(const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return t->name;
    case TermKind::Star: return "*";
    case TermKind::App: {
      if (is_eps(t)) return "eps";
      if (auto s = succ_split(t))
        return (s->first ? std::string("s1 ") : std::string("s0 ")) +
               term_brief(s->second);
      std::string out = fn_brief(t->fn) + "(";
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ",";
        out += term_brief(t->args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

}  // namespace

std::string stmt_brief(const Statement& s) {
  std::ostringstream os;
  os << "<" << term_brief(s.main) << ", ";
  if (s.env.empty()) {
    os << "()";
  } else {
    for (const auto& b : s.env.bindings())
      os << "[" << term_brief(b.term) << "/" << b.var << "]";
  }
  os << "> |_ " << term_brief(s.value);
  return os.str();
}

bool tag_equal(const RuleTag& a, const RuleTag& b) {
  return a.kind == b.kind && a.bit == b.bit && a.m == b.m && a.i == b.i;
}

std::string tag_name(const RuleTag& t) {
  switch (t.kind) {
    case RuleTag::Subst: return "subst";
    case RuleTag::Star: return "star";
    case RuleTag::Eps: return "eps";
    case RuleTag::EpsN: return "epsn";
    case RuleTag::Succ: return t.bit ? "succ1" : "succ0";
    case RuleTag::SuccN: return t.bit ? "succn1" : "succn0";
    case RuleTag::ConstFn: return "constfn" + std::to_string(t.m);
    case RuleTag::Proj:
      return "proj" + std::to_string(t.i) + "." + std::to_string(t.m);
    case RuleTag::Comp: return "comp";
    case RuleTag::RecEps: return "receps";
    case RuleTag::RecSucc: return t.bit ? "recsucc1" : "recsucc0";
  }
  return "?";
}

std::vector<std::size_t> CompDag::conclusion_indices() const {
  std::vector<bool> used(nodes.size(), false);
  for (const auto& n : nodes)
    for (auto p : n.premises)
      if (p < nodes.size()) used[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!used[i]) out.push_back(i);
  return out;
}

std::vector<Statement> CompDag::conclusions() const {
  std::vector<Statement> out;
  for (auto i : conclusion_indices()) out.push_back(nodes[i].stmt);
  return out;
}

bool CompDag::concludes(const Statement& s) const {
  for (auto i : conclusion_indices())
    if (stmt_equal(nodes[i].stmt, s)) return true;
  return false;
}

std::optional<std::size_t> CompDag::find_stmt(const Statement& s) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (stmt_equal(nodes[i].stmt, s)) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct NodeChecker {
  const CompDag& dag;
  std::size_t idx;
  const CompNode& node;
  std::optional<std::string> fail;

  NodeChecker(const CompDag& d, std::size_t i) : dag(d), idx(i), node(d.nodes[i]) {}

  bool bad(const std::string& cond) {
    if (!fail) fail = cond;
    return false;
  }

  const Statement& prem(std::size_t k) const {
    return dag.nodes[node.premises[k]].stmt;
  }

  bool check_premise_count(std::size_t expected) {
    if (node.premises.size() != expected)
      return bad("premise-count: expected " + std::to_string(expected) + ", got " +
                 std::to_string(node.premises.size()));
    return true;
  }

  // Statement premises (<t_i, rho> |_ v_i) for every non-g-numeral argument,
  // starting at premise position `from`; returns per-argument values
  // (the argument itself when it is a g-numeral).
  bool check_arg_premises(const std::vector<Term>& args, std::size_t from,
                          std::vector<Term>& values) {
    const auto& rho = node.stmt.env;
    std::size_t k = from;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (is_g_numeral(args[i])) {
        values.push_back(args[i]);
        continue;
      }
      if (k >= node.premises.size())
        return bad("arg-premise-missing: argument " + std::to_string(i + 1));
      const Statement& p = prem(k++);
      if (!term_equal(p.main, args[i]))
        return bad("arg-premise-main: argument " + std::to_string(i + 1));
      if (!dev_equal(p.env, rho))
        return bad("arg-premise-env: argument " + std::to_string(i + 1));
      values.push_back(p.value);
    }
    if (k != node.premises.size()) return bad("arg-premise-extra");
    return true;
  }

  // Purely numerical premise < f(args), () > |_ value with the given head.
  bool check_numeric_premise(std::size_t k, const Fn& head, Count arity,
                             const std::string& what, std::vector<Term>* args_out,
                             Term* value_out) {
    const Statement& p = prem(k);
    if (!p.env.empty()) return bad(what + "-env-nonempty");
    if (p.main->kind != TermKind::App || !fn_equal(p.main->fn, head))
      return bad(what + "-head");
    if (static_cast<Count>(p.main->args.size()) != arity) return bad(what + "-arity");
    for (const auto& a : p.main->args)
      if (!is_g_numeral(a)) return bad(what + "-arg-not-numeral");
    if (args_out) *args_out = p.main->args;
    if (value_out) *value_out = p.value;
    return true;
  }

  bool run() {
    const Statement& st = node.stmt;
    if (!is_g_numeral(st.value)) return bad("value-not-g-numeral");
    for (auto p : node.premises)
      if (p >= idx) return bad("premise-not-earlier");

    switch (node.rule.kind) {
      case RuleTag::Star: {
        if (!check_premise_count(0)) return false;
        if (!is_star(st.value)) return bad("star.value");
        return true;
      }
      case RuleTag::EpsN: {
        if (!check_premise_count(0)) return false;
        if (!is_eps(st.main)) return bad("epsn.main");
        if (!st.env.empty()) return bad("epsn.env-nonempty");
        if (!is_eps(st.value)) return bad("epsn.value");
        return true;
      }
      case RuleTag::Eps: {
        if (!check_premise_count(1)) return false;
        if (!is_eps(st.main)) return bad("eps.main");
        if (st.env.empty()) return bad("eps.env-empty");
        if (!is_eps(st.value)) return bad("eps.value");
        const Statement& p = prem(0);
        if (!is_eps(p.main) || !p.env.empty() || !is_eps(p.value))
          return bad("eps.premise-shape");
        return true;
      }
      case RuleTag::Subst: {
        if (!check_premise_count(1)) return false;
        if (st.main->kind != TermKind::Var) return bad("subst.main-not-var");
        auto hit = st.env.lookup(st.main->name);
        if (!hit) return bad("subst.unbound");
        const Statement& p = prem(0);
        if (!term_equal(p.main, hit->term)) return bad("subst.premise-main");
        if (!dev_equal(p.env, st.env.suffix_after(hit->position)))
          return bad("subst.premise-env-suffix");
        if (!term_equal(p.value, st.value)) return bad("subst.premise-value");
        return true;
      }
      case RuleTag::SuccN: {
        if (!check_premise_count(1)) return false;
        auto s = succ_split(st.main);
        if (!s || s->first != node.rule.bit) return bad("succn.main-head");
        if (!is_g_numeral(st.main)) return bad("succn.main-not-numeral");
        if (!st.env.empty()) return bad("succn.env-nonempty");
        if (!term_equal(st.value, st.main)) return bad("succn.value-differs");
        const Statement& p = prem(0);
        if (!term_equal(p.main, s->second) || !p.env.empty() ||
            !term_equal(p.value, s->second))
          return bad("succn.premise-shape");
        return true;
      }
      case RuleTag::Succ: {
        if (!check_premise_count(2)) return false;
        auto s = succ_split(st.main);
        if (!s || s->first != node.rule.bit) return bad("succ.main-head");
        auto sv = succ_split(st.value);
        if (!sv || sv->first != node.rule.bit) return bad("succ.value-head");
        const Term& t = s->second;
        const Term& vstar = sv->second;
        const Statement& p0 = prem(0);
        if (!term_equal(p0.main, st.value) || !p0.env.empty() ||
            !term_equal(p0.value, st.value))
          return bad("succ.premise1-shape");
        const Statement& p1 = prem(1);
        if (!term_equal(p1.main, t)) return bad("succ.premise2-main");
        if (!dev_equal(p1.env, st.env)) return bad("succ.premise2-env");
        if (!approx_leq(p1.value, vstar)) return bad("succ.approx");
        if (term_equal(t, vstar) && st.env.empty()) return bad("succ.numeral-form-required");
        return true;
      }
      case RuleTag::ConstFn: {
        if (st.main->kind != TermKind::App || st.main->fn->kind != FnKind::ConstN)
          return bad("constfn.main-head");
        if (node.rule.m != st.main->fn->n) return bad("constfn.tag-arity");
        if (!is_eps(st.value)) return bad("constfn.value");
        if (node.premises.empty()) return bad("constfn.premise-missing");
        const Statement& p0 = prem(0);
        if (!is_eps(p0.main) || !p0.env.empty() || !is_eps(p0.value))
          return bad("constfn.premise1-shape");
        std::vector<Term> values;
        return check_arg_premises(st.main->args, 1, values);
      }
      case RuleTag::Proj: {
        if (st.main->kind != TermKind::App || st.main->fn->kind != FnKind::Proj)
          return bad("proj.main-head");
        if (node.rule.m != st.main->fn->n || node.rule.i != st.main->fn->index)
          return bad("proj.tag-mismatch");
        if (node.premises.empty()) return bad("proj.premise-missing");
        const Statement& p0 = prem(0);
        if (!term_equal(p0.main, st.value) || !p0.env.empty() ||
            !term_equal(p0.value, st.value))
          return bad("proj.premise1-shape");
        std::vector<Term> values;
        if (!check_arg_premises(st.main->args, 1, values)) return false;
        std::size_t i = static_cast<std::size_t>(st.main->fn->index - 1);
        if (!approx_leq(values[i], st.value)) return bad("proj.approx");
        return true;
      }
      case RuleTag::Comp: {
        if (st.main->kind != TermKind::App || st.main->fn->kind != FnKind::Comp)
          return bad("comp.main-head");
        const Fn& f = st.main->fn;
        std::size_t m = f->hs.size();
        if (node.premises.size() < 1 + m) return bad("comp.premise-missing");
        std::vector<Term> wstar;
        Term z;
        if (!check_numeric_premise(0, f->g, f->g->arity, "comp.g", &wstar, &z))
          return false;
        if (!term_equal(z, st.value)) return bad("comp.g-value");
        std::vector<Term> w(m);
        std::vector<std::vector<Term>> vj(m);
        for (std::size_t j = 0; j < m; ++j) {
          if (!check_numeric_premise(1 + j, f->hs[j], f->hs[j]->arity,
                                     "comp.h" + std::to_string(j + 1), &vj[j], &w[j]))
            return false;
        }
        std::vector<Term> values;
        if (!check_arg_premises(st.main->args, 1 + m, values)) return false;
        for (std::size_t j = 0; j < m; ++j) {
          if (!approx_leq(w[j], wstar[j])) return bad("comp.w-approx");
          for (std::size_t i = 0; i < values.size(); ++i)
            if (!approx_leq(values[i], vj[j][i])) return bad("comp.arg-approx");
        }
        return true;
      }
      case RuleTag::RecEps: {
        if (st.main->kind != TermKind::App || st.main->fn->kind != FnKind::Rec)
          return bad("receps.main-head");
        const Fn& f = st.main->fn;
        const Term& scrut = st.main->args[0];
        std::vector<Term> rest(st.main->args.begin() + 1, st.main->args.end());
        if (node.premises.empty()) return bad("receps.premise-missing");
        std::vector<Term> v1;
        Term z;
        if (!check_numeric_premise(0, f->g_eps, f->g_eps->arity, "receps.g", &v1, &z))
          return false;
        if (!term_equal(z, st.value)) return bad("receps.g-value");
        std::size_t from = 1;
        if (is_g_numeral(scrut)) {
          if (!is_eps(scrut)) return bad("receps.scrutinee-not-eps");
        } else {
          if (node.premises.size() < 2) return bad("receps.scrutinee-premise-missing");
          const Statement& p = prem(1);
          if (!term_equal(p.main, scrut)) return bad("receps.scrutinee-main");
          if (!dev_equal(p.env, st.env)) return bad("receps.scrutinee-env");
          if (!is_eps(p.value)) return bad("receps.scrutinee-value");
          from = 2;
        }
        std::vector<Term> values;
        if (!check_arg_premises(rest, from, values)) return false;
        for (std::size_t i = 0; i < values.size(); ++i)
          if (!approx_leq(values[i], v1[i])) return bad("receps.arg-approx");
        return true;
      }
      case RuleTag::RecSucc: {
        if (st.main->kind != TermKind::App || st.main->fn->kind != FnKind::Rec)
          return bad("recsucc.main-head");
        const Fn& f = st.main->fn;
        int bit = node.rule.bit;
        const Fn& gi = bit ? f->g1 : f->g0;
        const Term& scrut = st.main->args[0];
        std::vector<Term> rest(st.main->args.begin() + 1, st.main->args.end());
        if (node.premises.empty()) return bad("recsucc.premise-missing");
        std::vector<Term> g_args;
        Term z;
        if (!check_numeric_premise(0, gi, gi->arity, "recsucc.g", &g_args, &z))
          return false;
        if (!term_equal(z, st.value)) return bad("recsucc.g-value");
        Term v0_1 = g_args[0], w1 = g_args[1];
        std::vector<Term> v1(g_args.begin() + 2, g_args.end());

        Term v0;  // scrutinee tail
        std::size_t from = 1;
        if (is_g_numeral(scrut)) {
          auto s = succ_split(scrut);
          if (!s || s->first != bit) return bad("recsucc.scrutinee-head");
          v0 = s->second;
        } else {
          if (node.premises.size() < 2) return bad("recsucc.scrutinee-premise-missing");
          const Statement& p = prem(1);
          if (!term_equal(p.main, scrut)) return bad("recsucc.scrutinee-main");
          if (!dev_equal(p.env, st.env)) return bad("recsucc.scrutinee-env");
          auto s = succ_split(p.value);
          if (!s || s->first != bit) return bad("recsucc.scrutinee-value-head");
          v0 = s->second;
          from = 2;
        }
        if (node.premises.size() < from + 1) return bad("recsucc.rec-premise-missing");
        std::vector<Term> rec_args;
        Term w;
        if (!check_numeric_premise(from, f, f->arity, "recsucc.rec", &rec_args, &w))
          return false;
        Term v0_2 = rec_args[0];
        std::vector<Term> v2(rec_args.begin() + 1, rec_args.end());
        std::vector<Term> values;
        if (!check_arg_premises(rest, from + 1, values)) return false;

        if (!approx_leq(v0, v0_1)) return bad("recsucc.v0-approx-g");
        if (!approx_leq(v0, v0_2)) return bad("recsucc.v0-approx-rec");
        if (!approx_leq(w, w1)) return bad("recsucc.w-approx");
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (!approx_leq(values[i], v1[i])) return bad("recsucc.arg-approx-g");
          if (!approx_leq(values[i], v2[i])) return bad("recsucc.arg-approx-rec");
        }
        return true;
      }
    }
    return bad("unknown-rule");
  }
};

}  // namespace

std::optional<RuleViolation> validate(const CompDag& dag) {
  if (dag.nodes.empty()) return RuleViolation{0, "empty-computation"};
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    NodeChecker ck(dag, i);
    if (!ck.run()) return RuleViolation{i, ck.fail.value_or("unknown")};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Metrics metrics(const CompDag& dag) {
  Metrics m;
  m.node_count = static_cast<Count>(dag.nodes.size());
  for (const auto& n : dag.nodes) {
    m.M = std::max(m.M, n.stmt.main->size);
    m.value_max = std::max(m.value_max, n.stmt.value->size);
  }
  for (auto i : dag.conclusion_indices()) {
    m.T = std::max(m.T, dag.nodes[i].stmt.main->size);
    m.T = std::max(m.T, dag.nodes[i].stmt.env.size());
  }
  return m;
}

MBoundAudit audit_M_bound(const CompDag& dag, Count C) {
  Metrics m = metrics(dag);
  MBoundAudit a;
  Count base = m.T + m.node_count + 1;
  a.minimal_c_num = m.M;
  a.minimal_c_den = base * base;
  Count g = std::gcd(a.minimal_c_num, a.minimal_c_den);
  if (g > 1) {
    a.minimal_c_num /= g;
    a.minimal_c_den /= g;
  }
  a.minimal_c = static_cast<double>(m.M) / static_cast<double>(base * base);
  a.holds = m.M <= C * base * base;
  return a;
}

// ---------------------------------------------------------------------------
// Structural audits

namespace {

void proper_numeral_subterms(const Term& t, bool root, std::vector<Term>& out) {
  if (!root && is_g_numeral(t)) {
    out.push_back(t);
    return;  // subterms of a g-numeral are smaller g-numerals
  }
  if (t->kind == TermKind::App)
    for (const auto& a : t->args) proper_numeral_subterms(a, false, out);
}

}  // namespace

StructuralAudit audit_structural(const CompDag& dag) {
  StructuralAudit a;
  Metrics m = metrics(dag);
  auto concl = dag.conclusion_indices();

  std::unordered_map<Statement, bool, StmtHash, StmtEq> present;
  for (const auto& n : dag.nodes) present[n.stmt] = true;

  FnSet base_source;
  std::vector<Development> concl_envs;
  for (auto i : concl) {
    const Statement& s = dag.nodes[i].stmt;
    collect_symbols(s.main, base_source);
    collect_symbols(s.value, base_source);
    for (const auto& b : s.env.bindings()) collect_symbols(b.term, base_source);
    concl_envs.push_back(s.env);
  }
  FnSet base = base_symbols(base_source);

  for (const auto& n : dag.nodes) {
    const Statement& s = n.stmt;
    // (a) eps main terms only compute to eps or *.
    if (is_eps(s.main) && !(is_eps(s.value) || is_star(s.value))) a.succ_values = false;
    if (auto sp = succ_split(s.main); sp && is_g_numeral(s.main)) {
      auto vp = succ_split(s.value);
      if (!is_star(s.value) && (!vp || vp->first != sp->first)) a.succ_values = false;
    }
    // (b) numeral-to-numeral statements respect the approximation order.
    if (is_g_numeral(s.main) && !approx_leq(s.main, s.value)) a.num_approx = false;
    // (c) values are re-derivable: <v, ()> |_ v present for non-* values.
    if (!is_star(s.value)) {
      Statement want{s.value, Development{}, s.value};
      if (!present.count(want)) a.const_value = false;
    }
    // (d) environments are subsequences of conclusion environments.
    bool sub = false;
    for (const auto& ce : concl_envs)
      if (Development::subsequence(s.env, ce)) {
        sub = true;
        break;
      }
    if (!sub) a.env_subseq = false;
    // (e) value sizes bounded by 3 * node count.
    if (s.value->size > 3 * m.node_count) a.value_bound = false;
    // (f) proper g-numeral subterms of main terms bounded.
    std::vector<Term> subs;
    proper_numeral_subterms(s.main, true, subs);
    for (const auto& u : subs)
      if (u->size > std::max<Count>(3 * m.node_count, m.T)) a.numeral_subterm = false;
    // (g) all symbols lie in the base closure of the conclusions.
    FnSet here;
    collect_symbols(s.main, here);
    collect_symbols(s.value, here);
    for (const auto& b : s.env.bindings()) collect_symbols(b.term, here);
    for (const auto& f : here)
      if (!base.count(f)) a.base_closed = false;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Surgery

CompDag make_conclusion(const CompDag& dag, std::size_t i) {
  if (i >= dag.nodes.size()) throw std::invalid_argument("make_conclusion: index out of range");
  if (dag.concludes(dag.nodes[i].stmt)) return dag;
  CompDag out = dag;
  out.nodes.push_back(dag.nodes[i]);
  return out;
}

namespace {

CompDag collect_from_roots(const CompDag& dag, const std::vector<std::size_t>& roots) {
  std::vector<bool> keep(dag.nodes.size(), false);
  std::vector<std::size_t> stack(roots);
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (keep[i]) continue;
    keep[i] = true;
    for (auto p : dag.nodes[i].premises) stack.push_back(p);
  }
  std::vector<std::size_t> remap(dag.nodes.size(), 0);
  CompDag out;
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = out.nodes.size();
    CompNode n = dag.nodes[i];
    for (auto& p : n.premises) p = remap[p];
    out.nodes.push_back(std::move(n));
  }
  return out;
}

}  // namespace

CompDag drop_conclusion(const CompDag& dag, const Statement& s) {
  auto concl = dag.conclusion_indices();
  std::vector<std::size_t> roots;
  bool found = false;
  for (auto i : concl) {
    if (stmt_equal(dag.nodes[i].stmt, s)) {
      found = true;
    } else {
      roots.push_back(i);
    }
  }
  if (!found) throw std::invalid_argument("drop_conclusion: not a conclusion");
  if (roots.empty())
    throw std::invalid_argument("drop_conclusion: would empty the conclusion set");
  return collect_from_roots(dag, roots);
}

CompDag drop_stale_conclusions(CompDag dag, const std::vector<Statement>& stale) {
  auto concl = dag.conclusion_indices();
  std::vector<std::size_t> roots;
  for (auto i : concl) {
    bool is_stale = false;
    for (const auto& s : stale)
      if (stmt_equal(dag.nodes[i].stmt, s)) {
        is_stale = true;
        break;
      }
    if (!is_stale) roots.push_back(i);
  }
  if (roots.empty())
    throw std::invalid_argument("drop_stale_conclusions: would empty the conclusion set");
  return collect_from_roots(dag, roots);
}

// ---------------------------------------------------------------------------
// Builder

DagBuilder::DagBuilder(CompDag dag) : dag_(std::move(dag)) {
  use_count_.assign(dag_.nodes.size(), 0);
  for (std::size_t i = 0; i < dag_.nodes.size(); ++i) {
    for (auto p : dag_.nodes[i].premises) ++use_count_[p];
    memo_.emplace(dag_.nodes[i].stmt, i);  // keeps the first occurrence
  }
}

std::size_t DagBuilder::add_new(RuleTag rule, std::vector<std::size_t> premises,
                                Statement stmt) {
  for (auto p : premises) {
    if (p >= dag_.nodes.size()) throw std::invalid_argument("builder: bad premise index");
    ++use_count_[p];
  }
  dag_.nodes.push_back(CompNode{std::move(premises), rule, stmt});
  use_count_.push_back(0);
  memo_.emplace(std::move(stmt), dag_.nodes.size() - 1);
  return dag_.nodes.size() - 1;
}

std::size_t DagBuilder::add(RuleTag rule, std::vector<std::size_t> premises,
                            Statement stmt) {
  auto hit = memo_.find(stmt);
  if (hit != memo_.end()) return hit->second;
  return add_new(rule, std::move(premises), std::move(stmt));
}

std::optional<std::size_t> DagBuilder::find(const Statement& s) const {
  auto hit = memo_.find(s);
  if (hit == memo_.end()) return std::nullopt;
  return hit->second;
}

void DagBuilder::protect(const Statement& s) { protected_[s] += 1; }
void DagBuilder::unprotect(const Statement& s) {
  auto it = protected_.find(s);
  if (it != protected_.end() && --it->second <= 0) protected_.erase(it);
}

std::size_t DagBuilder::use_as_premise(std::size_t idx) {
  if (use_count_[idx] == 0 && protected_.count(dag_.nodes[idx].stmt)) {
    // Keep the protected statement concluded by duplicating its inference.
    dag_.nodes.push_back(dag_.nodes[idx]);
    use_count_.push_back(0);
    for (auto p : dag_.nodes.back().premises) ++use_count_[p];
  }
  return idx;
}

std::size_t DagBuilder::numeral_node(const Term& v, const Development& rho) {
  Statement want{v, rho, v};
  if (auto hit = find(want)) return use_as_premise(*hit);
  if (is_star(v)) {
    return add_new(RuleTag::star_rule(), {}, want);
  }
  if (is_eps(v)) {
    if (rho.empty()) return add_new(RuleTag::eps_n(), {}, want);
    std::size_t base = numeral_node(v, Development{});
    return add_new(RuleTag::eps_rule(), {base}, want);
  }
  auto s = succ_split(v);
  if (!s) throw std::invalid_argument("numeral_node: not a g-numeral");
  if (rho.empty()) {
    std::size_t sub = numeral_node(s->second, rho);
    return add_new(RuleTag::succ_n(s->first), {sub}, want);
  }
  std::size_t chain = numeral_node(v, Development{});
  std::size_t sub = numeral_node(s->second, rho);
  return add_new(RuleTag::succ_rule(s->first), {chain, sub}, want);
}

std::size_t DagBuilder::star_node(const Term& t, const Development& rho) {
  Statement want{t, rho, star()};
  if (auto hit = find(want)) return use_as_premise(*hit);
  return add_new(RuleTag::star_rule(), {}, want);
}

}  // namespace pvw
