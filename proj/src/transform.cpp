#include "pvw/transform.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace pvw {

namespace {

// ---------------------------------------------------------------------------
// Premise layout of a node, organized by role.

struct Layout {
  std::vector<std::size_t> pre;              // numeric block
  std::optional<std::size_t> scrut;          // Rec scrutinee premise
  std::optional<std::size_t> rec;            // RecSucc recursive premise
  std::map<std::size_t, std::size_t> args;   // main-arg position -> node
};

Layout layout_of(const CompDag& dag, std::size_t idx) {
  const CompNode& n = dag.nodes[idx];
  const auto& prem = n.premises;
  const Term& main = n.stmt.main;
  Layout lay;
  auto args_from = [&](std::size_t k, std::size_t first_pos) {
    for (std::size_t i = first_pos; i < main->args.size(); ++i) {
      if (is_g_numeral(main->args[i])) continue;
      lay.args[i] = prem[k++];
    }
  };
  switch (n.rule.kind) {
    case RuleTag::Subst:
    case RuleTag::Star:
    case RuleTag::Eps:
    case RuleTag::EpsN:
      lay.pre = prem;
      break;
    case RuleTag::Succ:
      lay.pre = {prem[0]};
      lay.args[0] = prem[1];
      break;
    case RuleTag::SuccN:
      lay.args[0] = prem[0];
      break;
    case RuleTag::ConstFn:
    case RuleTag::Proj:
      lay.pre = {prem[0]};
      args_from(1, 0);
      break;
    case RuleTag::Comp: {
      std::size_t m = main->fn->hs.size();
      lay.pre.assign(prem.begin(), prem.begin() + 1 + m);
      args_from(1 + m, 0);
      break;
    }
    case RuleTag::RecEps: {
      lay.pre = {prem[0]};
      std::size_t k = 1;
      if (!is_g_numeral(main->args[0])) lay.scrut = prem[k++];
      args_from(k, 1);
      break;
    }
    case RuleTag::RecSucc: {
      lay.pre = {prem[0]};
      std::size_t k = 1;
      if (!is_g_numeral(main->args[0])) lay.scrut = prem[k++];
      lay.rec = prem[k++];
      args_from(k, 1);
      break;
    }
  }
  return lay;
}

// ---------------------------------------------------------------------------
// Surgeon: builder plus shared transformation helpers.

struct Surgeon {
  DagBuilder b;
  explicit Surgeon(const CompDag& dag) : b(dag) {}

  const CompDag& dag() const { return b.dag(); }
  const CompNode& node(std::size_t i) const { return b.dag().nodes[i]; }
  const Statement& stmt(std::size_t i) const { return b.dag().nodes[i].stmt; }

  std::size_t use(std::size_t i) { return b.use_as_premise(i); }
  std::vector<std::size_t> use_all(std::vector<std::size_t> v) {
    for (auto& i : v) i = use(i);
    return v;
  }

  std::size_t find_target(const Statement& s) {
    auto hit = b.dag().find_stmt(s);
    if (!hit) throw TransformError("target statement not present: " + stmt_brief(s));
    return *hit;
  }

  void protect_conclusions_except(const std::vector<Statement>& except) {
    for (const auto& c : b.dag().conclusions()) {
      bool skip = false;
      for (const auto& e : except)
        if (stmt_equal(c, e)) skip = true;
      if (!skip) b.protect(c);
    }
  }

  // Guarantees s is a conclusion, duplicating its derivation if necessary.
  void ensure_concluded(const Statement& s) {
    if (b.dag().concludes(s)) return;
    auto hit = b.dag().find_stmt(s);
    if (!hit) throw TransformError("cannot conclude absent statement");
    b.add_new(node(*hit).rule, node(*hit).premises, s);
  }

  Term min_approx(const Term& a, const Term& bterm) {
    if (approx_leq(a, bterm)) return a;
    if (approx_leq(bterm, a)) return bterm;
    throw TransformError("incomparable approximations of one value");
  }

  // -------------------------------------------------------------------------
  // Claim fusion core.

  std::size_t fuse_core(const Fn& f, const std::vector<Term>& args,
                        const Development& rho, std::size_t head,
                        const std::map<std::size_t, std::size_t>& arg_nodes) {
    // copy: later builder appends may reallocate the node vector
    const CompNode h = node(head);
    if (!h.stmt.env.empty()) throw TransformError("fuse: head environment not empty");
    if (h.stmt.main->kind != TermKind::App || !fn_equal(h.stmt.main->fn, f))
      throw TransformError("fuse: head does not apply the fused symbol");
    const std::vector<Term>& vstar = h.stmt.main->args;
    for (const auto& a : vstar)
      if (!is_g_numeral(a)) throw TransformError("fuse: head arguments must be g-numerals");
    // side conditions
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (is_g_numeral(args[i])) {
        if (!approx_leq(args[i], vstar[i]))
          throw TransformError("fuse: numeral argument not approximated by head");
      } else {
        auto it = arg_nodes.find(i);
        if (it == arg_nodes.end())
          throw TransformError("fuse: missing argument statement");
        const Statement& p = stmt(it->second);
        if (!term_equal(p.main, args[i]) || !dev_equal(p.env, rho))
          throw TransformError("fuse: argument statement mismatch");
        if (!approx_leq(p.value, vstar[i]))
          throw TransformError("fuse: argument value not approximated by head");
      }
    }
    Statement concl{app(f, args), rho, h.stmt.value};
    auto arg_prems = [&](std::size_t first_pos) {
      std::vector<std::size_t> out;
      for (std::size_t i = first_pos; i < args.size(); ++i)
        if (!is_g_numeral(args[i])) out.push_back(use(arg_nodes.at(i)));
      return out;
    };
    switch (h.rule.kind) {
      case RuleTag::Star:
        return b.add(RuleTag::star_rule(), {}, concl);
      case RuleTag::EpsN: {
        // nullary constant head < eps, () > |_ eps
        if (f->kind != FnKind::Eps)
          throw TransformError("fuse: eps head for a non-constant symbol");
        if (rho.empty()) return head;
        return b.add(RuleTag::eps_rule(), {use(head)}, concl);
      }
      case RuleTag::SuccN: {
        // conclusion <s_i t1, rho> |_ s_i v*1 via the successor rule
        if (term_equal(args[0], vstar[0]) && rho.empty()) return head;
        std::size_t argn = use(arg_nodes.count(0) ? arg_nodes.at(0)
                                                  : b.numeral_node(args[0], rho));
        return b.add(RuleTag::succ_rule(f->bit), {use(head), argn}, concl);
      }
      case RuleTag::Succ: {
        if (term_equal(args[0], succ_split(h.stmt.value)->second) && rho.empty())
          throw TransformError("fuse: successor form collision");
        std::size_t argn = use(arg_nodes.count(0) ? arg_nodes.at(0)
                                                  : b.numeral_node(args[0], rho));
        std::size_t p0 = use(h.premises[0]);
        if (!approx_leq(stmt(argn).value, succ_split(h.stmt.value)->second))
          throw TransformError("fuse: successor argument approximation");
        return b.add(RuleTag::succ_rule(f->bit), {p0, argn}, concl);
      }
      case RuleTag::ConstFn: {
        std::vector<std::size_t> prem{use(h.premises[0])};
        for (auto p : arg_prems(0)) prem.push_back(p);
        return b.add(h.rule, std::move(prem), concl);
      }
      case RuleTag::Proj: {
        std::vector<std::size_t> prem{use(h.premises[0])};
        for (auto p : arg_prems(0)) prem.push_back(p);
        return b.add(h.rule, std::move(prem), concl);
      }
      case RuleTag::Comp: {
        Layout lay = layout_of(b.dag(), head);
        std::vector<std::size_t> prem = use_all(lay.pre);
        for (auto p : arg_prems(0)) prem.push_back(p);
        return b.add(h.rule, std::move(prem), concl);
      }
      case RuleTag::RecEps: {
        Layout lay = layout_of(b.dag(), head);
        std::vector<std::size_t> prem{use(lay.pre[0])};
        if (!is_g_numeral(args[0])) {
          std::size_t sn = use(arg_nodes.at(0));
          if (!is_eps(stmt(sn).value))
            throw TransformError("fuse: recursion base needs an eps scrutinee");
          prem.push_back(sn);
        } else if (!is_eps(args[0])) {
          throw TransformError("fuse: recursion base scrutinee must be eps");
        }
        for (auto p : arg_prems(1)) prem.push_back(p);
        return b.add(h.rule, std::move(prem), concl);
      }
      case RuleTag::RecSucc: {
        Layout lay = layout_of(b.dag(), head);
        std::vector<std::size_t> prem{use(lay.pre[0])};
        if (!is_g_numeral(args[0])) {
          std::size_t sn = use(arg_nodes.at(0));
          auto s = succ_split(stmt(sn).value);
          if (!s || s->first != h.rule.bit)
            throw TransformError("fuse: recursion step needs a successor scrutinee");
          prem.push_back(sn);
        } else {
          auto s = succ_split(args[0]);
          if (!s || s->first != h.rule.bit)
            throw TransformError("fuse: recursion step scrutinee head mismatch");
        }
        prem.push_back(use(*lay.rec));
        for (auto p : arg_prems(1)) prem.push_back(p);
        return b.add(h.rule, std::move(prem), concl);
      }
      case RuleTag::Subst:
      case RuleTag::Eps:
        throw TransformError("fuse: head rule cannot be a substitution");
    }
    throw TransformError("fuse: unknown head rule");
  }

  // -------------------------------------------------------------------------
  // Numeric (empty-environment) version of an application node.

  std::size_t defuse(std::size_t idx) {
    const CompNode n = node(idx);
    const Statement& st = n.stmt;
    if (st.main->kind != TermKind::App)
      throw TransformError("defuse: main term is not an application");
    bool numeric = st.env.empty();
    for (const auto& a : st.main->args) numeric = numeric && is_g_numeral(a);
    if (numeric) return idx;

    Layout lay = layout_of(b.dag(), idx);
    std::vector<Term> z;
    for (std::size_t i = 0; i < st.main->args.size(); ++i) {
      const Term& a = st.main->args[i];
      if (is_g_numeral(a)) {
        z.push_back(a);
      } else if (i == 0 && lay.scrut) {
        z.push_back(stmt(*lay.scrut).value);
      } else if (lay.args.count(i)) {
        z.push_back(stmt(lay.args.at(i)).value);
      } else {
        z.push_back(star());  // star-derived node: no information recorded
      }
    }
    Statement concl{app(st.main->fn, z), Development{}, st.value};
    switch (n.rule.kind) {
      case RuleTag::Star:
        return b.add(RuleTag::star_rule(), {}, concl);
      case RuleTag::Eps:
        // nullary constant under an environment: its numeric form is eps-n
        return b.numeral_node(eps_term(), Development{});
      case RuleTag::Succ: {
        Term v = stmt(lay.args.at(0)).value;
        Term vstar = succ_split(st.value)->second;
        if (term_equal(v, vstar)) return n.premises[0];
        std::size_t sub = b.numeral_node(v, Development{});
        return b.add(RuleTag::succ_rule(n.rule.bit), {use(n.premises[0]), sub}, concl);
      }
      case RuleTag::ConstFn:
      case RuleTag::Proj:
        return b.add(n.rule, {use(lay.pre[0])}, concl);
      case RuleTag::Comp:
        return b.add(n.rule, use_all(lay.pre), concl);
      case RuleTag::RecEps:
        return b.add(n.rule, {use(lay.pre[0])}, concl);
      case RuleTag::RecSucc:
        return b.add(n.rule, {use(lay.pre[0]), use(*lay.rec)}, concl);
      default:
        throw TransformError("defuse: unsupported rule");
    }
  }

  // -------------------------------------------------------------------------
  // Substitution lemma recursions. go_in: from a node deriving
  // < pattern[u/x], rho > |_ v build a node deriving < pattern, [u/x]rho > |_ v.

  std::size_t chain_in(const Term& pattern, const Term& u, const std::string& x,
                       const Development& rho) {
    Development ext = rho.prepend(x, u);
    if (pattern->kind == TermKind::Var && pattern->name == x) {
      Statement concl{pattern, ext, u};
      std::size_t un = b.numeral_node(u, rho);
      return b.add(RuleTag::subst(), {un}, concl);
    }
    auto s = succ_split(pattern);
    if (!s) throw TransformError("chain_in: pattern is not an x-numeral");
    Term value = substitute(pattern, u, x);
    std::size_t chain = b.numeral_node(value, Development{});
    std::size_t sub = chain_in(s->second, u, x, rho);
    return b.add(RuleTag::succ_rule(s->first), {chain, sub},
                 Statement{pattern, ext, value});
  }

  std::size_t go_in(std::size_t cnode, const Term& pattern, const Term& u,
                    const std::string& x) {
    const CompNode c = node(cnode);
    const Statement& st = c.stmt;
    const Development& rho = st.env;
    Development ext = rho.prepend(x, u);
    Statement concl{pattern, ext, st.value};

    if (c.rule.kind == RuleTag::Star)
      return b.add(RuleTag::star_rule(), {}, Statement{pattern, ext, star()});

    if (pattern->kind == TermKind::Var && pattern->name == x)
      return b.add(RuleTag::subst(), {use(cnode)}, concl);

    if (pattern->kind == TermKind::Var) {  // vacuous: extend the environment
      if (c.rule.kind != RuleTag::Subst)
        throw TransformError("go_in: variable main without substitution rule");
      return b.add(RuleTag::subst(), {use(c.premises[0])}, concl);
    }

    if (pattern->kind == TermKind::Star)
      throw TransformError("go_in: star main with non-star value");

    const Fn& f = pattern->fn;
    if (!term_equal(substitute(pattern, u, x), st.main))
      throw TransformError("go_in: pattern does not match the derived main term");

    if (f->kind == FnKind::Eps) {
      std::size_t base =
          c.rule.kind == RuleTag::EpsN ? use(cnode) : use(c.premises[0]);
      return b.add(RuleTag::eps_rule(), {base}, concl);
    }
    if (f->kind == FnKind::Succ) {
      const Term& r1 = pattern->args[0];
      if (c.rule.kind == RuleTag::SuccN) {
        std::size_t sub = go_in_arg(c.premises[0], r1, u, x);
        return b.add(RuleTag::succ_rule(f->bit), {use(cnode), sub}, concl);
      }
      std::size_t sub = go_in_arg(c.premises[1], r1, u, x);
      return b.add(RuleTag::succ_rule(f->bit), {use(c.premises[0]), sub}, concl);
    }

    Layout lay = layout_of(b.dag(), cnode);
    auto arg_node = [&](std::size_t i) -> std::size_t {
      const Term& r = pattern->args[i];
      Term r_sub = substitute(r, u, x);
      if (is_g_numeral(r_sub)) {
        // pattern argument became a numeral: fresh substitution chain
        return chain_in(r, u, x, rho);
      }
      if (i == 0 && lay.scrut) return go_in_arg(*lay.scrut, r, u, x);
      return go_in_arg(lay.args.at(i), r, u, x);
    };
    switch (c.rule.kind) {
      case RuleTag::ConstFn:
      case RuleTag::Proj: {
        std::vector<std::size_t> prem{use(lay.pre[0])};
        for (std::size_t i = 0; i < pattern->args.size(); ++i)
          if (!is_g_numeral(pattern->args[i])) prem.push_back(arg_node(i));
        return b.add(c.rule, std::move(prem), concl);
      }
      case RuleTag::Comp: {
        std::vector<std::size_t> prem = use_all(lay.pre);
        for (std::size_t i = 0; i < pattern->args.size(); ++i)
          if (!is_g_numeral(pattern->args[i])) prem.push_back(arg_node(i));
        return b.add(c.rule, std::move(prem), concl);
      }
      case RuleTag::RecEps:
      case RuleTag::RecSucc: {
        std::vector<std::size_t> prem{use(lay.pre[0])};
        if (!is_g_numeral(pattern->args[0])) prem.push_back(arg_node(0));
        if (c.rule.kind == RuleTag::RecSucc) prem.push_back(use(*lay.rec));
        for (std::size_t i = 1; i < pattern->args.size(); ++i)
          if (!is_g_numeral(pattern->args[i])) prem.push_back(arg_node(i));
        return b.add(c.rule, std::move(prem), concl);
      }
      default:
        throw TransformError("go_in: rule does not match an application main");
    }
  }

  // Argument recursion entry: vacuous patterns re-derive under the longer
  // environment; others recurse structurally.
  std::size_t go_in_arg(std::size_t cnode, const Term& pattern, const Term& u,
                        const std::string& x) {
    return go_in(cnode, pattern, u, x);
  }

  // go_out: from a node deriving < pattern, [u/x]rho > |_ v build a node
  // deriving < pattern[u/x], rho > |_ v.
  std::size_t go_out(std::size_t cnode, const Term& pattern, const Term& u,
                     const std::string& x) {
    const CompNode c = node(cnode);
    const Statement& st = c.stmt;
    if (st.env.empty() || st.env.bindings()[0].var != x ||
        !term_equal(st.env.bindings()[0].term, u))
      throw TransformError("go_out: environment does not start with [u/x]");
    Development rho = st.env.suffix_after(0);
    Term main_out = substitute(pattern, u, x);
    Statement concl{main_out, rho, st.value};

    if (c.rule.kind == RuleTag::Star)
      return b.add(RuleTag::star_rule(), {}, Statement{main_out, rho, star()});

    if (pattern->kind == TermKind::Var && pattern->name == x) {
      if (c.rule.kind != RuleTag::Subst)
        throw TransformError("go_out: expected substitution rule at x");
      return c.premises[0];  // < u, rho > |_ v, promoted by the caller
    }
    if (pattern->kind == TermKind::Var) {
      if (c.rule.kind != RuleTag::Subst)
        throw TransformError("go_out: variable main without substitution rule");
      return b.add(RuleTag::subst(), {use(c.premises[0])}, concl);
    }
    if (pattern->kind == TermKind::Star)
      throw TransformError("go_out: star main with non-star value");

    const Fn& f = pattern->fn;
    if (f->kind == FnKind::Eps) {
      if (rho.empty()) return b.add(RuleTag::eps_n(), {}, concl);
      return b.add(RuleTag::eps_rule(), {use(c.premises[0])}, concl);
    }
    if (f->kind == FnKind::Succ) {
      // environment [u/x]rho is never empty, so the rule here is Succ.
      const Term& r1 = pattern->args[0];
      Term vstar = succ_split(st.value)->second;
      std::size_t sub = go_out(c.premises[1], r1, u, x);
      Term r1_out = substitute(r1, u, x);
      if (term_equal(r1_out, vstar) && rho.empty()) {
        if (!term_equal(stmt(sub).value, vstar))
          throw TransformError("go_out: successor premise value mismatch");
        return b.add(RuleTag::succ_n(f->bit), {use(sub)}, concl);
      }
      return b.add(RuleTag::succ_rule(f->bit), {use(c.premises[0]), use(sub)}, concl);
    }

    Layout lay = layout_of(b.dag(), cnode);
    auto arg_node = [&](std::size_t i) -> std::optional<std::size_t> {
      const Term& r = pattern->args[i];
      Term r_out = substitute(r, u, x);
      if (is_g_numeral(r_out)) return std::nullopt;  // leaves the premise set
      std::size_t src = (i == 0 && lay.scrut) ? *lay.scrut : lay.args.at(i);
      return go_out(src, r, u, x);
    };
    switch (c.rule.kind) {
      case RuleTag::ConstFn:
      case RuleTag::Proj:
      case RuleTag::Comp: {
        std::vector<std::size_t> prem =
            c.rule.kind == RuleTag::Comp ? use_all(lay.pre)
                                         : std::vector<std::size_t>{use(lay.pre[0])};
        for (std::size_t i = 0; i < pattern->args.size(); ++i)
          if (!is_g_numeral(pattern->args[i]))
            if (auto p = arg_node(i)) prem.push_back(use(*p));
        return b.add(c.rule, std::move(prem), concl);
      }
      case RuleTag::RecEps:
      case RuleTag::RecSucc: {
        std::vector<std::size_t> prem{use(lay.pre[0])};
        if (!is_g_numeral(pattern->args[0]))
          if (auto p = arg_node(0)) prem.push_back(use(*p));
        if (c.rule.kind == RuleTag::RecSucc) prem.push_back(use(*lay.rec));
        for (std::size_t i = 1; i < pattern->args.size(); ++i)
          if (!is_g_numeral(pattern->args[i]))
            if (auto p = arg_node(i)) prem.push_back(use(*p));
        return b.add(c.rule, std::move(prem), concl);
      }
      default:
        throw TransformError("go_out: rule does not match an application main");
    }
  }
};

void check_subst_inputs(const CompDag& dag, const std::vector<SubstTarget>& targets,
                        const Term& u, const std::string& x, bool in_direction) {
  if (targets.empty()) return;
  const Development& rho0 = targets[0].stmt.env;
  for (const auto& t : targets) {
    if (!dag.concludes(t.stmt))
      throw TransformError("substitution target is not a conclusion");
    if (!dev_equal(t.stmt.env, rho0))
      throw TransformError("substitution targets must share one environment");
    Term expected = substitute(t.pattern, u, x);
    if (in_direction) {
      if (!term_equal(expected, t.stmt.main))
        throw TransformError("target main term is not pattern[u/x]");
    } else {
      if (!term_equal(t.pattern, t.stmt.main))
        throw TransformError("target main term differs from its pattern");
      if (rho0.empty() || rho0.bindings()[0].var != x ||
          !term_equal(rho0.bindings()[0].term, u))
        throw TransformError("target environment does not start with [u/x]");
    }
  }
}

std::set<std::string> dag_var_names(const CompDag& dag) {
  std::set<std::string> out;
  for (const auto& n : dag.nodes) {
    collect_var_names(n.stmt.main, out);
    for (const auto& b : n.stmt.env.bindings()) {
      out.insert(b.var);
      collect_var_names(b.term, out);
    }
  }
  return out;
}

void budget_gate(bool strict, Ledger* ledger, const std::string& op, bool ok,
                 const std::string& why) {
  if (ok) return;
  if (strict) throw BudgetError(op + ": " + why);
  if (ledger) ledger->flag(op, why);
}

}  // namespace

// ---------------------------------------------------------------------------

CompDag fuse(const CompDag& dag, const Fn& f, const std::vector<Term>& args,
             const Development& rho, std::size_t head,
             const std::map<std::size_t, std::size_t>& arg_nodes) {
  if (head >= dag.nodes.size()) throw TransformError("fuse: head index out of range");
  if (static_cast<Count>(args.size()) != f->arity)
    throw TransformError("fuse: argument count does not match arity");
  Surgeon s(dag);
  std::size_t res = s.fuse_core(f, args, rho, head, arg_nodes);
  s.ensure_concluded(s.stmt(res));
  return s.b.take();
}

namespace {

CompDag run_subst(const CompDag& dag, const std::vector<SubstTarget>& targets,
                  const Term& u, const std::string& x, const Budget& budget,
                  bool strict, Ledger* ledger, bool in_direction) {
  check_subst_inputs(dag, targets, u, x, in_direction);
  if (targets.empty()) return dag;

  Count spend = 0;
  for (const auto& t : targets)
    spend += in_direction ? t.stmt.main->size : substitute(t.pattern, u, x)->size;
  Metrics m0 = metrics(dag);
  const char* opname = in_direction ? "subst-in" : "subst-out";
  budget_gate(strict, ledger, opname,
              m0.node_count <= budget.U - spend,
              "node count exceeds U minus the substitution budget");
  budget_gate(strict, ledger, opname, m0.M <= budget.V, "M exceeds V");
  if (in_direction) {
    auto used = dag_var_names(dag);
    if (used.count(x)) throw TransformError("subst-in: variable is not fresh");
  }

  Surgeon s(dag);
  std::vector<Statement> stale;
  for (const auto& t : targets) stale.push_back(t.stmt);
  s.protect_conclusions_except(stale);

  std::vector<Statement> results;
  for (const auto& t : targets) {
    std::size_t cnode = s.find_target(t.stmt);
    std::size_t res = in_direction ? s.go_in(cnode, t.pattern, u, x)
                                   : s.go_out(cnode, t.pattern, u, x);
    results.push_back(s.stmt(res));
    s.b.protect(s.stmt(res));
  }
  for (const auto& r : results) s.ensure_concluded(r);
  CompDag out = drop_stale_conclusions(s.b.take(), stale);

  if (ledger) {
    Metrics m1 = metrics(out);
    Count claim_m = in_direction ? m0.M : m0.M * u->size;
    ledger->record(opname, m0.node_count + spend, m1.node_count,
                   std::max(claim_m, m0.M), m1.M);
  }
  return out;
}

}  // namespace

CompDag subst_in(const CompDag& dag, const std::vector<SubstTarget>& targets,
                 const Term& u, const std::string& x, const Budget& budget,
                 bool strict, Ledger* ledger) {
  return run_subst(dag, targets, u, x, budget, strict, ledger, true);
}

CompDag subst_out(const CompDag& dag, const std::vector<SubstTarget>& targets,
                  const Term& u, const std::string& x, const Budget& budget,
                  bool strict, Ledger* ledger) {
  return run_subst(dag, targets, u, x, budget, strict, ledger, false);
}

// ---------------------------------------------------------------------------
// Axiom unfold / fold

namespace {

AxiomCase case_of_axiom(const Equation& axiom) {
  if (axiom.lhs->kind != TermKind::App)
    throw TransformError("axiom left side must be an application");
  const Fn& f = axiom.lhs->fn;
  switch (f->kind) {
    case FnKind::ConstN: return AxiomCase::ConstNCase;
    case FnKind::Proj: return AxiomCase::ProjCase;
    case FnKind::Comp: return AxiomCase::CompCase;
    case FnKind::Rec: {
      const Term& scrut = axiom.lhs->args[0];
      if (is_eps(scrut)) return AxiomCase::EpsCase;
      if (auto s = succ_split(scrut)) return AxiomCase{s->first ? AxiomCase::S1Case
                                                                : AxiomCase::S0Case};
      throw TransformError("recursion axiom scrutinee must be eps or a successor");
    }
    default:
      throw TransformError("symbol has no defining axiom");
  }
}

void check_axiom(const Equation& axiom) {
  AxiomCase c = case_of_axiom(axiom);
  if (!matches_schema(axiom_schema(axiom.lhs->fn, c), axiom))
    throw TransformError("equation is not an instance of the defining axiom");
}

struct AxiomStep {
  CompDag dag;
  Statement conclusion;
};

AxiomStep unfold_impl(const CompDag& dag, const Statement& target,
                      const Equation& axiom) {
  check_axiom(axiom);
  if (!term_equal(target.main, axiom.lhs))
    throw TransformError("unfold: target main term does not match the axiom");
  if (!dag.concludes(target))
    throw TransformError("unfold: target is not a conclusion");

  Surgeon s(dag);
  s.protect_conclusions_except({target});
  std::size_t c = s.find_target(target);
  const Development rho = target.env;
  const Fn& f = axiom.lhs->fn;

  std::size_t res;
  if (s.node(c).rule.kind == RuleTag::Star) {
    res = s.b.star_node(axiom.rhs, rho);
  } else {
    switch (f->kind) {
      case FnKind::ConstN: {
        res = s.b.numeral_node(eps_term(), rho);
        break;
      }
      case FnKind::Proj: {
        std::size_t i = static_cast<std::size_t>(f->index - 1);
        const Term& ui = axiom.lhs->args[i];
        if (is_g_numeral(ui)) {
          if (!approx_leq(ui, target.value))
            throw TransformError("unfold: projected numeral not below the value");
          res = s.b.numeral_node(ui, rho);
        } else {
          Layout lay = layout_of(s.dag(), c);
          res = lay.args.at(i);
        }
        break;
      }
      case FnKind::Comp: {
        Layout lay = layout_of(s.dag(), c);
        std::map<std::size_t, std::size_t> argn;
        for (const auto& [pos, n] : lay.args) argn[pos] = n;
        std::vector<std::size_t> hn;
        for (std::size_t j = 0; j < f->hs.size(); ++j)
          hn.push_back(
              s.fuse_core(f->hs[j], axiom.lhs->args, rho, lay.pre[1 + j], argn));
        std::map<std::size_t, std::size_t> gargn;
        for (std::size_t j = 0; j < hn.size(); ++j) gargn[j] = hn[j];
        res = s.fuse_core(f->g, axiom.rhs->args, rho, lay.pre[0], gargn);
        break;
      }
      case FnKind::Rec: {
        Layout lay = layout_of(s.dag(), c);
        std::vector<Term> rest(axiom.lhs->args.begin() + 1, axiom.lhs->args.end());
        std::map<std::size_t, std::size_t> restn;
        for (const auto& [pos, n] : lay.args)
          restn[pos - 1] = n;  // shift out the scrutinee slot
        if (is_eps(axiom.lhs->args[0])) {
          res = s.fuse_core(f->g_eps, rest, rho, lay.pre[0], restn);
        } else {
          auto sc = succ_split(axiom.lhs->args[0]);
          const Term& t_inst = sc->second;
          std::map<std::size_t, std::size_t> recn;
          if (!is_g_numeral(t_inst)) {
            // the scrutinee premise <s_i t, rho> |_ s_i v0 was derived by the
            // successor rule; reuse its argument premise for <t, rho> |_ v0'
            const CompNode& sp = s.node(*lay.scrut);
            if (sp.rule.kind != RuleTag::Succ)
              throw TransformError("unfold: scrutinee premise is not a successor");
            recn[0] = sp.premises[1];
          }
          for (const auto& [pos, n] : restn) recn[pos + 1] = n;
          std::vector<Term> rec_args{t_inst};
          rec_args.insert(rec_args.end(), rest.begin(), rest.end());
          std::size_t r1 = s.fuse_core(f, rec_args, rho, *lay.rec, recn);

          std::map<std::size_t, std::size_t> gn;
          if (recn.count(0)) gn[0] = recn.at(0);
          gn[1] = r1;
          for (const auto& [pos, n] : restn) gn[pos + 2] = n;
          res = s.fuse_core(sc->first ? f->g1 : f->g0, axiom.rhs->args, rho,
                            lay.pre[0], gn);
        }
        break;
      }
      default:
        throw TransformError("unfold: symbol has no defining axiom");
    }
  }
  Statement concl = s.stmt(res);
  if (!approx_leq(concl.value, target.value))
    throw TransformError("unfold: value did not refine");
  s.ensure_concluded(concl);
  CompDag out = drop_stale_conclusions(s.b.take(), {target});
  return {std::move(out), concl};
}

AxiomStep fold_impl(const CompDag& dag, const Statement& target,
                    const Equation& axiom) {
  check_axiom(axiom);
  if (!term_equal(target.main, axiom.rhs))
    throw TransformError("fold: target main term does not match the axiom");
  if (!dag.concludes(target))
    throw TransformError("fold: target is not a conclusion");

  Surgeon s(dag);
  s.protect_conclusions_except({target});
  std::size_t c = s.find_target(target);
  const Development rho = target.env;
  const Fn& f = axiom.lhs->fn;

  std::size_t res;
  if (s.node(c).rule.kind == RuleTag::Star) {
    res = s.b.star_node(axiom.lhs, rho);
  } else {
    switch (f->kind) {
      case FnKind::ConstN: {
        std::vector<std::size_t> prem{s.b.numeral_node(eps_term(), Development{})};
        for (const auto& u : axiom.lhs->args)
          if (!is_g_numeral(u)) prem.push_back(s.b.star_node(u, rho));
        res = s.b.add(RuleTag::const_fn(f->n), std::move(prem),
                      Statement{axiom.lhs, rho, eps_term()});
        break;
      }
      case FnKind::Proj: {
        std::size_t i = static_cast<std::size_t>(f->index - 1);
        std::vector<std::size_t> prem{
            s.b.numeral_node(target.value, Development{})};
        for (std::size_t j = 0; j < axiom.lhs->args.size(); ++j) {
          const Term& uj = axiom.lhs->args[j];
          if (j == i) {
            if (is_g_numeral(uj)) {
              if (!approx_leq(uj, target.value))
                throw TransformError("fold: projected numeral not below the value");
            } else {
              prem.push_back(s.use(c));
            }
          } else if (!is_g_numeral(uj)) {
            prem.push_back(s.b.star_node(uj, rho));
          }
        }
        res = s.b.add(RuleTag::proj_rule(f->index, f->n), std::move(prem),
                      Statement{axiom.lhs, rho, target.value});
        break;
      }
      case FnKind::Comp: {
        // target main g(h_1(u...), ..., h_m(u...))
        Layout clay = layout_of(s.dag(), c);
        std::size_t m = f->hs.size();
        std::vector<std::size_t> hprem(m);
        for (std::size_t j = 0; j < m; ++j) {
          std::size_t pos = j;
          std::optional<std::size_t> n;
          if (clay.args.count(pos)) n = clay.args.at(pos);
          else if (pos == 0 && clay.scrut) n = clay.scrut;
          if (!n) throw TransformError("fold: missing inner application premise");
          hprem[j] = *n;
        }
        std::size_t gn = s.defuse(c);
        std::vector<std::size_t> hn(m);
        for (std::size_t j = 0; j < m; ++j) hn[j] = s.defuse(hprem[j]);
        // choose per-position argument statements among the candidates
        std::vector<std::size_t> prem{s.use(gn)};
        for (auto j : hn) prem.push_back(s.use(j));
        for (std::size_t i = 0; i < axiom.lhs->args.size(); ++i) {
          const Term& ui = axiom.lhs->args[i];
          if (is_g_numeral(ui)) continue;
          std::optional<std::size_t> best;
          for (std::size_t j = 0; j < m; ++j) {
            Layout hl = layout_of(s.dag(), hprem[j]);
            std::optional<std::size_t> cand;
            if (hl.args.count(i)) cand = hl.args.at(i);
            else if (i == 0 && hl.scrut) cand = hl.scrut;
            if (!cand) continue;
            if (!best || !term_equal(s.min_approx(s.stmt(*cand).value,
                                                  s.stmt(*best).value),
                                     s.stmt(*best).value))
              best = cand;
          }
          prem.push_back(best ? s.use(*best) : s.b.star_node(ui, rho));
        }
        res = s.b.add(RuleTag::comp_rule(), std::move(prem),
                      Statement{axiom.lhs, rho, target.value});
        break;
      }
      case FnKind::Rec: {
        if (is_eps(axiom.lhs->args[0])) {
          // target main g_eps(u...)
          Layout clay = layout_of(s.dag(), c);
          std::size_t gn = s.defuse(c);
          std::vector<std::size_t> prem{s.use(gn)};
          for (std::size_t i = 1; i < axiom.lhs->args.size(); ++i) {
            const Term& ui = axiom.lhs->args[i];
            if (is_g_numeral(ui)) continue;
            std::size_t pos = i - 1;
            std::optional<std::size_t> n;
            if (clay.args.count(pos)) n = clay.args.at(pos);
            else if (pos == 0 && clay.scrut) n = clay.scrut;
            prem.push_back(n ? s.use(*n) : s.b.star_node(ui, rho));
          }
          res = s.b.add(RuleTag::rec_eps(), std::move(prem),
                        Statement{axiom.lhs, rho, target.value});
          break;
        }
        // target main g_i(t, f(t, u...), u...)
        auto sc = succ_split(axiom.lhs->args[0]);
        int bit = sc->first;
        const Term& t_inst = sc->second;
        Layout clay = layout_of(s.dag(), c);
        auto pos_node = [&](const Layout& l, std::size_t pos) {
          std::optional<std::size_t> n;
          if (l.args.count(pos)) n = l.args.at(pos);
          else if (pos == 0 && l.scrut) n = l.scrut;
          return n;
        };
        auto fnode = pos_node(clay, 1);
        if (!fnode) throw TransformError("fold: missing recursive-call premise");
        Layout flay = layout_of(s.dag(), *fnode);
        std::size_t gn = s.defuse(c);
        std::size_t fn_num = s.defuse(*fnode);

        std::vector<std::size_t> prem{s.use(gn)};
        if (!is_g_numeral(axiom.lhs->args[0])) {
          // scrutinee premise < s_i t, rho > |_ s_i z0 with the most precise z0
          std::optional<std::size_t> t1 = pos_node(clay, 0);
          std::optional<std::size_t> t2 = pos_node(flay, 0);
          std::optional<std::size_t> tbest;
          if (t1 && t2)
            tbest = approx_leq(s.stmt(*t1).value, s.stmt(*t2).value) ? t1 : t2;
          else
            tbest = t1 ? t1 : t2;
          if (!tbest) throw TransformError("fold: no statement for the scrutinee tail");
          Term z0 = s.stmt(*tbest).value;
          Term sval = succ_term(bit, z0);
          std::size_t chain = s.b.numeral_node(sval, Development{});
          std::size_t sn = s.b.add(RuleTag::succ_rule(bit), {chain, s.use(*tbest)},
                                   Statement{axiom.lhs->args[0], rho, sval});
          prem.push_back(sn);
        }
        prem.push_back(s.use(fn_num));
        for (std::size_t i = 1; i < axiom.lhs->args.size(); ++i) {
          const Term& ui = axiom.lhs->args[i];
          if (is_g_numeral(ui)) continue;
          auto c1 = pos_node(clay, i + 1);
          auto c2 = pos_node(flay, i);
          std::optional<std::size_t> best;
          if (c1 && c2)
            best = approx_leq(s.stmt(*c1).value, s.stmt(*c2).value) ? c1 : c2;
          else
            best = c1 ? c1 : c2;
          prem.push_back(best ? s.use(*best) : s.b.star_node(ui, rho));
        }
        (void)t_inst;
        res = s.b.add(RuleTag::rec_succ(bit), std::move(prem),
                      Statement{axiom.lhs, rho, target.value});
        break;
      }
      default:
        throw TransformError("fold: symbol has no defining axiom");
    }
  }
  Statement concl = s.stmt(res);
  if (!approx_leq(concl.value, target.value))
    throw TransformError("fold: value did not refine");
  s.ensure_concluded(concl);
  CompDag out = drop_stale_conclusions(s.b.take(), {target});
  return {std::move(out), concl};
}

}  // namespace

CompDag unfold_axiom(const CompDag& dag, const Statement& target,
                     const Equation& axiom) {
  return unfold_impl(dag, target, axiom).dag;
}

CompDag fold_axiom(const CompDag& dag, const Statement& target,
                   const Equation& axiom) {
  return fold_impl(dag, target, axiom).dag;
}

// ---------------------------------------------------------------------------
// Soundness walk

namespace {

struct Walker {
  Budget budget;
  bool strict;
  Ledger ledger;
  FreshVarGen fresh;

  Walker(const Budget& bud, bool strict_mode, std::set<std::string> used)
      : budget(bud), strict(strict_mode), fresh(std::move(used)) {}

  struct State {
    CompDag dag;
    Statement target;
  };

  static Equation oriented(const Equation& eq, Direction dir) {
    return dir == Direction::Forward ? eq : Equation{eq.rhs, eq.lhs};
  }
  static Direction flip(Direction d) {
    return d == Direction::Forward ? Direction::Backward : Direction::Forward;
  }

  State walk(State st, const Proof& p, Direction dir) {
    Equation eq = oriented(conclusion(p), dir);
    if (!term_equal(st.target.main, eq.lhs))
      throw TransformError("walk: target main term does not match the proof");
    Count before = static_cast<Count>(st.dag.nodes.size());
    Count m_before = metrics(st.dag).M;

    switch (p->kind) {
      case ProofTree::Identity:
        ledger.record("refl", before, before, m_before, m_before);
        return st;
      case ProofTree::DefAxiom: {
        AxiomStep step = dir == Direction::Forward
                             ? unfold_impl(st.dag, st.target, *p->instance)
                             : fold_impl(st.dag, st.target, *p->instance);
        Count claim = before + equation_size(*p->instance);
        Metrics m1 = metrics(step.dag);
        ledger.record(dir == Direction::Forward ? "axiom-unfold" : "axiom-fold",
                      claim, static_cast<Count>(step.dag.nodes.size()),
                      std::max(m_before, std::max(p->instance->lhs->size,
                                                  p->instance->rhs->size)),
                      m1.M);
        return {std::move(step.dag), step.conclusion};
      }
      case ProofTree::Symmetry:
        return walk(std::move(st), p->children[0], flip(dir));
      case ProofTree::Transitivity: {
        if (dir == Direction::Forward) {
          State mid = walk(std::move(st), p->children[0], dir);
          return walk(std::move(mid), p->children[1], dir);
        }
        State mid = walk(std::move(st), p->children[1], dir);
        return walk(std::move(mid), p->children[0], dir);
      }
      case ProofTree::Congruence:
        return walk_congruence(std::move(st), p, dir);
      case ProofTree::SubstRule:
        return walk_subst(std::move(st), p, dir);
    }
    throw TransformError("walk: unknown proof node");
  }

  State walk_subst(State st, const Proof& p, Direction dir) {
    Equation inner = conclusion(p->children[0]);
    const Term& r = p->subst_term;
    const std::string& x = p->subst_var;
    Term from = dir == Direction::Forward ? inner.lhs : inner.rhs;
    Term to = dir == Direction::Forward ? inner.rhs : inner.lhs;

    bool from_has = free_vars(from).count(x) > 0;
    bool to_has = free_vars(to).count(x) > 0;
    if (!from_has && !to_has) return walk(std::move(st), p->children[0], dir);

    // alpha-rename the substitution variable to one fresh for the computation
    auto used = dag_var_names(st.dag);
    auto pv = proof_var_names(p);
    used.insert(pv.begin(), pv.end());
    FreshVarGen local(used);
    std::string x2 = local.fresh(x);
    Proof inner_proof = rename_var(p->children[0], x, x2);
    Term from2 = substitute(from, var(x2), x);
    Term to2 = substitute(to, var(x2), x);

    CompDag d1 = subst_in(st.dag, {{st.target, from2}}, r, x2, budget, strict,
                          &ledger);
    Statement mid{from2, st.target.env.prepend(x2, r), st.target.value};
    State s1{std::move(d1), mid};
    State s2 = walk(std::move(s1), inner_proof, dir);
    CompDag d2 = subst_out(s2.dag, {{s2.target, to2}}, r, x2, budget, strict,
                           &ledger);
    Statement out{substitute(to2, r, x2), st.target.env, s2.target.value};
    if (!d2.concludes(out))
      throw TransformError("walk: substitution result not concluded");
    return {std::move(d2), out};
  }

  State walk_congruence(State st, const Proof& p, Direction dir) {
    const Fn& f = p->fn;
    std::vector<Equation> eqs;
    for (const auto& c : p->children) eqs.push_back(oriented(conclusion(c), dir));
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (term_equal(eqs[i].lhs, eqs[i].rhs)) continue;
      st = congruence_step(std::move(st), f, i, p->children[i], dir);
    }
    return st;
  }

  State congruence_step(State st, const Fn& f, std::size_t i, const Proof& sub,
                        Direction dir) {
    Equation eq = oriented(conclusion(sub), dir);
    const Term& arg_from = st.target.main->args[i];
    const Term& arg_to = eq.rhs;
    if (!term_equal(arg_from, eq.lhs))
      throw TransformError("walk: congruence argument mismatch");
    Count before = static_cast<Count>(st.dag.nodes.size());
    Count m_before = metrics(st.dag).M;

    std::vector<Term> new_args = st.target.main->args;
    new_args[i] = arg_to;
    Term new_main = app(f, new_args);

    Surgeon s0(st.dag);
    std::size_t c = s0.find_target(st.target);
    if (s0.node(c).rule.kind == RuleTag::Star) {
      s0.protect_conclusions_except({st.target});
      std::size_t n = s0.b.star_node(new_main, st.target.env);
      s0.ensure_concluded(s0.stmt(n));
      Statement out = s0.stmt(n);
      CompDag d = drop_stale_conclusions(s0.b.take(), {st.target});
      ledger.record("congruence-star", before + 1,
                    static_cast<Count>(d.nodes.size()),
                    std::max(m_before, new_main->size), metrics(d).M);
      return {std::move(d), out};
    }

    // obtain a concluded statement for the argument
    Statement arg_stmt;
    std::vector<Statement> extra_stale;
    CompDag work;
    if (is_g_numeral(arg_from)) {
      Surgeon s1(st.dag);
      s1.protect_conclusions_except({});
      std::size_t n = s1.b.numeral_node(arg_from, st.target.env);
      arg_stmt = s1.stmt(n);
      s1.ensure_concluded(arg_stmt);
      work = s1.b.take();
    } else {
      Layout lay = layout_of(st.dag, c);
      std::optional<std::size_t> n;
      if (i == 0 && lay.scrut) n = lay.scrut;
      else if (lay.args.count(i)) n = lay.args.at(i);
      if (!n) throw TransformError("walk: congruence argument has no premise");
      arg_stmt = st.dag.nodes[*n].stmt;
      Surgeon s1(st.dag);
      s1.protect_conclusions_except({});
      s1.ensure_concluded(arg_stmt);
      work = s1.b.take();
    }

    State inner{std::move(work), arg_stmt};
    State walked = walk(std::move(inner), sub, dir);

    // rebuild the target inference with the new argument
    Surgeon s2(walked.dag);
    s2.protect_conclusions_except({st.target, walked.target});
    std::size_t cn = s2.find_target(st.target);
    const CompNode cnode = s2.node(cn);
    Layout lay = layout_of(s2.dag(), cn);
    Statement out{new_main, st.target.env, st.target.value};

    std::optional<std::size_t> new_arg_node;
    if (!is_g_numeral(arg_to)) {
      new_arg_node = s2.find_target(walked.target);
    } else {
      extra_stale.push_back(walked.target);
      if (!approx_leq(arg_to, walked.target.value))
        throw TransformError("walk: congruence numeral not below its value");
    }

    std::size_t built;
    if (f->kind == FnKind::Succ) {
      auto vstar = succ_split(st.target.value)->second;
      if (new_arg_node && !approx_leq(s2.stmt(*new_arg_node).value, vstar))
        throw TransformError("walk: successor congruence value mismatch");
      if (!new_arg_node) {
        // numeral argument: value must collapse onto the recorded one
        if (!term_equal(arg_to, vstar))
          throw TransformError("walk: successor congruence needs matching numeral");
        std::size_t subn = s2.b.numeral_node(arg_to, Development{});
        if (!st.target.env.empty())
          throw TransformError("walk: numeral successor under nonempty environment");
        built = s2.b.add(RuleTag::succ_n(f->bit), {subn}, out);
      } else if (term_equal(arg_to, vstar) && st.target.env.empty() &&
                 term_equal(s2.stmt(*new_arg_node).value, vstar)) {
        built = s2.b.add(RuleTag::succ_n(f->bit), {s2.use(*new_arg_node)}, out);
      } else {
        std::size_t chain = s2.b.numeral_node(st.target.value, Development{});
        built = s2.b.add(RuleTag::succ_rule(f->bit),
                         {chain, s2.use(*new_arg_node)}, out);
      }
    } else {
      Layout nl = lay;
      if (f->kind == FnKind::Rec && i == 0) {
        nl.scrut.reset();
        if (new_arg_node) nl.scrut = *new_arg_node;
      } else {
        nl.args.erase(i);
        if (new_arg_node) nl.args[i] = *new_arg_node;
      }
      std::vector<std::size_t> prem;
      switch (cnode.rule.kind) {
        case RuleTag::ConstFn:
        case RuleTag::Proj:
          prem.push_back(s2.use(nl.pre[0]));
          break;
        case RuleTag::Comp:
          for (auto q : nl.pre) prem.push_back(s2.use(q));
          break;
        case RuleTag::RecEps:
        case RuleTag::RecSucc:
          prem.push_back(s2.use(nl.pre[0]));
          break;
        default:
          throw TransformError("walk: congruence target rule unsupported");
      }
      if (cnode.rule.kind == RuleTag::RecEps || cnode.rule.kind == RuleTag::RecSucc) {
        if (is_g_numeral(new_main->args[0])) {
          // scrutinee moved out of the premise set; shape checked by validate
        } else if (nl.scrut) {
          prem.push_back(s2.use(*nl.scrut));
        } else {
          throw TransformError("walk: recursion scrutinee premise missing");
        }
        if (cnode.rule.kind == RuleTag::RecSucc) prem.push_back(s2.use(*lay.rec));
        for (std::size_t k = 1; k < new_main->args.size(); ++k)
          if (!is_g_numeral(new_main->args[k])) prem.push_back(s2.use(nl.args.at(k)));
      } else {
        for (std::size_t k = 0; k < new_main->args.size(); ++k)
          if (!is_g_numeral(new_main->args[k])) prem.push_back(s2.use(nl.args.at(k)));
      }
      built = s2.b.add(cnode.rule, std::move(prem), out);
    }
    s2.ensure_concluded(s2.stmt(built));
    Statement result = s2.stmt(built);
    std::vector<Statement> stale{st.target};
    for (const auto& e : extra_stale) stale.push_back(e);
    if (!is_g_numeral(arg_from) && !stmt_equal(arg_stmt, result))
      stale.push_back(arg_stmt);
    CompDag d = drop_stale_conclusions(s2.b.take(), stale);
    Count claim = before + arg_from->size + proof_size(sub) + 2;
    ledger.record("congruence-step", claim, static_cast<Count>(d.nodes.size()),
                  std::max(m_before, new_main->size), metrics(d).M);
    return {std::move(d), result};
  }
};

}  // namespace

TransformResult transform_along_proof(const CompDag& dag, const Statement& target,
                                      const Proof& proof, Direction dir,
                                      const Budget& budget, bool strict) {
  CheckResult cr = check(proof);
  if (!cr.ok)
    throw TransformError("walk: proof does not check (" + cr.violation->condition +
                         " at " + cr.violation->path + ")");
  if (!dag.concludes(target))
    throw TransformError("walk: target is not a conclusion");

  Walker w(budget, strict, dag_var_names(dag));
  Count r_size = cr.size;
  Metrics m0 = metrics(dag);

  // Proposition-level preconditions.
  budget_gate(strict, &w.ledger, "walk", target.env.size() <= budget.U - r_size,
              "||rho|| exceeds U - ||r||");
  budget_gate(strict, &w.ledger, "walk", budget.B <= budget.U - r_size,
              "B exceeds U - ||r||");
  budget_gate(strict, &w.ledger, "walk", m0.node_count <= budget.B,
              "computation exceeds B");
  budget_gate(strict, &w.ledger, "walk", target.value->size <= budget.B,
              "||v|| exceeds B");
  for (const auto& cstmt : dag.conclusions()) {
    if (stmt_equal(cstmt, target)) continue;
    budget_gate(strict, &w.ledger, "walk",
                cstmt.main->size <= budget.U - r_size &&
                    cstmt.env.size() <= budget.U - r_size,
                "untouched conclusion exceeds U - ||r||");
  }

  Walker::State out = w.walk({dag, target}, proof, dir);
  Count claim = m0.node_count + r_size;
  w.ledger.record("walk-total", claim, static_cast<Count>(out.dag.nodes.size()),
                  budget.V > 0 ? budget.V : metrics(out.dag).M, metrics(out.dag).M);

  if (auto bad = validate(out.dag))
    throw TransformError("walk: produced an invalid computation at node " +
                         std::to_string(bad->node) + " (" + bad->condition + ")");
  if (!approx_leq(out.target.value, target.value))
    throw TransformError("walk: value did not refine");
  return {std::move(out.dag), out.target, std::move(w.ledger)};
}

}  // namespace pvw
