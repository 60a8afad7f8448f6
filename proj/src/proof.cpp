#include "pvw/proof.hpp"

#include <map>
#include <stdexcept>

namespace pvw {

bool eq_equal(const Equation& a, const Equation& b) {
  return term_equal(a.lhs, b.lhs) && term_equal(a.rhs, b.rhs);
}

Count equation_size(const Equation& e) { return e.lhs->size + e.rhs->size + 1; }

std::string axiom_case_name(AxiomCase c) {
  switch (c) {
    case AxiomCase::EpsCase: return "eps";
    case AxiomCase::S0Case: return "s0";
    case AxiomCase::S1Case: return "s1";
    case AxiomCase::CompCase: return "comp";
    case AxiomCase::ConstNCase: return "constn";
    case AxiomCase::ProjCase: return "proj";
  }
  return "?";
}

namespace {

std::vector<Term> canonical_vars(Count n) {
  std::vector<Term> xs;
  for (Count i = 1; i <= n; ++i) xs.push_back(var("x" + std::to_string(i)));
  return xs;
}

}  // namespace

Equation axiom_schema(const Fn& f, AxiomCase c) {
  switch (f->kind) {
    case FnKind::Eps:
    case FnKind::Succ:
      throw std::invalid_argument("no defining axiom for " + fn_brief(f));
    case FnKind::ConstN: {
      if (c != AxiomCase::ConstNCase)
        throw std::invalid_argument("constant function: case must be constn");
      return Equation{app(f, canonical_vars(f->n)), eps_term()};
    }
    case FnKind::Proj: {
      if (c != AxiomCase::ProjCase)
        throw std::invalid_argument("projection: case must be proj");
      auto xs = canonical_vars(f->n);
      return Equation{app(f, xs), xs[f->index - 1]};
    }
    case FnKind::Comp: {
      if (c != AxiomCase::CompCase)
        throw std::invalid_argument("composition: case must be comp");
      auto xs = canonical_vars(f->arity);
      std::vector<Term> happs;
      for (const auto& h : f->hs) happs.push_back(app(h, xs));
      return Equation{app(f, xs), app(f->g, happs)};
    }
    case FnKind::Rec: {
      auto xs = canonical_vars(f->arity - 1);
      Term x = var("x");
      switch (c) {
        case AxiomCase::EpsCase: {
          std::vector<Term> lhs_args{eps_term()};
          lhs_args.insert(lhs_args.end(), xs.begin(), xs.end());
          return Equation{app(f, lhs_args), app(f->g_eps, xs)};
        }
        case AxiomCase::S0Case:
        case AxiomCase::S1Case: {
          int bit = c == AxiomCase::S1Case ? 1 : 0;
          std::vector<Term> lhs_args{succ_term(bit, x)};
          lhs_args.insert(lhs_args.end(), xs.begin(), xs.end());
          std::vector<Term> rec_args{x};
          rec_args.insert(rec_args.end(), xs.begin(), xs.end());
          std::vector<Term> rhs_args{x, app(f, rec_args)};
          rhs_args.insert(rhs_args.end(), xs.begin(), xs.end());
          return Equation{app(f, lhs_args), app(bit ? f->g1 : f->g0, rhs_args)};
        }
        default:
          throw std::invalid_argument("recursion: case must be eps, s0 or s1");
      }
    }
  }
  throw std::invalid_argument("axiom_schema: unknown symbol kind");
}

namespace {

bool match_term(const Term& pattern, const Term& subject,
                std::map<std::string, Term>& binding) {
  switch (pattern->kind) {
    case TermKind::Var: {
      auto it = binding.find(pattern->name);
      if (it == binding.end()) {
        binding.emplace(pattern->name, subject);
        return true;
      }
      return term_equal(it->second, subject);
    }
    case TermKind::Star: return is_star(subject);
    case TermKind::App: {
      if (subject->kind != TermKind::App || !fn_equal(pattern->fn, subject->fn))
        return false;
      for (std::size_t i = 0; i < pattern->args.size(); ++i)
        if (!match_term(pattern->args[i], subject->args[i], binding)) return false;
      return true;
    }
  }
  return false;
}

// Simultaneous substitution: instance terms may themselves use names that
// collide with the canonical schema variables.
Term apply_binding(const Term& t, const std::map<std::string, Term>& binding) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = binding.find(t->name);
      return it == binding.end() ? t : it->second;
    }
    case TermKind::Star: return t;
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(apply_binding(a, binding));
      return app(t->fn, std::move(args));
    }
  }
  return t;
}

}  // namespace

bool matches_schema(const Equation& schema, const Equation& instance) {
  std::map<std::string, Term> binding;
  if (!match_term(schema.lhs, instance.lhs, binding)) return false;
  return term_equal(apply_binding(schema.rhs, binding), instance.rhs);
}

// ---------------------------------------------------------------------------

Proof ProofTree::axiom(Fn f, AxiomCase c, Equation inst) {
  auto p = std::make_shared<ProofTree>();
  p->kind = DefAxiom;
  p->fn = std::move(f);
  p->axiom_case = c;
  p->instance = std::move(inst);
  return p;
}

Proof ProofTree::identity(Term t) {
  auto p = std::make_shared<ProofTree>();
  p->kind = Identity;
  p->term = std::move(t);
  return p;
}

Proof ProofTree::symmetry(Proof q) {
  auto p = std::make_shared<ProofTree>();
  p->kind = Symmetry;
  p->children = {std::move(q)};
  return p;
}

Proof ProofTree::transitivity(Proof a, Proof b) {
  auto p = std::make_shared<ProofTree>();
  p->kind = Transitivity;
  p->children = {std::move(a), std::move(b)};
  return p;
}

Proof ProofTree::congruence(Fn f, std::vector<Proof> ps) {
  auto p = std::make_shared<ProofTree>();
  p->kind = Congruence;
  p->fn = std::move(f);
  p->children = std::move(ps);
  return p;
}

Proof ProofTree::subst(Proof q, Term r, std::string x) {
  auto p = std::make_shared<ProofTree>();
  p->kind = SubstRule;
  p->children = {std::move(q)};
  p->subst_term = std::move(r);
  p->subst_var = std::move(x);
  return p;
}

namespace {

struct Checker {
  std::optional<ProofViolation> violation;

  std::optional<Equation> run(const Proof& p, const std::string& path) {
    switch (p->kind) {
      case ProofTree::DefAxiom: {
        if (!p->instance) return fail(path, "axiom: missing instance");
        if (!p->instance->lhs->star_free || !p->instance->rhs->star_free)
          return fail(path, "axiom: instance must be star-free");
        Equation schema;
        try {
          schema = axiom_schema(p->fn, p->axiom_case);
        } catch (const std::invalid_argument& e) {
          return fail(path, e.what());
        }
        if (!matches_schema(schema, *p->instance))
          return fail(path, "axiom: instance does not match the defining axiom");
        return *p->instance;
      }
      case ProofTree::Identity: {
        if (!p->term) return fail(path, "refl: missing term");
        if (!p->term->star_free) return fail(path, "refl: term must be star-free");
        return Equation{p->term, p->term};
      }
      case ProofTree::Symmetry: {
        auto sub = run(p->children[0], path + ".sym");
        if (!sub) return std::nullopt;
        return Equation{sub->rhs, sub->lhs};
      }
      case ProofTree::Transitivity: {
        auto a = run(p->children[0], path + ".trans[0]");
        if (!a) return std::nullopt;
        auto b = run(p->children[1], path + ".trans[1]");
        if (!b) return std::nullopt;
        if (!term_equal(a->rhs, b->lhs))
          return fail(path, "trans: middle terms differ");
        return Equation{a->lhs, b->rhs};
      }
      case ProofTree::Congruence: {
        if (!p->fn) return fail(path, "cong: missing symbol");
        if (static_cast<Count>(p->children.size()) != p->fn->arity)
          return fail(path, "cong: premise count differs from arity");
        std::vector<Term> ls, rs;
        for (std::size_t i = 0; i < p->children.size(); ++i) {
          auto sub = run(p->children[i], path + ".cong[" + std::to_string(i) + "]");
          if (!sub) return std::nullopt;
          ls.push_back(sub->lhs);
          rs.push_back(sub->rhs);
        }
        return Equation{app(p->fn, ls), app(p->fn, rs)};
      }
      case ProofTree::SubstRule: {
        if (!p->subst_term) return fail(path, "substp: missing term");
        if (!p->subst_term->star_free)
          return fail(path, "substp: substituted term must be star-free");
        auto sub = run(p->children[0], path + ".substp");
        if (!sub) return std::nullopt;
        return Equation{substitute(sub->lhs, p->subst_term, p->subst_var),
                        substitute(sub->rhs, p->subst_term, p->subst_var)};
      }
    }
    return fail(path, "unknown proof node");
  }

  std::optional<Equation> fail(const std::string& path, const std::string& cond) {
    if (!violation) violation = ProofViolation{path, cond};
    return std::nullopt;
  }
};

Count size_walk(const Proof& p, const Equation& concl) {
  Count total = equation_size(concl);
  switch (p->kind) {
    case ProofTree::DefAxiom:
    case ProofTree::Identity: return total;
    case ProofTree::Symmetry:
      return total + size_walk(p->children[0], Equation{concl.rhs, concl.lhs});
    case ProofTree::Transitivity: {
      Equation a = conclusion(p->children[0]);
      Equation b = conclusion(p->children[1]);
      return total + size_walk(p->children[0], a) + size_walk(p->children[1], b);
    }
    case ProofTree::Congruence: {
      for (const auto& c : p->children) total += size_walk(c, conclusion(c));
      return total;
    }
    case ProofTree::SubstRule:
      return total + size_walk(p->children[0], conclusion(p->children[0]));
  }
  return total;
}

}  // namespace

Equation conclusion(const Proof& p) {
  Checker ck;
  auto eq = ck.run(p, "root");
  if (!eq)
    throw std::invalid_argument("malformed proof at " + ck.violation->path + ": " +
                                ck.violation->condition);
  return *eq;
}

CheckResult check(const Proof& p) {
  CheckResult r;
  Checker ck;
  auto eq = ck.run(p, "root");
  if (!eq) {
    r.ok = false;
    r.violation = ck.violation;
    return r;
  }
  r.ok = true;
  r.conclusion = *eq;
  r.size = size_walk(p, *eq);
  return r;
}

Count proof_size(const Proof& p) { return size_walk(p, conclusion(p)); }

Count proof_node_count(const Proof& p) {
  Count n = 1;
  for (const auto& c : p->children) n += proof_node_count(c);
  return n;
}

Proof rename_var(const Proof& p, const std::string& from, const std::string& to) {
  Term to_var = var(to);
  auto rn = [&](const Term& t) { return t ? substitute(t, to_var, from) : t; };
  auto q = std::make_shared<ProofTree>(*p);
  q->term = rn(p->term);
  q->subst_term = rn(p->subst_term);
  if (p->subst_var == from) q->subst_var = to;
  if (p->instance)
    q->instance = Equation{rn(p->instance->lhs), rn(p->instance->rhs)};
  q->children.clear();
  for (const auto& c : p->children) q->children.push_back(rename_var(c, from, to));
  return q;
}

std::set<std::string> proof_var_names(const Proof& p) {
  std::set<std::string> out;
  if (p->term) collect_var_names(p->term, out);
  if (p->subst_term) collect_var_names(p->subst_term, out);
  if (p->kind == ProofTree::SubstRule) out.insert(p->subst_var);
  if (p->instance) {
    collect_var_names(p->instance->lhs, out);
    collect_var_names(p->instance->rhs, out);
  }
  for (const auto& c : p->children) {
    auto sub = proof_var_names(c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

}  // namespace pvw
