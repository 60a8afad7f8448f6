#include "pvw/eval.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace pvw {

// ---------------------------------------------------------------------------
// Denotational oracle

BitString denote(const Fn& f, const std::vector<BitString>& args) {
  if (static_cast<Count>(args.size()) != f->arity)
    throw EvalError("denote: arity mismatch for " + fn_brief(f));
  switch (f->kind) {
    case FnKind::Eps: return "";
    case FnKind::Succ: return std::string(1, f->bit ? '1' : '0') + args[0];
    case FnKind::ConstN: return "";
    case FnKind::Proj: return args[f->index - 1];
    case FnKind::Comp: {
      std::vector<BitString> ws;
      ws.reserve(f->hs.size());
      for (const auto& h : f->hs) ws.push_back(denote(h, args));
      return denote(f->g, ws);
    }
    case FnKind::Rec: {
      const BitString& scrut = args[0];
      std::vector<BitString> rest(args.begin() + 1, args.end());
      if (scrut.empty()) return denote(f->g_eps, rest);
      char b = scrut.front();
      BitString tail = scrut.substr(1);
      std::vector<BitString> sub;
      sub.reserve(args.size());
      sub.push_back(tail);
      sub.insert(sub.end(), rest.begin(), rest.end());
      BitString w = denote(f, sub);
      std::vector<BitString> step;
      step.reserve(rest.size() + 2);
      step.push_back(tail);
      step.push_back(w);
      step.insert(step.end(), rest.begin(), rest.end());
      return denote(b == '1' ? f->g1 : f->g0, step);
    }
  }
  throw EvalError("denote: unknown symbol kind");
}

Term numeral_of(const BitString& bits) {
  Term t = eps_term();
  for (auto it = bits.rbegin(); it != bits.rend(); ++it)
    t = succ_term(*it == '1' ? 1 : 0, t);
  return t;
}

BitString bits_of(const Term& numeral) {
  BitString out;
  Term t = numeral;
  while (auto s = succ_split(t)) {
    out.push_back(s->first ? '1' : '0');
    t = s->second;
  }
  if (!is_eps(t)) throw EvalError("bits_of: not a star-free numeral");
  return out;
}

// ---------------------------------------------------------------------------
// Lazy value sources

namespace {

Term truncate_at(const Term& v, Demand d) {
  return d.full ? v : truncate_numeral(v, d.d);
}

struct EvalCtx;

struct Source {
  Count max_forced = 0;
  bool forced_full = false;
  bool ever_forced = false;
  Term cached = star();
  std::optional<std::size_t> node;

  virtual ~Source() = default;
  virtual Term compute(EvalCtx& cx, Demand d) = 0;
  virtual std::size_t materialize(EvalCtx& cx) = 0;

  bool covers(Demand d) const {
    if (!ever_forced) return false;
    if (forced_full) return true;
    return !d.full && d.d <= max_forced;
  }

  // Sources may round a demand up when extra precision costs nothing.
  virtual Demand effective_demand(Demand d) const { return d; }

  Term force(EvalCtx& cx, Demand d) {
    if (d.zero()) return star();
    d = effective_demand(d);
    if (covers(d)) return truncate_at(cached, d);
    cached = compute(cx, d);
    ever_forced = true;
    if (d.full)
      forced_full = true;
    else
      max_forced = std::max(max_forced, d.d);
    return cached;
  }

  Term final_value() const { return ever_forced ? cached : star(); }
};

using SourcePtr = std::shared_ptr<Source>;

struct EvalCtx {
  bool exact = false;
  DagBuilder builder;

  // Exact evaluation shares every repeated statement; demand-driven
  // evaluation shares only numeral-space statements so that node counts
  // stay monotone in the demand.
  std::size_t put(RuleTag rule, std::vector<std::size_t> premises, Statement stmt) {
    if (exact || is_g_numeral(stmt.main))
      return builder.add(rule, std::move(premises), std::move(stmt));
    return builder.add_new(rule, std::move(premises), std::move(stmt));
  }

  // Derives <v_main, ()> |_ w for g-numerals v_main <=_approx w.
  std::size_t approx_numeral_node(const Term& v, const Term& w) {
    if (term_equal(v, w)) return builder.numeral_node(v, Development{});
    if (is_star(w)) return builder.star_node(v, Development{});
    auto sv = succ_split(v), sw = succ_split(w);
    if (!sv || !sw || sv->first != sw->first)
      throw EvalError("approx_numeral_node: not an approximation");
    Statement want{v, Development{}, w};
    if (auto hit = builder.find(want)) return builder.use_as_premise(*hit);
    std::size_t chain = builder.numeral_node(w, Development{});
    std::size_t sub = approx_numeral_node(sv->second, sw->second);
    return builder.add_new(RuleTag::succ_rule(sv->first), {chain, sub}, want);
  }
};

struct LitSource : Source {
  Term lit;
  explicit LitSource(Term t) : lit(std::move(t)) {}
  Term compute(EvalCtx&, Demand d) override { return truncate_at(lit, d); }
  std::size_t materialize(EvalCtx&) override {
    throw EvalError("literal argument sources have no derivation");
  }
};

struct TailSource : Source {
  SourcePtr parent;
  explicit TailSource(SourcePtr p) : parent(std::move(p)) {}
  Term compute(EvalCtx& cx, Demand d) override {
    Term v = parent->force(cx, d.succ());
    if (auto s = succ_split(v)) return truncate_at(s->second, d);
    if (is_star(v)) return star();
    throw EvalError("tail of a non-successor value");
  }
  std::size_t materialize(EvalCtx&) override {
    throw EvalError("tail sources have no derivation");
  }
};

// Numeric application < f(values...), () >. Each argument slot remembers the
// deepest demand this application placed on it; the recorded main term embeds
// the values at exactly those depths.
struct AppSource : Source {
  Fn fn;
  std::vector<SourcePtr> args;
  std::vector<Count> slot_used;
  std::vector<bool> slot_full;
  // lazily created internals
  std::vector<SourcePtr> children;  // Comp: h_1..h_m, g | Rec: branch parts
  int branch = -2;                  // Rec: -2 unknown, -1 star, 0/1 succ, 2 eps
  bool finalized = false;

  AppSource(Fn f, std::vector<SourcePtr> a)
      : fn(std::move(f)),
        args(std::move(a)),
        slot_used(args.size(), 0),
        slot_full(args.size(), false) {}

  Term pull(EvalCtx& cx, std::size_t slot, Demand d) {
    if (d.zero()) return star();
    if (d.full)
      slot_full[slot] = true;
    else
      slot_used[slot] = std::max(slot_used[slot], d.d);
    return args[slot]->force(cx, d);
  }

  Term slot_value(std::size_t slot) const {
    Term fin = args[slot]->final_value();
    return slot_full[slot] ? fin : truncate_numeral(fin, slot_used[slot]);
  }

  void merge_slot(std::size_t mine, const AppSource& child, std::size_t theirs) {
    if (child.slot_full[theirs]) slot_full[mine] = true;
    slot_used[mine] = std::max(slot_used[mine], child.slot_used[theirs]);
  }

  // The recorded main term must be at least as precise as every premise
  // that mentions the same argument, so fold the children's slot records in.
  void finalize() {
    if (finalized) return;
    finalized = true;
    if (children.empty()) return;
    if (fn->kind == FnKind::Comp) {
      for (std::size_t j = 0; j + 1 < children.size(); ++j) {
        auto* h = static_cast<AppSource*>(children[j].get());
        h->finalize();
        for (std::size_t i = 0; i < args.size(); ++i) merge_slot(i, *h, i);
      }
    } else if (fn->kind == FnKind::Rec) {
      if (branch == 2) {
        auto* ge = static_cast<AppSource*>(children.back().get());
        ge->finalize();
        for (std::size_t i = 1; i < args.size(); ++i) merge_slot(i, *ge, i - 1);
      } else if (branch == 0 || branch == 1) {
        auto* gb = static_cast<AppSource*>(children.back().get());
        gb->finalize();
        auto* rec = static_cast<AppSource*>(gb->args[1].get());
        rec->finalize();
        for (std::size_t i = 1; i < args.size(); ++i) {
          merge_slot(i, *gb, i + 1);
          merge_slot(i, *rec, i);
        }
      }
    }
  }

  Term compute(EvalCtx& cx, Demand d) override;
  std::size_t materialize(EvalCtx& cx) override;

  Term main_term() {
    finalize();
    std::vector<Term> ts;
    ts.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) ts.push_back(slot_value(i));
    return app(fn, std::move(ts));
  }
};

// < t, rho > under an environment.
struct TermSource : Source {
  Term term;
  Development env;
  SourcePtr child;                   // Var binding / Succ argument
  std::vector<SourcePtr> arg_srcs;   // per argument (apps other than Succ)
  SourcePtr inner;                   // Comp g-app / Rec branch app
  int branch = -2;

  TermSource(Term t, Development rho) : term(std::move(t)), env(std::move(rho)) {}

  // A g-numeral main term is cheapest at full precision: the aligned
  // successor chain beats any partially-starred variant.
  Demand effective_demand(Demand d) const override {
    return term->is_g_numeral ? Demand::Full() : d;
  }

  Term compute(EvalCtx& cx, Demand d) override;
  std::size_t materialize(EvalCtx& cx) override;

  void make_arg_sources() {
    if (!arg_srcs.empty() || term->args.empty()) return;
    for (const auto& a : term->args) {
      if (is_g_numeral(a))
        arg_srcs.push_back(std::make_shared<LitSource>(a));
      else
        arg_srcs.push_back(std::make_shared<TermSource>(a, env));
    }
  }
  void force_all_args(EvalCtx& cx) {
    for (auto& s : arg_srcs) s->force(cx, Demand::Full());
  }
};

// Shared application semantics; argument access goes through `pull` so that
// an AppSource can record the depth each slot was forced to, and `mark_deep`
// pins the recursion scrutinee slot to its full forced value.
Term force_numeric_app(EvalCtx& cx, const Fn& fn, std::vector<SourcePtr>& args,
                       std::vector<SourcePtr>& children, int& branch, Demand d,
                       const std::function<Term(std::size_t, Demand)>& pull,
                       const std::function<void(std::size_t)>& mark_deep) {
  auto pull_all_full = [&] {
    for (std::size_t i = 0; i < args.size(); ++i) pull(i, Demand::Full());
  };
  switch (fn->kind) {
    case FnKind::Eps: return eps_term();
    case FnKind::ConstN:
      if (cx.exact) pull_all_full();
      return eps_term();
    case FnKind::Succ:
      return succ_term(fn->bit, pull(0, cx.exact ? Demand::Full() : d.pred()));
    case FnKind::Proj: {
      if (cx.exact) pull_all_full();
      return pull(fn->index - 1, cx.exact ? Demand::Full() : d);
    }
    case FnKind::Comp: {
      if (cx.exact) pull_all_full();
      if (children.empty()) {
        std::vector<SourcePtr> hsrc;
        for (const auto& h : fn->hs)
          hsrc.push_back(std::make_shared<AppSource>(h, args));
        children = hsrc;
        children.push_back(std::make_shared<AppSource>(fn->g, std::move(hsrc)));
      }
      return children.back()->force(cx, d);
    }
    case FnKind::Rec: {
      if (cx.exact) pull_all_full();
      if (branch == -2) {
        Term head = pull(0, cx.exact ? Demand::Full() : Demand::at(1));
        mark_deep(0);
        if (is_star(head)) {
          branch = -1;
        } else if (is_eps(head)) {
          branch = 2;
          std::vector<SourcePtr> rest(args.begin() + 1, args.end());
          children = {std::make_shared<AppSource>(fn->g_eps, std::move(rest))};
        } else {
          auto s = succ_split(head);
          branch = s->first;
          auto tail = std::make_shared<TailSource>(args[0]);
          std::vector<SourcePtr> rec_args = {tail};
          rec_args.insert(rec_args.end(), args.begin() + 1, args.end());
          auto rec = std::make_shared<AppSource>(fn, std::move(rec_args));
          std::vector<SourcePtr> step_args = {tail, rec};
          step_args.insert(step_args.end(), args.begin() + 1, args.end());
          children = {std::make_shared<AppSource>(branch ? fn->g1 : fn->g0,
                                                  std::move(step_args))};
        }
      }
      if (branch == -1) return star();
      return children.back()->force(cx, d);
    }
  }
  throw EvalError("force_numeric_app: unknown symbol kind");
}

Term AppSource::compute(EvalCtx& cx, Demand d) {
  return force_numeric_app(
      cx, fn, args, children, branch, d,
      [&](std::size_t slot, Demand dem) { return pull(cx, slot, dem); },
      [&](std::size_t slot) { slot_full[slot] = true; });
}

Term TermSource::compute(EvalCtx& cx, Demand d) {
  switch (term->kind) {
    case TermKind::Star:
      if (cx.exact) throw EvalError("exact evaluation encountered *");
      return star();
    case TermKind::Var: {
      auto hit = env.lookup(term->name);
      if (!hit) throw EvalError("unbound variable " + term->name);
      if (!child)
        child = std::make_shared<TermSource>(hit->term, env.suffix_after(hit->position));
      return child->force(cx, d);
    }
    case TermKind::App: {
      const Fn& f = term->fn;
      if (f->kind == FnKind::Succ) {
        if (!child) {
          const Term& arg = term->args[0];
          child = std::make_shared<TermSource>(arg, env);
        }
        return succ_term(f->bit, child->force(cx, cx.exact ? Demand::Full() : d.pred()));
      }
      make_arg_sources();
      if (f->kind == FnKind::Eps) return eps_term();
      std::vector<SourcePtr> inner_children;
      if (inner) inner_children = {inner};
      Term v = force_numeric_app(
          cx, f, arg_srcs, inner_children, branch, d,
          [&](std::size_t slot, Demand dem) { return arg_srcs[slot]->force(cx, dem); },
          [](std::size_t) {});
      if (!inner_children.empty()) inner = inner_children.back();
      return v;
    }
  }
  throw EvalError("TermSource::compute: unknown term kind");
}

// ---------------------------------------------------------------------------
// Materialization

std::size_t AppSource::materialize(EvalCtx& cx) {
  if (node) return *node;
  finalize();
  Term value = final_value();
  Statement concl{main_term(), Development{}, value};
  if (is_star(value)) {
    node = cx.put(RuleTag::star_rule(), {}, concl);
    return *node;
  }
  DagBuilder& b = cx.builder;
  switch (fn->kind) {
    case FnKind::Eps: {
      node = b.add(RuleTag::eps_n(), {}, concl);
      break;
    }
    case FnKind::ConstN: {
      std::size_t e = b.numeral_node(eps_term(), Development{});
      node = cx.put(RuleTag::const_fn(fn->n), {e}, concl);
      break;
    }
    case FnKind::Succ: {
      auto sv = succ_split(value);
      Term arg_embed = slot_value(0);
      if (term_equal(arg_embed, sv->second)) {
        // aligned (the common case): s_i n-form over the argument value
        std::size_t sub = b.numeral_node(sv->second, Development{});
        node = cx.put(RuleTag::succ_n(fn->bit), {sub}, concl);
      } else {
        std::size_t chain = b.numeral_node(value, Development{});
        std::size_t sub = cx.approx_numeral_node(arg_embed, sv->second);
        node = cx.put(RuleTag::succ_rule(fn->bit), {chain, sub}, concl);
      }
      break;
    }
    case FnKind::Proj: {
      std::size_t v = b.numeral_node(value, Development{});
      node = cx.put(RuleTag::proj_rule(fn->index, fn->n), {v}, concl);
      break;
    }
    case FnKind::Comp: {
      std::vector<std::size_t> prem;
      prem.push_back(children.back()->materialize(cx));  // g application
      for (std::size_t j = 0; j + 1 < children.size(); ++j)
        prem.push_back(children[j]->materialize(cx));
      node = cx.put(RuleTag::comp_rule(), std::move(prem), concl);
      break;
    }
    case FnKind::Rec: {
      if (branch == 2) {
        std::size_t g = children.back()->materialize(cx);
        node = cx.put(RuleTag::rec_eps(), {g}, concl);
      } else {
        auto* step = static_cast<AppSource*>(children.back().get());
        std::size_t g = step->materialize(cx);
        std::size_t rec = step->args[1]->materialize(cx);
        node = cx.put(RuleTag::rec_succ(branch), {g, rec}, concl);
      }
      break;
    }
  }
  return *node;
}

std::size_t TermSource::materialize(EvalCtx& cx) {
  if (node) return *node;
  DagBuilder& b = cx.builder;
  Term value = final_value();
  Statement concl{term, env, value};
  if (is_star(value)) {
    node = cx.put(RuleTag::star_rule(), {}, concl);
    return *node;
  }
  switch (term->kind) {
    case TermKind::Var: {
      std::size_t sub = child->materialize(cx);
      node = cx.put(RuleTag::subst(), {sub}, concl);
      break;
    }
    case TermKind::Star:
      throw EvalError("cannot materialize a non-star value for *");
    case TermKind::App: {
      const Fn& f = term->fn;
      if (f->kind == FnKind::Eps) {
        if (env.empty()) {
          node = b.add(RuleTag::eps_n(), {}, concl);
        } else {
          std::size_t e = b.numeral_node(eps_term(), Development{});
          node = b.add(RuleTag::eps_rule(), {e}, concl);
        }
        break;
      }
      if (f->kind == FnKind::Succ) {
        auto sv = succ_split(value);
        Term sub_value = child->final_value();
        std::size_t sub = child->materialize(cx);
        if (term_equal(term->args[0], sub_value) && env.empty()) {
          node = cx.put(RuleTag::succ_n(f->bit), {sub}, concl);
        } else {
          std::size_t chain = b.numeral_node(value, Development{});
          (void)sv;
          node = cx.put(RuleTag::succ_rule(f->bit), {chain, sub}, concl);
        }
        break;
      }
      // X-set argument premises shared by the remaining rules.
      auto arg_premises = [&]() {
        std::vector<std::size_t> prem;
        for (std::size_t i = 0; i < term->args.size(); ++i)
          if (!is_g_numeral(term->args[i])) prem.push_back(arg_srcs[i]->materialize(cx));
        return prem;
      };
      switch (f->kind) {
        case FnKind::ConstN: {
          std::vector<std::size_t> prem{b.numeral_node(eps_term(), Development{})};
          for (auto p : arg_premises()) prem.push_back(p);
          node = cx.put(RuleTag::const_fn(f->n), std::move(prem), concl);
          break;
        }
        case FnKind::Proj: {
          std::vector<std::size_t> prem{b.numeral_node(value, Development{})};
          for (auto p : arg_premises()) prem.push_back(p);
          node = cx.put(RuleTag::proj_rule(f->index, f->n), std::move(prem), concl);
          break;
        }
        case FnKind::Comp: {
          auto* gapp = static_cast<AppSource*>(inner.get());
          std::vector<std::size_t> prem;
          prem.push_back(gapp->materialize(cx));
          for (const auto& h : gapp->args) prem.push_back(h->materialize(cx));
          for (auto p : arg_premises()) prem.push_back(p);
          node = cx.put(RuleTag::comp_rule(), std::move(prem), concl);
          break;
        }
        case FnKind::Rec: {
          bool scrut_numeral = is_g_numeral(term->args[0]);
          if (branch == 2) {
            std::vector<std::size_t> prem{inner->materialize(cx)};
            if (!scrut_numeral) prem.push_back(arg_srcs[0]->materialize(cx));
            for (std::size_t i = 1; i < term->args.size(); ++i)
              if (!is_g_numeral(term->args[i]))
                prem.push_back(arg_srcs[i]->materialize(cx));
            node = cx.put(RuleTag::rec_eps(), std::move(prem), concl);
          } else {
            auto* step = static_cast<AppSource*>(inner.get());
            std::vector<std::size_t> prem{step->materialize(cx)};
            if (!scrut_numeral) prem.push_back(arg_srcs[0]->materialize(cx));
            prem.push_back(step->args[1]->materialize(cx));
            for (std::size_t i = 1; i < term->args.size(); ++i)
              if (!is_g_numeral(term->args[i]))
                prem.push_back(arg_srcs[i]->materialize(cx));
            node = cx.put(RuleTag::rec_succ(branch), std::move(prem), concl);
          }
          break;
        }
        default: throw EvalError("materialize: unexpected head");
      }
      break;
    }
  }
  return *node;
}

// ---------------------------------------------------------------------------
// Preconditions

void check_grounded(const Term& t, const Development& rho) {
  auto bound_after = [&](std::size_t k) {
    std::set<std::string> names;
    for (std::size_t i = k; i < rho.length(); ++i) names.insert(rho.bindings()[i].var);
    return names;
  };
  std::set<std::string> top = bound_after(0);
  for (const auto& v : free_vars(t))
    if (!top.count(v)) throw EvalError("unbound variable " + v);
  for (std::size_t i = 0; i < rho.length(); ++i) {
    auto later = bound_after(i + 1);
    for (const auto& v : free_vars(rho.bindings()[i].term))
      if (!later.count(v))
        throw EvalError("unbound variable " + v + " in environment binding");
  }
}

void check_star_free(const Term& t, const Development& rho) {
  if (!t->star_free) throw EvalError("exact evaluation requires a star-free term");
  for (const auto& b : rho.bindings())
    if (!b.term->star_free)
      throw EvalError("exact evaluation requires a star-free environment");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points

namespace {

CompDag run_eval(const Term& t, const Development& rho, Demand d, bool exact) {
  check_grounded(t, rho);
  if (exact) check_star_free(t, rho);
  EvalCtx cx;
  cx.exact = exact;
  auto top = std::make_shared<TermSource>(t, rho);
  top->force(cx, d);
  top->materialize(cx);
  return cx.builder.take();
}

}  // namespace

CompDag exact_eval(const Term& t, const Development& rho) {
  return run_eval(t, rho, Demand::Full(), true);
}

CompDag approx_eval(const Term& t, const Development& rho, Demand d) {
  return run_eval(t, rho, d, false);
}

CompDag numeral_comp(const Term& v, const Development& rho) {
  if (!is_g_numeral(v)) throw EvalError("numeral_comp: not a g-numeral");
  DagBuilder b;
  b.numeral_node(v, rho);
  return b.take();
}

CompDag extend_succ(const CompDag& dag, const Statement& s, int bit) {
  auto idx = dag.find_stmt(s);
  if (!idx) throw EvalError("extend_succ: statement not present");
  DagBuilder b(dag);
  Term new_main = succ_term(bit, s.main);
  Term new_value = succ_term(bit, s.value);
  Statement concl{new_main, s.env, new_value};
  if (term_equal(s.main, s.value) && s.env.empty()) {
    b.add_new(RuleTag::succ_n(bit), {*idx}, concl);
    return b.take();
  }
  Statement chain_stmt{new_value, Development{}, new_value};
  std::size_t chain;
  if (auto hit = b.find(chain_stmt)) {
    chain = *hit;
  } else {
    Statement base{s.value, Development{}, s.value};
    std::size_t base_idx;
    if (auto bhit = b.find(base)) {
      base_idx = *bhit;
    } else if (is_star(s.value)) {
      base_idx = b.add_new(RuleTag::star_rule(), {}, base);
    } else {
      throw EvalError("extend_succ: <v,()> |_ v not present in the computation");
    }
    chain = b.add_new(RuleTag::succ_n(bit), {base_idx}, chain_stmt);
  }
  b.add_new(RuleTag::succ_rule(bit), {chain, *idx}, concl);
  return b.take();
}

}  // namespace pvw
