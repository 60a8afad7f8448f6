#include "pvw/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace pvw {

namespace {

std::size_t fn_hash_seed(FnKind k) {
  return 0x51ed2700u + static_cast<std::size_t>(k) * 0x9e3779b9u;
}

Fn finish(std::shared_ptr<FunctionDef> f) {
  return std::const_pointer_cast<const FunctionDef>(f);
}

}  // namespace

Fn FunctionDef::eps() {
  static Fn cached = [] {
    auto f = std::make_shared<FunctionDef>();
    f->kind = FnKind::Eps;
    f->arity = 0;
    f->symbol_size = 1;
    f->hash = fn_hash_seed(FnKind::Eps);
    return finish(f);
  }();
  return cached;
}

Fn FunctionDef::succ(int bit) {
  static Fn cached[2] = {nullptr, nullptr};
  if (bit != 0 && bit != 1) throw std::invalid_argument("succ: bit must be 0 or 1");
  if (!cached[bit]) {
    auto f = std::make_shared<FunctionDef>();
    f->kind = FnKind::Succ;
    f->bit = bit;
    f->arity = 1;
    f->symbol_size = 1;
    f->hash = hash_combine(fn_hash_seed(FnKind::Succ), bit);
    cached[bit] = finish(f);
  }
  return cached[bit];
}

Fn FunctionDef::const_n(int n) {
  if (n < 1) throw std::invalid_argument("const_n: arity must be >= 1");
  auto f = std::make_shared<FunctionDef>();
  f->kind = FnKind::ConstN;
  f->n = n;
  f->arity = n;
  f->symbol_size = n + 1;
  f->hash = hash_combine(fn_hash_seed(FnKind::ConstN), n);
  return finish(f);
}

Fn FunctionDef::proj(int n, int i) {
  if (n < 1) throw std::invalid_argument("proj: arity must be >= 1");
  if (i < 1 || i > n) throw std::invalid_argument("proj: index out of range");
  auto f = std::make_shared<FunctionDef>();
  f->kind = FnKind::Proj;
  f->n = n;
  f->index = i;
  f->arity = n;
  f->symbol_size = n + 1;
  f->hash = hash_combine(hash_combine(fn_hash_seed(FnKind::Proj), n), i);
  return finish(f);
}

Fn FunctionDef::comp(Fn g, std::vector<Fn> hs) {
  if (!g) throw std::invalid_argument("comp: null g");
  if (hs.empty()) throw std::invalid_argument("comp: needs at least one h");
  if (g->arity != static_cast<Count>(hs.size()))
    throw std::invalid_argument("comp: arity(g) != number of h's");
  Count n = hs.front()->arity;
  if (n < 1) throw std::invalid_argument("comp: h's must have arity >= 1");
  for (const auto& h : hs)
    if (!h || h->arity != n) throw std::invalid_argument("comp: h's must share one arity");
  auto f = std::make_shared<FunctionDef>();
  f->kind = FnKind::Comp;
  f->g = g;
  f->hs = std::move(hs);
  f->arity = n;
  f->symbol_size = 1 + g->symbol_size;
  f->hash = hash_combine(fn_hash_seed(FnKind::Comp), g->hash);
  for (const auto& h : f->hs) {
    f->symbol_size += h->symbol_size;
    f->hash = hash_combine(f->hash, h->hash);
  }
  return finish(f);
}

Fn FunctionDef::rec(Fn g_eps, Fn g0, Fn g1) {
  if (!g_eps || !g0 || !g1) throw std::invalid_argument("rec: null component");
  if (g0->arity != g_eps->arity + 2 || g1->arity != g_eps->arity + 2)
    throw std::invalid_argument("rec: step arity must be base arity + 2");
  auto f = std::make_shared<FunctionDef>();
  f->kind = FnKind::Rec;
  f->g_eps = g_eps;
  f->g0 = g0;
  f->g1 = g1;
  f->arity = g_eps->arity + 1;
  f->symbol_size = 1 + g_eps->symbol_size + g0->symbol_size + g1->symbol_size;
  f->hash = hash_combine(
      hash_combine(hash_combine(fn_hash_seed(FnKind::Rec), g_eps->hash), g0->hash),
      g1->hash);
  return finish(f);
}

bool fn_equal(const Fn& a, const Fn& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case FnKind::Eps: return true;
    case FnKind::Succ: return a->bit == b->bit;
    case FnKind::ConstN: return a->n == b->n;
    case FnKind::Proj: return a->n == b->n && a->index == b->index;
    case FnKind::Comp: {
      if (!fn_equal(a->g, b->g) || a->hs.size() != b->hs.size()) return false;
      for (std::size_t i = 0; i < a->hs.size(); ++i)
        if (!fn_equal(a->hs[i], b->hs[i])) return false;
      return true;
    }
    case FnKind::Rec:
      return fn_equal(a->g_eps, b->g_eps) && fn_equal(a->g0, b->g0) &&
             fn_equal(a->g1, b->g1);
  }
  return false;
}

std::string fn_brief(const Fn& f) {
  switch (f->kind) {
    case FnKind::Eps: return "eps";
    case FnKind::Succ: return f->bit ? "s1" : "s0";
    case FnKind::ConstN: return "eps-n/" + std::to_string(f->n);
    case FnKind::Proj:
      return "proj/" + std::to_string(f->n) + "." + std::to_string(f->index);
    case FnKind::Comp: return "comp(" + fn_brief(f->g) + ",...)";
    case FnKind::Rec: return "rec(...)";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Term var(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("var: empty name");
  auto t = std::make_shared<Term_>();
  t->kind = TermKind::Var;
  t->name = name;
  t->size = 1;
  t->hash = hash_combine(0x7a11e7, std::hash<std::string>{}(name));
  t->is_g_numeral = false;
  t->star_free = true;
  return t;
}

Term star() {
  static Term cached = [] {
    auto t = std::make_shared<Term_>();
    t->kind = TermKind::Star;
    t->size = 1;
    t->hash = 0x57a1;
    t->is_g_numeral = true;
    t->star_free = false;
    return std::const_pointer_cast<const Term_>(t);
  }();
  return cached;
}

Term app(Fn f, std::vector<Term> args) {
  if (!f) throw std::invalid_argument("app: null symbol");
  if (static_cast<Count>(args.size()) != f->arity)
    throw std::invalid_argument("app: argument count does not match arity of " +
                                fn_brief(f));
  auto t = std::make_shared<Term_>();
  t->kind = TermKind::App;
  t->fn = f;
  t->args = std::move(args);
  Count m = static_cast<Count>(t->args.size());
  t->size = f->symbol_size + (m > 0 ? m + 1 : 0);
  t->hash = hash_combine(0xa44, f->hash);
  t->star_free = true;
  bool numeral_parts = f->kind == FnKind::Eps || f->kind == FnKind::Succ;
  t->is_g_numeral = numeral_parts;
  for (const auto& a : t->args) {
    if (!a) throw std::invalid_argument("app: null argument");
    t->size += a->size;
    t->hash = hash_combine(t->hash, a->hash);
    t->star_free = t->star_free && a->star_free;
    t->is_g_numeral = t->is_g_numeral && a->is_g_numeral;
  }
  return t;
}

Term eps_term() {
  static Term cached = app(FunctionDef::eps(), {});
  return cached;
}

Term succ_term(int bit, Term t) { return app(FunctionDef::succ(bit), {std::move(t)}); }

bool term_equal(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: return a->name == b->name;
    case TermKind::Star: return true;
    case TermKind::App: {
      if (!fn_equal(a->fn, b->fn) || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_equal(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

Count term_size(const Term& t) { return t->size; }
bool is_g_numeral(const Term& t) { return t->is_g_numeral; }
bool is_star(const Term& t) { return t->kind == TermKind::Star; }

bool is_eps(const Term& t) {
  return t->kind == TermKind::App && t->fn->kind == FnKind::Eps;
}

std::optional<std::pair<int, Term>> succ_split(const Term& t) {
  if (t->kind == TermKind::App && t->fn->kind == FnKind::Succ)
    return std::make_pair(t->fn->bit, t->args[0]);
  return std::nullopt;
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_var_names(t, out);
  return out;
}

void collect_var_names(const Term& t, std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var: out.insert(t->name); break;
    case TermKind::Star: break;
    case TermKind::App:
      for (const auto& a : t->args) collect_var_names(a, out);
      break;
  }
}

Count occurrences(const std::string& x, const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return t->name == x ? 1 : 0;
    case TermKind::Star: return 0;
    case TermKind::App: {
      Count c = 0;
      for (const auto& a : t->args) c += occurrences(x, a);
      return c;
    }
  }
  return 0;
}

Term substitute(const Term& t, const Term& u, const std::string& x) {
  switch (t->kind) {
    case TermKind::Var: return t->name == x ? u : t;
    case TermKind::Star: return t;
    case TermKind::App: {
      bool changed = false;
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) {
        Term a2 = substitute(a, u, x);
        changed = changed || a2.get() != a.get();
        args.push_back(std::move(a2));
      }
      if (!changed) return t;
      return app(t->fn, std::move(args));
    }
  }
  return t;
}

bool approx_leq(const Term& r, const Term& t) {
  if (t->kind == TermKind::Star) return true;
  if (r->kind == TermKind::Star) return false;
  if (r->kind == TermKind::Var)
    return t->kind == TermKind::Var && r->name == t->name;
  if (t->kind != TermKind::App || r->kind != TermKind::App) return false;
  if (!fn_equal(r->fn, t->fn)) return false;
  for (std::size_t i = 0; i < r->args.size(); ++i)
    if (!approx_leq(r->args[i], t->args[i])) return false;
  return true;
}

Term truncate_numeral(const Term& v, Count d) {
  if (d <= 0) return star();
  if (auto s = succ_split(v)) return succ_term(s->first, truncate_numeral(s->second, d - 1));
  return v;
}

Count numeral_depth(const Term& v) {
  if (is_star(v)) return 0;
  if (auto s = succ_split(v)) return 1 + numeral_depth(s->second);
  return 1;  // eps leaf
}

// ---------------------------------------------------------------------------

Development::Development(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {
  std::set<std::string> seen;
  for (const auto& b : bindings_) {
    if (!seen.insert(b.var).second)
      throw std::invalid_argument("development: duplicate binding for " + b.var);
    if (free_vars(b.term).count(b.var))
      throw std::invalid_argument("development: self-referential binding for " + b.var);
    size_ += b.term->size + 4;
    hash_ = hash_combine(hash_combine(hash_, std::hash<std::string>{}(b.var)),
                         b.term->hash);
  }
}

Development Development::suffix_after(std::size_t k) const {
  std::vector<Binding> rest(bindings_.begin() + k + 1, bindings_.end());
  return Development(std::move(rest));
}

Development Development::prepend(const std::string& x, const Term& t) const {
  std::vector<Binding> bs;
  bs.reserve(bindings_.size() + 1);
  bs.push_back({x, t});
  bs.insert(bs.end(), bindings_.begin(), bindings_.end());
  return Development(std::move(bs));
}

std::optional<Development::Lookup> Development::lookup(const std::string& x) const {
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (bindings_[i].var == x) return Lookup{bindings_[i].term, i};
  }
  return std::nullopt;
}

bool Development::binds(const std::string& x) const {
  for (const auto& b : bindings_)
    if (b.var == x) return true;
  return false;
}

bool Development::subsequence(const Development& a, const Development& b) {
  std::size_t i = 0;
  for (const auto& bb : b.bindings()) {
    if (i == a.length()) break;
    const auto& ab = a.bindings()[i];
    if (ab.var == bb.var && term_equal(ab.term, bb.term)) ++i;
  }
  return i == a.length();
}

bool dev_equal(const Development& a, const Development& b) {
  if (a.length() != b.length() || a.hash() != b.hash()) return false;
  for (std::size_t i = 0; i < a.length(); ++i) {
    if (a.bindings()[i].var != b.bindings()[i].var) return false;
    if (!term_equal(a.bindings()[i].term, b.bindings()[i].term)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

void collect_symbols(const Term& t, FnSet& out) {
  if (t->kind != TermKind::App) return;
  out.insert(t->fn);
  for (const auto& a : t->args) collect_symbols(a, out);
}

namespace {

void base_closure(const Fn& f, FnSet& out) {
  if (!out.insert(f).second) return;
  switch (f->kind) {
    case FnKind::Eps:
    case FnKind::Succ:
    case FnKind::ConstN:
    case FnKind::Proj: break;
    case FnKind::Comp:
      base_closure(f->g, out);
      for (const auto& h : f->hs) base_closure(h, out);
      break;
    case FnKind::Rec:
      base_closure(f->g_eps, out);
      base_closure(f->g0, out);
      base_closure(f->g1, out);
      break;
  }
}

}  // namespace

FnSet base_symbols(const FnSet& symbols) {
  FnSet out;
  for (const auto& f : symbols) base_closure(f, out);
  return out;
}

FnSet base_symbols_of_term(const Term& t) {
  FnSet occ;
  collect_symbols(t, occ);
  return base_symbols(occ);
}

std::string FreshVarGen::fresh(const std::string& hint) {
  for (;;) {
    std::string candidate = hint + std::to_string(counter_++);
    if (used_.insert(candidate).second) return candidate;
  }
}

}  // namespace pvw
