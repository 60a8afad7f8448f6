#pragma once

// Function-symbol algebra, PV(*) terms, size measures, the approximation
// relation, substitution and developments.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace pvw {

using Count = long long;

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// ---------------------------------------------------------------------------
// Function symbols (Cobham definition trees)

enum class FnKind { Eps, Succ, ConstN, Proj, Comp, Rec };

class FunctionDef;
using Fn = std::shared_ptr<const FunctionDef>;

class FunctionDef {
 public:
  FnKind kind;
  int bit = -1;    // Succ
  int n = -1;      // ConstN, Proj
  int index = -1;  // Proj
  Fn g;            // Comp
  std::vector<Fn> hs;
  Fn g_eps, g0, g1;  // Rec

  Count arity = 0;
  Count symbol_size = 0;
  std::size_t hash = 0;

  static Fn eps();
  static Fn succ(int bit);
  static Fn const_n(int n);
  static Fn proj(int n, int i);
  static Fn comp(Fn g, std::vector<Fn> hs);
  static Fn rec(Fn g_eps, Fn g0, Fn g1);
};

bool fn_equal(const Fn& a, const Fn& b);
std::string fn_brief(const Fn& f);  // short diagnostic form

struct FnHash {
  std::size_t operator()(const Fn& f) const { return f->hash; }
};
struct FnEq {
  bool operator()(const Fn& a, const Fn& b) const { return fn_equal(a, b); }
};
using FnSet = std::unordered_set<Fn, FnHash, FnEq>;

// ---------------------------------------------------------------------------
// PV(*) terms

enum class TermKind { Var, Star, App };

class Term_;
using Term = std::shared_ptr<const Term_>;

class Term_ {
 public:
  TermKind kind;
  std::string name;        // Var
  Fn fn;                   // App
  std::vector<Term> args;  // App, length = arity(fn)

  Count size = 0;
  std::size_t hash = 0;
  bool is_g_numeral = false;
  bool star_free = true;
};

Term var(const std::string& name);
Term star();
Term app(Fn f, std::vector<Term> args);
Term eps_term();
Term succ_term(int bit, Term t);

bool term_equal(const Term& a, const Term& b);
Count term_size(const Term& t);
bool is_g_numeral(const Term& t);
bool is_star(const Term& t);
bool is_eps(const Term& t);
// s_i-headed: returns bit and tail if the term is an application of a successor.
std::optional<std::pair<int, Term>> succ_split(const Term& t);

std::set<std::string> free_vars(const Term& t);
Count occurrences(const std::string& x, const Term& t);
Term substitute(const Term& t, const Term& u, const std::string& x);

// r <=_approx t : t is obtained from r by replacing subterms with *.
bool approx_leq(const Term& r, const Term& t);

// Keep the first d head constructors of a g-numeral; deeper structure -> *.
Term truncate_numeral(const Term& v, Count d);
Count numeral_depth(const Term& v);  // successors + 1 for the eps leaf, 0 for *

struct TermHash {
  std::size_t operator()(const Term& t) const { return t->hash; }
};
struct TermEq {
  bool operator()(const Term& a, const Term& b) const { return term_equal(a, b); }
};

// ---------------------------------------------------------------------------
// Developments

struct Binding {
  std::string var;
  Term term;
};

class Development {
 public:
  Development() = default;
  explicit Development(std::vector<Binding> bindings);

  const std::vector<Binding>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t length() const { return bindings_.size(); }
  Count size() const { return size_; }  // sum of (||t_i|| + 4)
  std::size_t hash() const { return hash_; }

  // Suffix starting after position k (0-based binding index).
  Development suffix_after(std::size_t k) const;
  Development prepend(const std::string& x, const Term& t) const;

  // Binding of x and its position; the strict suffix after it is reached
  // via suffix_after(position).
  struct Lookup {
    Term term;
    std::size_t position;
  };
  std::optional<Lookup> lookup(const std::string& x) const;
  bool binds(const std::string& x) const;

  // a is an order-preserving (not necessarily contiguous) subsequence of b.
  static bool subsequence(const Development& a, const Development& b);

 private:
  std::vector<Binding> bindings_;
  Count size_ = 0;
  std::size_t hash_ = 0xd1e40;
};

bool dev_equal(const Development& a, const Development& b);

// ---------------------------------------------------------------------------
// Base(.)  -- transitive closure of Cobham definition sub-trees

void collect_symbols(const Term& t, FnSet& out);  // all symbols occurring in t
FnSet base_symbols(const FnSet& symbols);
FnSet base_symbols_of_term(const Term& t);

// Variable names occurring anywhere in a term (as Var) -- used for freshness.
void collect_var_names(const Term& t, std::set<std::string>& out);

class FreshVarGen {
 public:
  explicit FreshVarGen(std::set<std::string> used) : used_(std::move(used)) {}
  std::string fresh(const std::string& hint = "v");

 private:
  std::set<std::string> used_;
  Count counter_ = 0;
};

}  // namespace pvw
