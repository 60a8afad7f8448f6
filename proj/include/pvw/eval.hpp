#pragma once

// Ground-truth denotational interpreter, exact computation-DAG construction,
// numeral-computation builders, and the demand-driven approximate evaluator.

#include <stdexcept>
#include <string>

#include "pvw/comp.hpp"
#include "pvw/term.hpp"

namespace pvw {

// Finite bit sequence; index 0 is the outermost (front) successor.
using BitString = std::string;

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Cobham semantics of a function symbol on bit strings.
BitString denote(const Fn& f, const std::vector<BitString>& args);

// Star-free closed numeral <-> bit string.
Term numeral_of(const BitString& bits);
BitString bits_of(const Term& numeral);

// Head-constructor demand: either a depth or full precision.
struct Demand {
  bool full = false;
  Count d = 0;
  static Demand Full() { return {true, 0}; }
  static Demand at(Count n) { return {false, n < 0 ? 0 : n}; }
  bool zero() const { return !full && d <= 0; }
  Demand pred() const { return full ? *this : at(d - 1); }
  Demand succ() const { return full ? *this : at(d + 1); }
};

// Exact call-by-value evaluation; t and rho must be star-free and
// transitively grounded. Single conclusion <t, rho> |_ v with v exact.
CompDag exact_eval(const Term& t, const Development& rho);

// Demand-driven evaluation; single conclusion <t, rho> |_ v with v at the
// requested precision (d = Full reproduces the exact value).
CompDag approx_eval(const Term& t, const Development& rho, Demand d);

// Derivation of <v, rho> |_ v for a g-numeral v: l+1 nodes when rho is
// empty, 2l+2 otherwise (l = number of successors).
CompDag numeral_comp(const Term& v, const Development& rho);

// Extends a computation containing s = <t, rho> |_ v with a derivation of
// <s_i t, rho> |_ s_i v, adding at most two inferences (three when v is *
// and no <*, ()> |_ * node is available for reuse).
CompDag extend_succ(const CompDag& dag, const Statement& s, int bit);

}  // namespace pvw
