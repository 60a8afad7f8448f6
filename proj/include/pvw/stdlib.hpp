#pragma once

// Named function-symbol table: identity, zeroize_k, discard, plus the
// eps-n / proj constructors.

#include <map>
#include <string>

#include "pvw/term.hpp"

namespace pvw {

// proj(1,1)
Fn identity_fn();

// g of the counterexample: g(eps) = eps, g(s_i x) = s0^k g(x).
Fn zeroize_fn(int k);

// h of the counterexample: h(eps) = eps, h(s_i x) = eps^2(x, h(x)).
Fn discard_fn();

// Named table; contains identity, zeroize1..zeroize3, discard.
const std::map<std::string, Fn>& stdlib_table();

}  // namespace pvw
