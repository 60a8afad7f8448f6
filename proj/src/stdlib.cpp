#include "pvw/stdlib.hpp"

#include <stdexcept>

namespace pvw {

Fn identity_fn() { return FunctionDef::proj(1, 1); }

Fn zeroize_fn(int k) {
  if (k < 1) throw std::invalid_argument("zeroize_fn: k must be >= 1");
  // step(x, y) = s0^k y, built as comp(s0, ... comp(s0, proj(2,2)) ...)
  Fn step = FunctionDef::proj(2, 2);
  for (int i = 0; i < k; ++i) step = FunctionDef::comp(FunctionDef::succ(0), {step});
  return FunctionDef::rec(FunctionDef::eps(), step, step);
}

Fn discard_fn() {
  Fn e2 = FunctionDef::const_n(2);
  return FunctionDef::rec(FunctionDef::eps(), e2, e2);
}

const std::map<std::string, Fn>& stdlib_table() {
  static const std::map<std::string, Fn> table = {
      {"identity", identity_fn()}, {"zeroize1", zeroize_fn(1)},
      {"zeroize2", zeroize_fn(2)}, {"zeroize3", zeroize_fn(3)},
      {"discard", discard_fn()},
  };
  return table;
}

}  // namespace pvw
