#pragma once

// Counterexample-shaped fixtures: discard(zeroize_k(s1 n)) admits a
// constant-size approximate computation and a constant-node-count equational
// proof of being eps, while its exact computation grows with ||n||.

#include <json.hpp>

#include "pvw/eval.hpp"
#include "pvw/proof.hpp"

namespace pvw {

struct BeckmannFixture {
  int k = 1;
  Count ell = 1;     // numeral length of n
  Term n;            // the numeral
  Term term;         // discard(zeroize_k(s1 n))
  Development env;   // empty
  CompDag approx;    // lazy evaluation, size independent of ell
  CompDag exact;     // call-by-value evaluation
  Proof chain;       // proof of term = eps
};

BeckmannFixture beckmann_fixture(int k, Count ell);

struct BeckmannRow {
  Count ell = 0;
  Count approx_nodes = 0;
  Count exact_nodes = 0;
  Count proof_nodes = 0;
  Count proof_size = 0;
};

std::vector<BeckmannRow> beckmann_table(int k, const std::vector<Count>& lengths);
nlohmann::json beckmann_table_json(int k, const std::vector<BeckmannRow>& rows);

}  // namespace pvw
