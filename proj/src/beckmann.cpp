#include "pvw/beckmann.hpp"

#include "pvw/stdlib.hpp"

namespace pvw {

namespace {

Proof chain_proof(int k, const Term& n) {
  Fn g = zeroize_fn(k);
  Fn h = discard_fn();
  Fn step_k = g->g1;                                    // s0^k . proj(2,2)
  Fn step_prev = step_k->hs[0];                         // s0^(k-1) . proj(2,2)
  Term gn = app(g, {n});
  Term g_s1n = app(g, {succ_term(1, n)});

  // g(s1 n) = step_k(n, g(n))
  Proof a = ProofTree::axiom(g, AxiomCase::S1Case,
                             Equation{g_s1n, app(step_k, {n, gn})});
  // step_k(n, g(n)) = s0(step_{k-1}(n, g(n)))
  Term w = app(step_prev, {n, gn});
  Proof b = ProofTree::axiom(step_k, AxiomCase::CompCase,
                             Equation{app(step_k, {n, gn}), succ_term(0, w)});
  Proof c = ProofTree::transitivity(a, b);
  // discard(g(s1 n)) = discard(s0 w)
  Proof d = ProofTree::congruence(h, {c});
  // discard(s0 w) = eps^2(w, discard(w))
  Term hw = app(h, {w});
  Proof e = ProofTree::axiom(h, AxiomCase::S0Case,
                             Equation{app(h, {succ_term(0, w)}), app(FunctionDef::const_n(2), {w, hw})});
  // eps^2(w, discard(w)) = eps
  Proof f = ProofTree::axiom(FunctionDef::const_n(2), AxiomCase::ConstNCase,
                             Equation{app(FunctionDef::const_n(2), {w, hw}), eps_term()});
  return ProofTree::transitivity(ProofTree::transitivity(d, e), f);
}

}  // namespace

BeckmannFixture beckmann_fixture(int k, Count ell) {
  BeckmannFixture fx;
  fx.k = k;
  fx.ell = ell;
  fx.n = numeral_of(BitString(static_cast<std::size_t>(ell), '0'));
  fx.term = app(discard_fn(), {app(zeroize_fn(k), {succ_term(1, fx.n)})});
  fx.env = Development{};
  fx.approx = approx_eval(fx.term, fx.env, Demand::Full());
  fx.exact = exact_eval(fx.term, fx.env);
  fx.chain = chain_proof(k, fx.n);
  return fx;
}

std::vector<BeckmannRow> beckmann_table(int k, const std::vector<Count>& lengths) {
  std::vector<BeckmannRow> rows;
  for (Count ell : lengths) {
    BeckmannFixture fx = beckmann_fixture(k, ell);
    BeckmannRow row;
    row.ell = ell;
    row.approx_nodes = static_cast<Count>(fx.approx.nodes.size());
    row.exact_nodes = static_cast<Count>(fx.exact.nodes.size());
    row.proof_nodes = proof_node_count(fx.chain);
    row.proof_size = proof_size(fx.chain);
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json beckmann_table_json(int k, const std::vector<BeckmannRow>& rows) {
  nlohmann::json out{{"k", k}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) {
    out["rows"].push_back({{"length", r.ell},
                           {"approx_nodes", r.approx_nodes},
                           {"exact_nodes", r.exact_nodes},
                           {"proof_nodes", r.proof_nodes},
                           {"proof_size", r.proof_size}});
  }
  return out;
}

}  // namespace pvw
