#include <doctest.h>

#include <functional>

#include "gen.hpp"
#include "pvw/eval.hpp"
#include "pvw/stdlib.hpp"

using namespace pvw;

TEST_CASE("denotation of the primitives") {
  CHECK(denote(FunctionDef::proj(2, 2), {"01", "1"}) == "1");
  CHECK(denote(zeroize_fn(1), {"11"}) == "00");
  CHECK(denote(discard_fn(), {"0110"}) == "");
  CHECK(denote(FunctionDef::succ(1), {"0"}) == "10");
  CHECK(denote(FunctionDef::const_n(3), {"1", "0", "11"}) == "");
  CHECK_THROWS_AS(denote(discard_fn(), {"0", "1"}), EvalError);
}

TEST_CASE("numeral round trip") {
  CHECK(bits_of(numeral_of("011")) == "011");
  CHECK(bits_of(eps_term()) == "");
  CHECK(term_equal(numeral_of("01"),
                   succ_term(0, succ_term(1, eps_term()))));
}

TEST_CASE("exact evaluation matches the examples") {
  CompDag d = exact_eval(eps_term(), Development{});
  CHECK(d.nodes.size() == 1);
  CHECK(d.nodes[0].rule.kind == RuleTag::EpsN);

  Term p = app(FunctionDef::proj(2, 1), {succ_term(0, eps_term()), eps_term()});
  CompDag d2 = exact_eval(p, Development{});
  CHECK_FALSE(validate(d2));
  CHECK(term_equal(d2.conclusions()[0].value, succ_term(0, eps_term())));

  Term z = app(zeroize_fn(1), {succ_term(1, eps_term())});
  CompDag d3 = exact_eval(z, Development{});
  CHECK(term_equal(d3.conclusions()[0].value, succ_term(0, eps_term())));
}

TEST_CASE("exact evaluation rejects stars and unbound variables") {
  CHECK_THROWS_AS(exact_eval(star(), Development{}), EvalError);
  CHECK_THROWS_AS(exact_eval(succ_term(0, star()), Development{}), EvalError);
  CHECK_THROWS_AS(exact_eval(var("x"), Development{}), EvalError);
  CHECK_THROWS_AS(
      exact_eval(var("x"), Development({{"x", var("y")}})), EvalError);
}

TEST_CASE("oracle equivalence on random closed terms") {
  pvwtest::Gen g(101);
  for (int i = 0; i < 400; ++i) {
    Term t = g.random_closed_term(5);
    CompDag d = exact_eval(t, Development{});
    REQUIRE_FALSE(validate(d));
    auto concl = d.conclusions();
    REQUIRE(concl.size() == 1);
    // brute-force denotational oracle, computed independently of the dag
    std::function<BitString(const Term&)> ev = [&](const Term& u) -> BitString {
      if (u->kind != TermKind::App) throw EvalError("open");
      std::vector<BitString> args;
      for (const auto& a : u->args) args.push_back(ev(a));
      return denote(u->fn, args);
    };
    CHECK(bits_of(concl[0].value) == ev(t));
  }
}

TEST_CASE("numeral computations hit the exact node counts") {
  pvwtest::Gen g(103);
  Development rho({{"x", eps_term()}});
  for (int i = 0; i < 100; ++i) {
    Term v = g.random_numeral(8, g.coin());
    Count l = 0;
    for (Term t = v; succ_split(t); t = succ_split(t)->second) ++l;
    CompDag empty_env = numeral_comp(v, Development{});
    CHECK_FALSE(validate(empty_env));
    CHECK(static_cast<Count>(empty_env.nodes.size()) == (is_star(v) ? 1 : l + 1));
    CHECK(stmt_equal(empty_env.conclusions()[0], {v, Development{}, v}));

    CompDag with_env = numeral_comp(v, rho);
    CHECK_FALSE(validate(with_env));
    CHECK(static_cast<Count>(with_env.nodes.size()) == (is_star(v) ? 1 : 2 * l + 2));
    CHECK(stmt_equal(with_env.conclusions()[0], {v, rho, v}));
  }
}

TEST_CASE("extend_succ on the one-node dag") {
  CompDag d = exact_eval(eps_term(), Development{});
  Statement s{eps_term(), Development{}, eps_term()};
  CompDag d2 = extend_succ(d, s, 0);
  CHECK_FALSE(validate(d2));
  CHECK(d2.nodes.size() == d.nodes.size() + 1);
  CHECK(d2.concludes({succ_term(0, eps_term()), Development{}, succ_term(0, eps_term())}));
}

TEST_CASE("extend_succ under an environment adds two nodes") {
  Development rho({{"x", eps_term()}});
  CompDag d = numeral_comp(eps_term(), rho);
  Statement s{eps_term(), rho, eps_term()};
  CompDag d2 = extend_succ(d, s, 1);
  CHECK_FALSE(validate(d2));
  CHECK(d2.nodes.size() == d.nodes.size() + 2);
  CHECK(d2.concludes({succ_term(1, eps_term()), rho, succ_term(1, eps_term())}));
  CHECK_THROWS_AS(extend_succ(d, {star(), rho, star()}, 0), EvalError);
}

TEST_CASE("iterated extend_succ agrees with numeral_comp node counts") {
  pvwtest::Gen g(107);
  for (int trial = 0; trial < 20; ++trial) {
    Development rho = g.coin() ? Development({{"x", eps_term()}}) : Development{};
    Count l = g.pick(1, 6);
    std::vector<int> bits;
    for (Count i = 0; i < l; ++i) bits.push_back(static_cast<int>(g.pick(0, 1)));
    CompDag d = numeral_comp(eps_term(), rho);
    Statement s{eps_term(), rho, eps_term()};
    for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
      d = extend_succ(d, s, *it);
      s = Statement{succ_term(*it, s.main), rho, succ_term(*it, s.value)};
      CHECK(d.concludes(s));
    }
    Term v = s.main;
    CompDag direct = numeral_comp(v, rho);
    CHECK(d.nodes.size() == direct.nodes.size());
    CHECK_FALSE(validate(d));
  }
}

TEST_CASE("repeated statements share one node in exact evaluation") {
  // proj(2,1) applied to two copies of the same subterm: the argument
  // statements coincide and must be derived once
  Term t = app(zeroize_fn(1), {succ_term(1, eps_term())});
  Term both = app(FunctionDef::proj(2, 1), {t, t});
  CompDag d = exact_eval(both, Development{});
  CHECK_FALSE(validate(d));
  int occurrences = 0;
  for (const auto& n : d.nodes)
    if (term_equal(n.stmt.main, t)) ++occurrences;
  CHECK(occurrences == 1);
}

TEST_CASE("approximate evaluation at demand zero is a single star node") {
  pvwtest::Gen g(109);
  for (int i = 0; i < 50; ++i) {
    Term t = g.random_term(3, {"x"}, true);
    Development rho({{"x", eps_term()}});
    CompDag d = approx_eval(t, rho, Demand::at(0));
    CHECK(d.nodes.size() == 1);
    CHECK(d.nodes[0].rule.kind == RuleTag::Star);
    CHECK(is_star(d.conclusions()[0].value));
  }
}

TEST_CASE("approximate evaluation at demand one reveals one constructor") {
  Term z = app(zeroize_fn(1), {succ_term(1, eps_term())});
  CompDag d = approx_eval(z, Development{}, Demand::at(1));
  CHECK_FALSE(validate(d));
  CHECK(term_equal(d.conclusions()[0].value, succ_term(0, star())));
}

TEST_CASE("full-demand approximation agrees with exact evaluation") {
  pvwtest::Gen g(113);
  for (int i = 0; i < 150; ++i) {
    Term t = g.random_closed_term(4);
    CompDag ex = exact_eval(t, Development{});
    CompDag ap = approx_eval(t, Development{}, Demand::Full());
    CHECK_FALSE(validate(ap));
    CHECK(term_equal(ex.conclusions()[0].value, ap.conclusions()[0].value));
  }
}

TEST_CASE("demand soundness and monotonicity") {
  pvwtest::Gen g(127);
  for (int i = 0; i < 100; ++i) {
    Term t = g.random_closed_term(4);
    Term exact = exact_eval(t, Development{}).conclusions()[0].value;
    Term prev;
    std::size_t prev_nodes = 0;
    for (Count d = 0; d <= 6; ++d) {
      CompDag dag = approx_eval(t, Development{}, Demand::at(d));
      REQUIRE_FALSE(validate(dag));
      Term v = dag.conclusions()[0].value;
      CHECK(approx_leq(exact, v));  // exact value below every approximation
      if (prev) CHECK(approx_leq(v, prev));  // deeper demand refines
      CHECK(dag.nodes.size() >= prev_nodes);  // node count nondecreasing in d
      prev = v;
      prev_nodes = dag.nodes.size();
    }
  }
}

TEST_CASE("every evaluator output validates and passes the audits") {
  pvwtest::Gen g(131);
  for (int i = 0; i < 120; ++i) {
    std::vector<std::string> vars = g.coin() ? std::vector<std::string>{"x"}
                                             : std::vector<std::string>{};
    Term t = g.random_term(4, vars, false);
    Development rho = g.random_env(vars);
    CompDag d = approx_eval(t, rho, g.random_demand());
    CHECK_FALSE(validate(d));
    CHECK(audit_structural(d).all());
  }
}

TEST_CASE("the constant-size counterexample computation") {
  Development rho;
  for (Count ell : {1, 2, 5, 8}) {
    Term n = numeral_of(BitString(static_cast<std::size_t>(ell), '0'));
    Term t = app(discard_fn(), {app(zeroize_fn(1), {succ_term(1, n)})});
    CompDag d = approx_eval(t, rho, Demand::Full());
    CHECK_FALSE(validate(d));
    CHECK(d.nodes.size() == 10);  // independent of the numeral length
    CHECK(term_equal(d.conclusions()[0].value, eps_term()));
  }
}
