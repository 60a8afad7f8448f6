#include <doctest.h>

#include "gen.hpp"
#include "pvw/comp.hpp"
#include "pvw/eval.hpp"
#include "pvw/stdlib.hpp"

using namespace pvw;

namespace {

CompDag epsn_dag() {
  CompDag d;
  d.nodes.push_back({{}, RuleTag::eps_n(), {eps_term(), Development{}, eps_term()}});
  return d;
}

}  // namespace

TEST_CASE("validate accepts the single eps-n node") {
  CHECK_FALSE(validate(epsn_dag()));
}

TEST_CASE("validate rejects eps without its premise") {
  CompDag d;
  d.nodes.push_back({{},
                     RuleTag::eps_rule(),
                     {eps_term(), Development({{"x", eps_term()}}), eps_term()}});
  auto v = validate(d);
  REQUIRE(v);
  CHECK(v->node == 0);
}

TEST_CASE("validate accepts a star node over any statement") {
  CompDag d;
  Term t = app(discard_fn(), {app(zeroize_fn(1), {succ_term(1, eps_term())})});
  d.nodes.push_back({{}, RuleTag::star_rule(),
                     {t, Development({{"y", eps_term()}}), star()}});
  CHECK_FALSE(validate(d));
}

TEST_CASE("validate rejects empty computations and misordered premises") {
  CHECK(validate(CompDag{}));
  CompDag d = epsn_dag();
  d.nodes[0].premises.push_back(0);
  CHECK(validate(d));
}

TEST_CASE("metrics of the one-node dag") {
  Metrics m = metrics(epsn_dag());
  CHECK(m.node_count == 1);
  CHECK(m.M == 1);
  CHECK(m.T == 1);
  CHECK(m.value_max == 1);
}

TEST_CASE("metrics of a numeral computation under an environment") {
  Term v = succ_term(1, succ_term(0, eps_term()));
  CompDag d = numeral_comp(v, Development({{"x", eps_term()}}));
  CHECK_FALSE(validate(d));
  CHECK(metrics(d).node_count == 6);  // 2l + 2 with l = 2
}

TEST_CASE("metrics of the exact zeroize computation are reproducible") {
  Term t = app(zeroize_fn(1), {succ_term(1, eps_term())});
  CompDag a = exact_eval(t, Development{});
  CompDag b = exact_eval(t, Development{});
  CHECK(metrics(a).node_count == metrics(b).node_count);
  CHECK(metrics(a).node_count == 6);  // frozen from the evaluator oracle
  CHECK(metrics(a).M == metrics(b).M);
}

TEST_CASE("conclusions") {
  CompDag d = epsn_dag();
  CHECK(d.conclusions().size() == 1);

  // eps-n feeding an eps node: only the eps node concludes
  DagBuilder b(epsn_dag());
  b.numeral_node(eps_term(), Development({{"x", eps_term()}}));
  CompDag d2 = b.take();
  auto cs = d2.conclusions();
  REQUIRE(cs.size() == 1);
  CHECK_FALSE(cs[0].env.empty());

  // one node feeding two others concludes in the two others
  CompDag d3 = epsn_dag();
  d3.nodes.push_back({{0}, RuleTag::succ_n(0),
                      {succ_term(0, eps_term()), Development{}, succ_term(0, eps_term())}});
  d3.nodes.push_back({{0}, RuleTag::succ_n(1),
                      {succ_term(1, eps_term()), Development{}, succ_term(1, eps_term())}});
  CHECK_FALSE(validate(d3));
  CHECK(d3.conclusions().size() == 2);
}

TEST_CASE("make_conclusion duplicates a used inference") {
  DagBuilder b(epsn_dag());
  b.numeral_node(eps_term(), Development({{"x", eps_term()}}));
  CompDag d = b.take();  // eps-n used by eps
  CHECK(d.nodes.size() == 2);

  CompDag d2 = make_conclusion(d, 0);
  CHECK_FALSE(validate(d2));
  CHECK(d2.nodes.size() == 3);
  CHECK(d2.concludes(d.nodes[0].stmt));

  // already a conclusion: unchanged
  CompDag d3 = make_conclusion(d2, 0);
  CHECK(d3.nodes.size() == d2.nodes.size());

  CHECK_THROWS_AS(make_conclusion(d, 99), std::invalid_argument);
}

TEST_CASE("make_conclusion adds at most one node and preserves M") {
  pvwtest::Gen g(23);
  for (int i = 0; i < 100; ++i) {
    Term t = g.random_closed_term(3);
    CompDag d = approx_eval(t, Development{}, g.random_demand());
    std::size_t idx = static_cast<std::size_t>(g.pick(0, (long long)d.nodes.size() - 1));
    CompDag d2 = make_conclusion(d, idx);
    CHECK_FALSE(validate(d2));
    CHECK(d2.nodes.size() <= d.nodes.size() + 1);
    CHECK(metrics(d2).M == metrics(d).M);
    CHECK(d2.concludes(d.nodes[idx].stmt));
  }
}

TEST_CASE("drop_conclusion") {
  CompDag d = epsn_dag();
  CHECK_THROWS_AS(drop_conclusion(d, d.nodes[0].stmt), std::invalid_argument);
  CHECK_THROWS_AS(drop_conclusion(d, {star(), Development{}, star()}),
                  std::invalid_argument);

  // make_conclusion then drop restores the original conclusion set
  DagBuilder b(epsn_dag());
  b.numeral_node(eps_term(), Development({{"x", eps_term()}}));
  CompDag base = b.take();
  CompDag grown = make_conclusion(base, 0);
  CompDag back = drop_conclusion(grown, base.nodes[0].stmt);
  CHECK_FALSE(validate(back));
  CHECK(back.conclusions().size() == base.conclusions().size());
  CHECK(back.nodes.size() <= base.nodes.size() + 1);

  // dropping a conclusion retains premises shared with other conclusions
  CompDag d3 = epsn_dag();
  d3.nodes.push_back({{0}, RuleTag::succ_n(0),
                      {succ_term(0, eps_term()), Development{}, succ_term(0, eps_term())}});
  d3.nodes.push_back({{0}, RuleTag::succ_n(1),
                      {succ_term(1, eps_term()), Development{}, succ_term(1, eps_term())}});
  CompDag d4 = drop_conclusion(d3, d3.nodes[2].stmt);
  CHECK(d4.nodes.size() == 2);
  CHECK_FALSE(validate(d4));
}

TEST_CASE("structural audits pass on evaluator output") {
  pvwtest::Gen g(31);
  for (int i = 0; i < 150; ++i) {
    Term t = g.random_closed_term(4);
    CompDag d = exact_eval(t, Development{});
    CHECK_FALSE(validate(d));
    StructuralAudit a = audit_structural(d);
    CHECK(a.all());
  }
}

TEST_CASE("structural audit flags a bogus eps value") {
  CompDag d;
  d.nodes.push_back({{}, RuleTag::eps_n(),
                     {eps_term(), Development{}, succ_term(0, star())}});
  CHECK(validate(d));  // no rule derives it either
  StructuralAudit a = audit_structural(d);
  CHECK_FALSE(a.succ_values);
}

TEST_CASE("M-bound audit") {
  MBoundAudit a = audit_M_bound(epsn_dag(), 1);
  CHECK(a.holds);
  CHECK(a.minimal_c_num == 1);
  CHECK(a.minimal_c_den == 9);

  pvwtest::Gen g(37);
  double max_c = 0;
  for (int i = 0; i < 100; ++i) {
    Term t = g.random_closed_term(4);
    CompDag d = exact_eval(t, Development{});
    MBoundAudit mb = audit_M_bound(d, 8);
    CHECK(mb.holds);
    max_c = std::max(max_c, mb.minimal_c);
  }
  CHECK(max_c <= 8.0);
}

TEST_CASE("values never exceed three times the node count") {
  pvwtest::Gen g(41);
  for (int i = 0; i < 100; ++i) {
    Term t = g.random_closed_term(4);
    CompDag d = exact_eval(t, Development{});
    Count n = static_cast<Count>(d.nodes.size());
    for (const auto& node : d.nodes) CHECK(node.stmt.value->size <= 3 * n);
  }
}

TEST_CASE("no validated computation derives s1 eps to eps") {
  // consistency witness: the statement <s1 eps, ()> |_ eps is underivable
  CompDag d;
  d.nodes.push_back({{}, RuleTag::star_rule(),
                     {succ_term(1, eps_term()), Development{}, eps_term()}});
  CHECK(validate(d));
  CompDag d2 = epsn_dag();
  d2.nodes.push_back({{0}, RuleTag::succ_n(1),
                      {succ_term(1, eps_term()), Development{}, eps_term()}});
  CHECK(validate(d2));
}

TEST_CASE("metrics are deterministic across traversals") {
  pvwtest::Gen g(43);
  Term t = g.random_closed_term(4);
  CompDag d = exact_eval(t, Development{});
  Metrics a = metrics(d);
  Metrics b = metrics(d);
  CHECK(a.node_count == b.node_count);
  CHECK(a.M == b.M);
  CHECK(a.T == b.T);
  CHECK(a.value_max == b.value_max);
}
