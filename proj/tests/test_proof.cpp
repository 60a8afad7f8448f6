#include <doctest.h>

#include <functional>

#include "gen.hpp"
#include "pvw/proof.hpp"
#include "pvw/stdlib.hpp"

using namespace pvw;

namespace {

Equation canonical_constn2() {
  return Equation{app(FunctionDef::const_n(2), {var("x1"), var("x2")}), eps_term()};
}

}  // namespace

TEST_CASE("axiom schemas") {
  Equation e = axiom_schema(FunctionDef::const_n(2), AxiomCase::ConstNCase);
  CHECK(eq_equal(e, canonical_constn2()));

  Equation p = axiom_schema(FunctionDef::proj(3, 2), AxiomCase::ProjCase);
  CHECK(term_equal(p.rhs, var("x2")));

  Fn z1 = zeroize_fn(1);
  Equation s1 = axiom_schema(z1, AxiomCase::S1Case);
  // zeroize1(s1 x) = step(x, zeroize1(x))
  Term x = var("x");
  CHECK(term_equal(s1.lhs, app(z1, {succ_term(1, x)})));
  CHECK(term_equal(s1.rhs, app(z1->g1, {x, app(z1, {x})})));

  CHECK_THROWS_AS(axiom_schema(FunctionDef::succ(0), AxiomCase::S0Case),
                  std::invalid_argument);
  CHECK_THROWS_AS(axiom_schema(FunctionDef::eps(), AxiomCase::EpsCase),
                  std::invalid_argument);
  CHECK_THROWS_AS(axiom_schema(z1, AxiomCase::CompCase), std::invalid_argument);
}

TEST_CASE("schema matching handles clashing instance variables") {
  // proj(2,1)(x2, eps) = x2 is a legitimate instance even though x2 is also
  // a canonical schema name
  Equation schema = axiom_schema(FunctionDef::proj(2, 1), AxiomCase::ProjCase);
  Equation inst{app(FunctionDef::proj(2, 1), {var("x2"), eps_term()}), var("x2")};
  CHECK(matches_schema(schema, inst));
  Equation bad{app(FunctionDef::proj(2, 1), {var("x2"), eps_term()}), eps_term()};
  CHECK_FALSE(matches_schema(schema, bad));
}

TEST_CASE("conclusions of the equality rules") {
  Proof id = ProofTree::identity(eps_term());
  CHECK(eq_equal(conclusion(id), {eps_term(), eps_term()}));
  CHECK(eq_equal(conclusion(ProofTree::symmetry(id)), {eps_term(), eps_term()}));

  Proof ax = ProofTree::axiom(FunctionDef::const_n(2), AxiomCase::ConstNCase,
                              canonical_constn2());
  Proof tr = ProofTree::transitivity(ax, ProofTree::identity(eps_term()));
  CHECK(eq_equal(conclusion(tr), {canonical_constn2().lhs, eps_term()}));

  Proof bad = ProofTree::transitivity(ProofTree::identity(eps_term()),
                                      ProofTree::identity(succ_term(1, eps_term())));
  CHECK_THROWS_AS(conclusion(bad), std::invalid_argument);

  Proof cong = ProofTree::congruence(FunctionDef::succ(0), {id});
  CHECK(eq_equal(conclusion(cong),
                 {succ_term(0, eps_term()), succ_term(0, eps_term())}));

  Proof sub = ProofTree::subst(ProofTree::identity(var("x")), succ_term(0, eps_term()), "x");
  CHECK(eq_equal(conclusion(sub),
                 {succ_term(0, eps_term()), succ_term(0, eps_term())}));
}

TEST_CASE("checker reports located violations") {
  Proof bad_inst = ProofTree::axiom(
      FunctionDef::const_n(2), AxiomCase::ConstNCase,
      Equation{app(FunctionDef::const_n(2), {var("x1"), var("x2")}), var("x1")});
  CheckResult r = check(bad_inst);
  CHECK_FALSE(r.ok);
  REQUIRE(r.violation);
  CHECK(r.violation->path == "root");

  Proof nested = ProofTree::symmetry(ProofTree::transitivity(
      ProofTree::identity(eps_term()), ProofTree::identity(succ_term(0, eps_term()))));
  CheckResult r2 = check(nested);
  CHECK_FALSE(r2.ok);
  CHECK(r2.violation->path == "root.sym");

  Proof vacuous = ProofTree::subst(ProofTree::identity(eps_term()), eps_term(), "z");
  CHECK(check(vacuous).ok);  // vacuous substitution concludes its premise

  Proof starry = ProofTree::identity(succ_term(0, star()));
  CHECK_FALSE(check(starry).ok);
}

TEST_CASE("congruence arity is enforced") {
  Proof p = ProofTree::congruence(FunctionDef::proj(2, 1),
                                  {ProofTree::identity(eps_term())});
  CHECK_FALSE(check(p).ok);
}

TEST_CASE("proof sizes") {
  Proof id = ProofTree::identity(eps_term());
  CHECK(proof_size(id) == 3);
  CHECK(proof_size(ProofTree::symmetry(id)) == 6);
  CHECK(proof_node_count(ProofTree::symmetry(id)) == 2);
}

TEST_CASE("proof size is strictly super-additive") {
  pvwtest::Gen g(211);
  for (int i = 0; i < 200; ++i) {
    Term t = g.random_term(2, {"x"}, false);
    Term u = g.random_term(2, {"x"}, false);
    Proof a = ProofTree::identity(t);
    Proof b = ProofTree::identity(u);
    Proof tr = ProofTree::transitivity(a, ProofTree::symmetry(
        ProofTree::transitivity(b, ProofTree::symmetry(b))));
    // composite proofs strictly dominate the sum over their children
    if (check(tr).ok) {
      CHECK(proof_size(tr) > proof_size(a));
    }
    Proof sym = ProofTree::symmetry(a);
    CHECK(proof_size(sym) > proof_size(a));
  }
}

TEST_CASE("substitution node satisfies the budget inequality") {
  pvwtest::Gen g(223);
  int done = 0;
  for (int i = 0; i < 700 && done < 500; ++i) {
    Term t = g.random_term(2, {"x", "y"}, false);
    Term u = g.random_term(2, {"x", "y"}, false);
    Proof base = g.coin() ? ProofTree::identity(t)
                          : ProofTree::transitivity(ProofTree::identity(t),
                                                    ProofTree::identity(t));
    Term r = g.random_term(2, {"y"}, false);
    Proof sub = ProofTree::subst(base, r, "x");
    CheckResult cr = check(sub);
    if (!cr.ok) continue;
    Equation e = conclusion(sub);
    CHECK(proof_size(sub) >= proof_size(base) + e.lhs->size + e.rhs->size);
    ++done;
  }
  CHECK(done == 500);
}

TEST_CASE("random proof trees never conclude eps = s1 eps") {
  pvwtest::Gen g(227);
  Term s1e = succ_term(1, eps_term());
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    // small random proof trees over the table symbols
    std::function<Proof(int)> gen = [&](int d) -> Proof {
      if (d <= 0 || g.coin(0.4)) {
        if (g.coin()) return ProofTree::identity(g.random_term(2, {"x"}, false));
        Fn f = g.stdlib_symbol();
        std::vector<AxiomCase> cases;
        switch (f->kind) {
          case FnKind::ConstN: cases = {AxiomCase::ConstNCase}; break;
          case FnKind::Proj: cases = {AxiomCase::ProjCase}; break;
          case FnKind::Comp: cases = {AxiomCase::CompCase}; break;
          case FnKind::Rec:
            cases = {AxiomCase::EpsCase, AxiomCase::S0Case, AxiomCase::S1Case};
            break;
          default: return ProofTree::identity(eps_term());
        }
        AxiomCase c = cases[static_cast<std::size_t>(g.pick(0, (long long)cases.size() - 1))];
        Equation schema = axiom_schema(f, c);
        // instantiate the canonical variables randomly
        Equation inst = schema;
        for (const auto& v : free_vars(schema.lhs)) {
          Term t = g.random_term(1, {}, false);
          inst = Equation{substitute(inst.lhs, t, v), substitute(inst.rhs, t, v)};
        }
        return ProofTree::axiom(f, c, inst);
      }
      switch (g.pick(0, 3)) {
        case 0: return ProofTree::symmetry(gen(d - 1));
        case 1: {
          Proof a = gen(d - 1);
          return ProofTree::transitivity(a, ProofTree::symmetry(a));
        }
        case 2: {
          Fn s = FunctionDef::succ(static_cast<int>(g.pick(0, 1)));
          return ProofTree::congruence(s, {gen(d - 1)});
        }
        default:
          return ProofTree::subst(gen(d - 1), g.random_term(1, {}, false), "x");
      }
    };
    Proof p = gen(3);
    CheckResult r = check(p);
    if (!r.ok) continue;
    ++checked;
    bool left = term_equal(r.conclusion->lhs, eps_term()) &&
                term_equal(r.conclusion->rhs, s1e);
    bool right = term_equal(r.conclusion->lhs, s1e) &&
                 term_equal(r.conclusion->rhs, eps_term());
    CHECK_FALSE(left);
    CHECK_FALSE(right);
  }
  CHECK(checked > 50000);
}

TEST_CASE("mutations of a checking proof are rejected") {
  // a valid chain: zeroize1(s1 eps) = step(eps, zeroize1(eps)) and onward
  Fn z1 = zeroize_fn(1);
  Term e = eps_term();
  Equation a1{app(z1, {succ_term(1, e)}), app(z1->g1, {e, app(z1, {e})})};
  Proof ax = ProofTree::axiom(z1, AxiomCase::S1Case, a1);
  Proof good = ProofTree::transitivity(
      ProofTree::identity(app(z1, {succ_term(1, e)})), ax);
  REQUIRE(check(good).ok);

  // swapped transitivity children break the middle-term condition
  Proof m1 = ProofTree::transitivity(ax, ProofTree::identity(app(z1, {succ_term(1, e)})));
  CHECK_FALSE(check(m1).ok);
  // wrong axiom case
  Proof m2 = ProofTree::axiom(z1, AxiomCase::S0Case, a1);
  CHECK_FALSE(check(m2).ok);
  // tampered instance right side
  Equation bad{a1.lhs, succ_term(0, a1.rhs)};
  Proof m3 = ProofTree::axiom(z1, AxiomCase::S1Case, bad);
  CHECK_FALSE(check(m3).ok);
  // congruence under the wrong head symbol
  Proof m4 = ProofTree::congruence(discard_fn(), {good, good});
  CHECK_FALSE(check(m4).ok);
}
