#include <doctest.h>

#include "gen.hpp"
#include "pvw/stdlib.hpp"
#include "pvw/term.hpp"

using namespace pvw;

namespace {

Term numeral_s1s0() { return succ_term(1, succ_term(0, eps_term())); }

}  // namespace

TEST_CASE("symbol sizes and arities") {
  CHECK(FunctionDef::eps()->symbol_size == 1);
  CHECK(FunctionDef::succ(0)->symbol_size == 1);
  CHECK(FunctionDef::const_n(2)->symbol_size == 3);
  CHECK(FunctionDef::proj(2, 1)->symbol_size == 3);
  Fn z1 = zeroize_fn(1);
  CHECK(z1->arity == 1);
  CHECK(discard_fn()->arity == 1);
  CHECK_THROWS_AS(FunctionDef::proj(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(FunctionDef::comp(FunctionDef::succ(0),
                                    {FunctionDef::proj(2, 1), FunctionDef::proj(2, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FunctionDef::rec(FunctionDef::eps(), FunctionDef::succ(0),
                                   FunctionDef::succ(1)),
                  std::invalid_argument);
}

TEST_CASE("arity bounded by symbol size on random definitions") {
  pvwtest::Gen g(2024);
  for (int i = 0; i < 500; ++i) {
    Fn f = g.random_fn(3);
    CHECK(f->arity <= f->symbol_size);
  }
}

TEST_CASE("term sizes") {
  CHECK(term_size(eps_term()) == 1);
  CHECK(term_size(numeral_s1s0()) == 7);  // 3l + 1 with l = 2
  Term t = app(FunctionDef::proj(2, 1), {var("x"), eps_term()});
  CHECK(term_size(t) == 8);
  CHECK(term_size(var("anything")) == 1);
  CHECK(term_size(star()) == 1);
}

TEST_CASE("numerals of l successors have size 3l + 1") {
  pvwtest::Gen g(7);
  for (int i = 0; i < 200; ++i) {
    Term v = g.random_numeral(10, false);
    Count l = numeral_depth(v) - 1;
    CHECK(term_size(v) == 3 * l + 1);
  }
}

TEST_CASE("free variables") {
  CHECK(free_vars(var("x")) == std::set<std::string>{"x"});
  CHECK(free_vars(eps_term()).empty());
  Term t = app(zeroize_fn(1), {succ_term(0, var("y"))});
  CHECK(free_vars(t) == std::set<std::string>{"y"});
}

TEST_CASE("substitution") {
  Term e = eps_term();
  CHECK(term_equal(substitute(var("x"), e, "x"), e));
  Term s0x = succ_term(0, var("x"));
  Term s1e = succ_term(1, e);
  CHECK(term_equal(substitute(s0x, s1e, "x"), succ_term(0, s1e)));
  CHECK(term_equal(substitute(var("y"), e, "x"), var("y")));
}

TEST_CASE("substitution size homomorphism") {
  pvwtest::Gen g(11);
  for (int i = 0; i < 300; ++i) {
    Term t = g.random_term(3, {"x", "y"}, true);
    Term u = g.random_term(2, {"y"}, true);
    Count occ = occurrences("x", t);
    Term r = substitute(t, u, "x");
    CHECK(term_size(r) == term_size(t) + occ * (term_size(u) - 1));
  }
}

TEST_CASE("approximation relation") {
  Term s0e = succ_term(0, eps_term());
  Term s0star = succ_term(0, star());
  Term s1star = succ_term(1, star());
  CHECK(approx_leq(s0e, star()));
  CHECK(approx_leq(app(discard_fn(), {var("z")}), star()));
  CHECK(approx_leq(s0e, s0star));
  CHECK_FALSE(approx_leq(s0e, s1star));
  CHECK_FALSE(approx_leq(star(), s0star));
  CHECK(approx_leq(var("x"), var("x")));
  CHECK_FALSE(approx_leq(var("x"), var("y")));
}

TEST_CASE("approximation is a partial order with star on top") {
  pvwtest::Gen g(13);
  for (int i = 0; i < 300; ++i) {
    Term t = g.random_term(3, {"x"}, true);
    CHECK(approx_leq(t, t));
    CHECK(approx_leq(t, star()));
    Term u = g.random_term(3, {"x"}, true);
    Term w = g.random_term(3, {"x"}, true);
    if (approx_leq(t, u) && approx_leq(u, w)) CHECK(approx_leq(t, w));
    // on star-free terms the relation collapses to identity
    Term sf = g.random_term(3, {"x"}, false);
    Term sf2 = g.random_term(3, {"x"}, false);
    CHECK(approx_leq(sf, sf2) == term_equal(sf, sf2));
  }
}

TEST_CASE("g-numerals") {
  CHECK(is_g_numeral(succ_term(1, star())));
  CHECK(is_g_numeral(eps_term()));
  CHECK(is_g_numeral(star()));
  CHECK_FALSE(is_g_numeral(app(FunctionDef::proj(1, 1), {eps_term()})));
  CHECK_FALSE(is_g_numeral(var("x")));
}

TEST_CASE("development lookup") {
  Development d1({{"x", eps_term()}});
  auto hit = d1.lookup("x");
  REQUIRE(hit);
  CHECK(term_equal(hit->term, eps_term()));
  CHECK(d1.suffix_after(hit->position).empty());

  Development d2({{"y", succ_term(0, eps_term())}, {"x", eps_term()}});
  auto hit2 = d2.lookup("x");
  REQUIRE(hit2);
  CHECK(hit2->position == 1);
  CHECK(d2.suffix_after(1).empty());

  CHECK_FALSE(Development({{"y", eps_term()}}).lookup("x"));
}

TEST_CASE("development invariants") {
  CHECK_THROWS_AS(Development({{"x", eps_term()}, {"x", eps_term()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Development({{"x", succ_term(0, var("x"))}}),
                  std::invalid_argument);
  Development d({{"x", succ_term(1, eps_term())}, {"y", eps_term()}});
  CHECK(d.size() == (4 + 4) + (1 + 4));
}

TEST_CASE("development subsequence") {
  Binding bx{"x", eps_term()}, by{"y", succ_term(0, eps_term())}, bz{"z", eps_term()};
  Development whole({bx, by, bz});
  CHECK(Development::subsequence(Development({bx, bz}), whole));
  CHECK(Development::subsequence(Development{}, whole));
  CHECK_FALSE(Development::subsequence(Development({bz, bx}), whole));
}

TEST_CASE("base symbols") {
  FnSet s = base_symbols_of_term(eps_term());
  CHECK(s.size() == 1);

  Fn z1 = zeroize_fn(1);
  FnSet zs;
  zs.insert(z1);
  FnSet base = base_symbols(zs);
  CHECK(base.count(z1));
  CHECK(base.count(FunctionDef::eps()));
  CHECK(base.count(FunctionDef::succ(0)));
  CHECK(base.count(FunctionDef::proj(2, 2)));
  CHECK(base.count(z1->g0));

  Fn c = FunctionDef::comp(FunctionDef::proj(1, 1), {FunctionDef::proj(1, 1)});
  FnSet cs;
  cs.insert(c);
  FnSet cbase = base_symbols(cs);
  CHECK(cbase.size() == 2);  // the composition and the shared projection
}

TEST_CASE("base symbols closure is idempotent") {
  pvwtest::Gen g(17);
  for (int i = 0; i < 100; ++i) {
    Term t = g.random_term(3, {}, false);
    FnSet once = base_symbols_of_term(t);
    FnSet twice = base_symbols(once);
    CHECK(once.size() == twice.size());
  }
}

TEST_CASE("fresh variables avoid a used set") {
  FreshVarGen fresh({"v0", "v1", "x"});
  std::string a = fresh.fresh();
  std::string b = fresh.fresh();
  CHECK(a != b);
  CHECK(a != "v0");
  CHECK(a != "v1");
}
