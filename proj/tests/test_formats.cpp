#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "pvw/beckmann.hpp"
#include "pvw/formats.hpp"
#include "pvw/stdlib.hpp"

using namespace pvw;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DefsTable fixture_defs() {
  return parse_defs_file(slurp(std::filesystem::path(PVW_FIXTURE_DIR) / "defs" /
                               "stdlib.defs"));
}

}  // namespace

TEST_CASE("term parsing") {
  DefsTable defs = fixture_defs();
  CHECK(term_equal(parse_term_text("eps", defs), eps_term()));
  CHECK(term_equal(parse_term_text("star", defs), star()));
  Term want = app(FunctionDef::proj(2, 1), {succ_term(0, eps_term()), eps_term()});
  CHECK(term_equal(parse_term_text("(app (proj 2 1) (s0 eps) eps)", defs), want));
  CHECK(term_equal(parse_term_text("(app (named zeroize1) (var x))", defs),
                   app(zeroize_fn(1), {var("x")})));
}

TEST_CASE("parse errors carry positions") {
  DefsTable defs;
  CHECK_THROWS_AS(parse_term_text("(s0)", defs), ParseError);
  CHECK_THROWS_AS(parse_term_text("(app (proj 2 1) eps)", defs), ParseError);
  CHECK_THROWS_AS(parse_term_text("(", defs), ParseError);
  CHECK_THROWS_AS(parse_term_text("(app (named nosuch) eps)", defs), ParseError);
  try {
    parse_term_text("(s0\n  (bad-form eps))", defs);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("round trips on random objects") {
  pvwtest::Gen g(401);
  DefsTable defs;
  for (int i = 0; i < 200; ++i) {
    Term t = g.random_term(4, {"x", "y"}, true);
    CHECK(term_equal(parse_term_text(emit_term_text(t), defs), t));
  }
  for (int i = 0; i < 100; ++i) {
    Fn f = g.random_fn(3);
    CHECK(fn_equal(parse_def(parse_sexpr(print_sexpr(emit_def(f))), defs), f));
  }
  for (int i = 0; i < 50; ++i) {
    Development rho = g.random_env({"a", "b"});
    CHECK(dev_equal(parse_env_text(emit_env_text(rho), defs), rho));
  }
}

TEST_CASE("computation files round trip") {
  pvwtest::Gen g(409);
  DefsTable defs;
  for (int i = 0; i < 60; ++i) {
    Term t = g.random_closed_term(3);
    CompDag d = approx_eval(t, Development{}, g.random_demand());
    CompDag back = parse_comp_text(emit_comp_text(d), defs);
    REQUIRE(back.nodes.size() == d.nodes.size());
    for (std::size_t k = 0; k < d.nodes.size(); ++k) {
      CHECK(tag_equal(back.nodes[k].rule, d.nodes[k].rule));
      CHECK(back.nodes[k].premises == d.nodes[k].premises);
      CHECK(stmt_equal(back.nodes[k].stmt, d.nodes[k].stmt));
    }
  }
}

TEST_CASE("proof files round trip") {
  DefsTable defs = fixture_defs();
  BeckmannFixture fx = beckmann_fixture(2, 3);
  Proof back = parse_proof_text(emit_proof_text(fx.chain), defs);
  CHECK(check(back).ok);
  CHECK(eq_equal(conclusion(back), conclusion(fx.chain)));
  CHECK(proof_size(back) == proof_size(fx.chain));
}

TEST_CASE("induction-shaped input is rejected at parse time") {
  DefsTable defs;
  CHECK_THROWS_AS(
      parse_proof_text("(proof (ind (refl eps) (refl eps) (refl eps)))", defs),
      ParseError);
}

TEST_CASE("the shipped fixture corpus parses and checks") {
  DefsTable defs = fixture_defs();
  namespace fs = std::filesystem;
  fs::path root(PVW_FIXTURE_DIR);

  int comps = 0;
  for (const auto& entry : fs::directory_iterator(root / "comps")) {
    CompDag d = parse_comp_text(slurp(entry.path()), defs);
    auto v = validate(d);
    INFO(entry.path().filename().string(), " ", v ? v->condition : "");
    CHECK_FALSE(v);
    // round trip identity
    CompDag back = parse_comp_text(emit_comp_text(d), defs);
    CHECK(back.nodes.size() == d.nodes.size());
    ++comps;
  }
  CHECK(comps >= 25);

  int proofs = 0;
  for (const auto& entry : fs::directory_iterator(root / "proofs")) {
    Proof p = parse_proof_text(slurp(entry.path()), defs);
    INFO(entry.path().filename().string());
    CHECK(check(p).ok);
    Proof back = parse_proof_text(emit_proof_text(p), defs);
    CHECK(eq_equal(conclusion(back), conclusion(p)));
    ++proofs;
  }
  CHECK(proofs >= 8);

  int bad = 0;
  for (const auto& entry : fs::directory_iterator(root / "badproofs")) {
    Proof p = parse_proof_text(slurp(entry.path()), defs);
    CheckResult r = check(p);
    INFO(entry.path().filename().string());
    CHECK_FALSE(r.ok);
    REQUIRE(r.violation);
    CHECK_FALSE(r.violation->path.empty());
    ++bad;
  }
  CHECK(bad == 5);
}

TEST_CASE("rule coverage of the computation corpus") {
  DefsTable defs = fixture_defs();
  namespace fs = std::filesystem;
  std::map<std::string, int> seen;
  for (const auto& entry :
       fs::directory_iterator(fs::path(PVW_FIXTURE_DIR) / "comps")) {
    CompDag d = parse_comp_text(slurp(entry.path()), defs);
    for (const auto& n : d.nodes) {
      const char* fam = "";
      switch (n.rule.kind) {
        case RuleTag::Subst: fam = "subst"; break;
        case RuleTag::Star: fam = "star"; break;
        case RuleTag::Eps: fam = "eps"; break;
        case RuleTag::EpsN: fam = "epsn"; break;
        case RuleTag::Succ: fam = "succ"; break;
        case RuleTag::SuccN: fam = "succn"; break;
        case RuleTag::ConstFn: fam = "constfn"; break;
        case RuleTag::Proj: fam = "proj"; break;
        case RuleTag::Comp: fam = "comp"; break;
        case RuleTag::RecEps: fam = "receps"; break;
        case RuleTag::RecSucc: fam = "recsucc"; break;
      }
      seen[fam] += 1;
    }
  }
  for (const char* fam : {"subst", "star", "eps", "epsn", "succ", "succn",
                          "constfn", "proj", "comp", "receps", "recsucc"}) {
    INFO(fam);
    CHECK(seen[fam] >= 2);
  }
}

TEST_CASE("cli exit codes") {
  namespace fs = std::filesystem;
  std::string cli = PVW_CLI_PATH;
  if (!fs::exists(cli)) return;  // running outside the build tree
  std::string defs = std::string(PVW_FIXTURE_DIR) + "/defs/stdlib.defs";
  auto run = [&](const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  };
  CHECK(run("eval --term \"(app (named zeroize1) (s1 eps))\" --defs " + defs) == 0);
  CHECK(run("eval --term \"(var x)\" --mode exact") == 2);
  CHECK(run("eval --term \"(s0)\"") == 3);
  CHECK(run("check --comp " + std::string(PVW_FIXTURE_DIR) +
            "/comps/succ_env_chain.comp --defs " + defs) == 0);
  CHECK(run("check --proof " + std::string(PVW_FIXTURE_DIR) +
            "/badproofs/bad2_trans_middle.proof --defs " + defs) == 1);
  CHECK(run("transform --proof " + std::string(PVW_FIXTURE_DIR) +
            "/proofs/beckmann_k1_chain.proof --comp " +
            std::string(PVW_FIXTURE_DIR) + "/comps/gen_beckmann_k1_approx.comp" +
            " --defs " + defs + " --strict --budget-U 10 --budget-B 5") == 4);
}
