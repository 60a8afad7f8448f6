// Command-line surface: evaluate terms, check computations and proofs,
// transform computations along proofs, audit, and generate the
// counterexample fixture family.
//
// Exit codes: 0 ok, 1 invalid artifact, 2 evaluation error, 3 parse error,
// 4 budget violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pvw/beckmann.hpp"
#include "pvw/formats.hpp"
#include "pvw/stdlib.hpp"
#include "pvw/transform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitEval = 2;
constexpr int kExitParse = 3;
constexpr int kExitBudget = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit_json(const nlohmann::json& j, const std::string& json_path) {
  if (json_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    spit(json_path, j.dump(2) + "\n");
  }
}

pvw::DefsTable load_defs(const std::string& path) {
  if (path.empty()) {
    pvw::DefsTable t;
    for (const auto& [name, fn] : pvw::stdlib_table()) t.emplace(name, fn);
    return t;
  }
  return pvw::parse_defs_file(slurp(path));
}

struct CommonOpts {
  std::string defs, json_path;
};

int cmd_eval(const CommonOpts& common, const std::string& term_s,
             const std::string& env_s, const std::string& mode,
             const std::string& comp_out) {
  auto defs = load_defs(common.defs);
  pvw::Term t = pvw::parse_term_text(term_s, defs);
  pvw::Development rho =
      env_s.empty() ? pvw::Development{} : pvw::parse_env_text(env_s, defs);
  pvw::CompDag dag;
  if (mode == "exact") {
    dag = pvw::exact_eval(t, rho);
  } else if (mode.rfind("demand:", 0) == 0) {
    std::string d = mode.substr(7);
    pvw::Demand dem = d == "full" ? pvw::Demand::Full() : pvw::Demand::at(std::stoll(d));
    dag = pvw::approx_eval(t, rho, dem);
  } else {
    throw CLI::ValidationError("--mode must be exact or demand:N");
  }
  if (!comp_out.empty()) spit(comp_out, pvw::emit_comp_text(dag));
  nlohmann::json j = pvw::metrics_json(pvw::metrics(dag));
  j["value"] = pvw::emit_term_text(dag.conclusions().front().value);
  emit_json(j, common.json_path);
  return kExitOk;
}

int cmd_check(const CommonOpts& common, const std::string& comp_path,
              const std::string& proof_path, pvw::Count C) {
  auto defs = load_defs(common.defs);
  if (!comp_path.empty()) {
    pvw::CompDag dag = pvw::parse_comp_text(slurp(comp_path), defs);
    auto violation = pvw::validate(dag);
    nlohmann::json j = pvw::audit_json(dag, C);
    j["ok"] = !violation.has_value();
    if (violation) {
      j["violation"] = {{"node", violation->node},
                        {"condition", violation->condition}};
    }
    emit_json(j, common.json_path);
    return violation ? kExitInvalid : kExitOk;
  }
  pvw::Proof p = pvw::parse_proof_text(slurp(proof_path), defs);
  pvw::CheckResult r = pvw::check(p);
  emit_json(pvw::check_proof_json(r), common.json_path);
  return r.ok ? kExitOk : kExitInvalid;
}

int cmd_transform(const CommonOpts& common, const std::string& proof_path,
                  const std::string& comp_path, const std::string& direction,
                  const pvw::Budget& budget, bool strict,
                  const std::string& comp_out) {
  auto defs = load_defs(common.defs);
  pvw::Proof p = pvw::parse_proof_text(slurp(proof_path), defs);
  pvw::CompDag dag = pvw::parse_comp_text(slurp(comp_path), defs);
  if (auto v = pvw::validate(dag)) {
    std::cerr << "input computation invalid at node " << v->node << ": "
              << v->condition << "\n";
    return kExitInvalid;
  }
  pvw::CheckResult cr = pvw::check(p);
  if (!cr.ok) {
    std::cerr << "proof does not check: " << cr.violation->condition << "\n";
    return kExitInvalid;
  }
  pvw::Direction dir =
      direction == "bwd" ? pvw::Direction::Backward : pvw::Direction::Forward;
  const pvw::Term& want =
      dir == pvw::Direction::Forward ? cr.conclusion->lhs : cr.conclusion->rhs;
  std::optional<pvw::Statement> target;
  for (const auto& c : dag.conclusions())
    if (pvw::term_equal(c.main, want)) {
      target = c;
      break;
    }
  if (!target) {
    std::cerr << "no conclusion matches the proof side "
              << pvw::emit_term_text(want) << "\n";
    return kExitInvalid;
  }
  pvw::TransformResult res =
      pvw::transform_along_proof(dag, *target, p, dir, budget, strict);
  if (!comp_out.empty()) spit(comp_out, pvw::emit_comp_text(res.dag));
  nlohmann::json j = pvw::ledger_json(res.ledger);
  j["conclusion"] = {{"main", pvw::emit_term_text(res.conclusion.main)},
                     {"env", pvw::emit_env_text(res.conclusion.env)},
                     {"value", pvw::emit_term_text(res.conclusion.value)}};
  emit_json(j, common.json_path);
  return res.ledger.overall ? kExitOk : kExitInvalid;
}

int cmd_audit(const CommonOpts& common, const std::string& comp_path, pvw::Count C) {
  auto defs = load_defs(common.defs);
  pvw::CompDag dag = pvw::parse_comp_text(slurp(comp_path), defs);
  if (auto v = pvw::validate(dag)) {
    std::cerr << "computation invalid at node " << v->node << ": " << v->condition
              << "\n";
    return kExitInvalid;
  }
  emit_json(pvw::audit_json(dag, C), common.json_path);
  return kExitOk;
}

int cmd_beckmann(const CommonOpts& common, int k, const std::string& lengths_s,
                 const std::string& outdir) {
  std::vector<pvw::Count> lengths;
  std::stringstream ss(lengths_s);
  for (std::string part; std::getline(ss, part, ',');)
    lengths.push_back(std::stoll(part));
  if (lengths.empty()) throw CLI::ValidationError("--lengths must be nonempty");

  if (!outdir.empty()) {
    std::filesystem::create_directories(outdir);
    for (pvw::Count ell : lengths) {
      pvw::BeckmannFixture fx = pvw::beckmann_fixture(k, ell);
      std::string base = outdir + "/beckmann_k" + std::to_string(k) + "_l" +
                         std::to_string(ell);
      spit(base + "_approx.comp", pvw::emit_comp_text(fx.approx));
      spit(base + "_exact.comp", pvw::emit_comp_text(fx.exact));
      spit(base + "_chain.proof", pvw::emit_proof_text(fx.chain) + "\n");
    }
  }
  auto rows = pvw::beckmann_table(k, lengths);
  emit_json(pvw::beckmann_table_json(k, rows), common.json_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for equational derivations and approximate computations"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string term_s, env_s, mode = "exact", comp_path, proof_path;
  std::string comp_out, direction = "fwd", lengths_s = "1,2,3,4,5,6,7,8", outdir;
  pvw::Budget budget{1u << 20, 1u << 18, 1u << 18, 8};
  bool strict = false;
  int k = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--defs", common.defs, "definitions file");
    sub->add_option("--json", common.json_path, "write the JSON report here");
  };

  auto* eval = app.add_subcommand("eval", "evaluate a term to a computation");
  add_common(eval);
  eval->add_option("--term", term_s, "term (s-expression)")->required();
  eval->add_option("--env", env_s, "environment (s-expression)");
  eval->add_option("--mode", mode, "exact | demand:N | demand:full");
  eval->add_option("--comp", comp_out, "write the computation here");

  auto* chk = app.add_subcommand("check", "validate a computation or proof");
  add_common(chk);
  chk->add_option("--comp", comp_path, "computation file");
  chk->add_option("--proof", proof_path, "proof file");
  chk->add_option("--const-C", budget.C, "constant for the M-bound audit");

  auto* tr = app.add_subcommand("transform", "carry a computation along a proof");
  add_common(tr);
  tr->add_option("--proof", proof_path)->required();
  tr->add_option("--comp", comp_path)->required();
  tr->add_option("--direction", direction, "fwd | bwd");
  tr->add_option("--budget-U", budget.U);
  tr->add_option("--budget-B", budget.B);
  tr->add_option("--budget-V", budget.V);
  tr->add_option("--const-C", budget.C);
  tr->add_flag("--strict", strict, "enforce budget preconditions");
  tr->add_option("--out", comp_out, "write the transformed computation here");

  auto* au = app.add_subcommand("audit", "metrics and structural audits");
  add_common(au);
  au->add_option("--comp", comp_path)->required();
  au->add_option("--const-C", budget.C);

  auto* bk = app.add_subcommand("beckmann", "generate counterexample fixtures");
  add_common(bk);
  bk->add_option("--k", k, "successor-block length");
  bk->add_option("--lengths", lengths_s, "comma-separated numeral lengths");
  bk->add_option("--outdir", outdir, "write fixture files here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return cmd_eval(common, term_s, env_s, mode, comp_out);
    if (*chk) {
      if (comp_path.empty() == proof_path.empty()) {
        std::cerr << "check: pass exactly one of --comp / --proof\n";
        return kExitInvalid;
      }
      return cmd_check(common, comp_path, proof_path, budget.C);
    }
    if (*tr) return cmd_transform(common, proof_path, comp_path, direction, budget,
                                  strict, comp_out);
    if (*au) return cmd_audit(common, comp_path, budget.C);
    if (*bk) return cmd_beckmann(common, k, lengths_s, outdir);
  } catch (const pvw::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const pvw::EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitEval;
  } catch (const pvw::BudgetError& e) {
    std::cerr << "budget violation: " << e.what() << "\n";
    return kExitBudget;
  } catch (const pvw::TransformError& e) {
    std::cerr << "transform error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
