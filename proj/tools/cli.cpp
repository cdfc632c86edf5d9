#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pgcl/explorer.hpp"
#include "pgcl/json_report.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/printer.hpp"
#include "pgcl/reductions.hpp"
#include "pgcl/sampler.hpp"

namespace pgcl::cli {

namespace {

using nlohmann::json;

struct BadOptions : Error {
  using Error::Error;
};

struct Options {
  std::string file;
  bool json = false;

  // budgets
  std::uint64_t nodes = 10000;
  std::uint64_t y1 = 0;
  std::uint64_t y2 = 0;
  std::uint64_t max_depth = 0;
  unsigned workers = 1;
  bool certify = false;

  std::vector<std::string> vars;
  std::string q;
  std::string delta;

  std::string choices;
  std::uint64_t max_steps = 0;

  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 10000;

  std::string kind;
  std::string out_path;
  bool indent = false;
};

// Flags shared by the analysis commands.
struct BudgetFlags {
  CLI::Option* nodes = nullptr;
  CLI::Option* y1 = nullptr;
  CLI::Option* y2 = nullptr;
};

BudgetFlags add_budget(CLI::App* sub, Options& o) {
  BudgetFlags f;
  f.nodes = sub->add_option("--nodes", o.nodes, "Frontier budget: states to expand");
  f.y1 = sub->add_option("--y1", o.y1, "Double-sum bound on the choice-string index");
  f.y2 = sub->add_option("--y2", o.y2, "Double-sum bound on the step count");
  f.nodes->excludes(f.y1)->excludes(f.y2);
  f.y1->needs(f.y2);
  f.y2->needs(f.y1);
  return f;
}

Budget budget_of(const BudgetFlags& f, const Options& o) {
  if (f.y1->count() > 0) return SumBounds{o.y1, o.y2};
  if (o.nodes == 0) throw BadOptions("--nodes must be at least 1");
  return NodeBudget{o.nodes};
}

Rational rational_option(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw BadOptions(flag + ": " + e.what());
  }
}

Program load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadOptions("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

json envelope(const std::string& command, const std::string& input) {
  return {{"schema_version", std::string(kSchemaVersion)}, {"command", command}, {"input", input}};
}

std::string approx(const Rational& q) {
  return to_string(q) + "  (~" + to_decimal(q, 20) + ", approximate)";
}

void print_report(std::ostream& out, const BoundReport& r) {
  out << "terminated_mass  " << approx(r.terminated_mass) << "\n";
  out << "live_mass        " << approx(r.live_mass) << "\n";
  out << "divergent_mass   " << approx(r.divergent_mass) << "\n";
  for (const auto& [v, value] : r.expectation_mass) {
    out << "E[" << v << "] >=  " << approx(value) << "\n";
  }
  out << "nodes_expanded   " << r.budget_used.nodes_expanded << "\n";
}

// Double-sum mode has no frontier: everything not yet terminated is "live".
BoundReport sum_report(const Program& p, const std::vector<Var>& vars, const SumBounds& b) {
  PartialSums sums = double_sum(p, vars, b.y1, b.y2);
  BoundReport r;
  r.terminated_mass = sums.termination;
  r.live_mass = 1 - sums.termination;
  r.expectation_mass = sums.expectation;
  r.budget_used.matched = SumCoverage{to_natural(b.y1), b.y2};
  return r;
}

BoundReport analyse(const Program& p, const std::vector<Var>& vars, const BudgetFlags& f,
                    const Options& o, CLI::Option* max_depth) {
  Budget b = budget_of(f, o);
  if (const auto* sb = std::get_if<SumBounds>(&b)) return sum_report(p, vars, *sb);
  ExploreOptions eo;
  eo.node_budget = std::get<NodeBudget>(b).nodes;
  eo.workers = o.workers;
  eo.certify_divergence = o.certify;
  if (max_depth->count() > 0) eo.max_depth = o.max_depth;
  return explore(p, vars, eo);
}

// Short programs stay on one line; long generated ones are indented.
std::string program_text(const Program& p) {
  std::string line = pretty_print(p);
  if (line.size() <= 100) return line;
  return pretty_print(p, Layout::Indented);
}

std::filesystem::path sidecar_path(const std::string& out) {
  std::filesystem::path p(out);
  if (p.extension() == ".json") return p.replace_extension(".meta.json");
  return p.replace_extension(".json");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of probabilistic guarded-command programs", "pgcl"};
  app.require_subcommand(1);
  Options o;

  auto* parse_cmd = app.add_subcommand("parse", "Parse a program and print its canonical form");
  parse_cmd->add_option("file", o.file)->required();
  parse_cmd->add_flag("--indent", o.indent, "Multi-line layout");
  parse_cmd->add_flag("--json", o.json);

  auto* run_cmd = app.add_subcommand("run", "State after exactly K inferences along a choice word");
  run_cmd->add_option("file", o.file)->required();
  run_cmd->add_option("--choices", o.choices, "Word over {L, R}");
  run_cmd->add_option("--max-steps", o.max_steps, "Number of inferences K")->required();
  run_cmd->add_flag("--json", o.json);

  auto* expect_cmd = app.add_subcommand("expect", "Lower bounds on expected outcomes");
  expect_cmd->add_option("file", o.file)->required();
  expect_cmd->add_option("--var", o.vars, "Variable(s) to report")->required();
  auto expect_budget = add_budget(expect_cmd, o);
  auto* expect_depth = expect_cmd->add_option("--max-depth", o.max_depth, "Do not expand deeper states");
  expect_cmd->add_option("--workers", o.workers);
  expect_cmd->add_flag("--certify-divergence", o.certify);
  expect_cmd->add_flag("--json", o.json);

  auto* term_cmd = app.add_subcommand("term", "Bounds on the termination probability");
  term_cmd->add_option("file", o.file)->required();
  auto term_budget = add_budget(term_cmd, o);
  auto* term_depth = term_cmd->add_option("--max-depth", o.max_depth, "Do not expand deeper states");
  term_cmd->add_option("--workers", o.workers);
  term_cmd->add_flag("--certify-divergence", o.certify);
  term_cmd->add_flag("--json", o.json);

  auto* lexp_cmd = app.add_subcommand("lexp", "Search for a witness of q < E[var]");
  lexp_cmd->add_option("file", o.file)->required();
  lexp_cmd->add_option("--var", o.vars)->required()->expected(1);
  lexp_cmd->add_option("--q", o.q)->required();
  auto lexp_budget = add_budget(lexp_cmd, o);
  lexp_cmd->add_option("--workers", o.workers);
  lexp_cmd->add_flag("--json", o.json);

  auto* uexp_cmd = app.add_subcommand("refute-uexp", "Test the candidate E[var] < q - delta");
  uexp_cmd->add_option("file", o.file)->required();
  uexp_cmd->add_option("--var", o.vars)->required()->expected(1);
  uexp_cmd->add_option("--q", o.q)->required();
  uexp_cmd->add_option("--delta", o.delta)->required();
  auto uexp_budget = add_budget(uexp_cmd, o);
  uexp_cmd->add_option("--workers", o.workers);
  uexp_cmd->add_flag("--json", o.json);

  auto* sample_cmd = app.add_subcommand("sample", "Monte-Carlo estimate (expectation or termination)");
  sample_cmd->add_option("file", o.file)->required();
  sample_cmd->add_option("--var", o.vars, "Estimate E[var]; termination if omitted")->expected(1);
  sample_cmd->add_option("-n", o.n, "Number of runs");
  sample_cmd->add_option("--seed", o.seed);
  sample_cmd->add_option("--fuel", o.fuel, "Inferences per run");
  sample_cmd->add_option("--workers", o.workers);
  sample_cmd->add_flag("--json", o.json);

  auto* reduce_cmd = app.add_subcommand("reduce", "Generate a reduction program");
  reduce_cmd->add_option("--kind", o.kind, "uh2uexp | ast2exp | uh2ast")
      ->required()
      ->check(CLI::IsMember({"uh2uexp", "ast2exp", "uh2ast", "uh_to_uexp", "ast_to_exp", "uh_to_ast"}));
  reduce_cmd->add_option("file", o.file)->required();
  reduce_cmd->add_option("--out", o.out_path, "Write the program here plus a .json sidecar");
  reduce_cmd->add_flag("--json", o.json);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kBadOptions;
  }

  try {
    if (parse_cmd->parsed()) {
      Program p = load(o.file);
      std::string text = pretty_print(p, o.indent ? Layout::Indented : Layout::SingleLine);
      if (o.json) {
        json j = envelope("parse", o.file);
        j["program"] = text;
        j["ordinary"] = is_ordinary(p);
        j["vars"] = vars_of(p);
        j["choices"] = count_choices(p);
        out << j.dump(2) << "\n";
      } else {
        out << text << "\n";
      }
      return kOk;
    }

    if (run_cmd->parsed()) {
      ChoiceString w;
      try {
        w = ChoiceString(o.choices);
      } catch (const Error& e) {
        throw BadOptions(std::string("--choices: ") + e.what());
      }
      Program p = load(o.file);
      StepOutcome result = run(initial_state(p), o.max_steps, w);
      if (o.json) {
        json j = envelope("run", o.file);
        j["max_steps"] = o.max_steps;
        j["choices"] = o.choices;
        j["result"] = result ? to_json(*result, vars_of(p)) : json("top");
        out << j.dump(2) << "\n";
      } else if (result) {
        out << (result->terminated() ? "terminated" : "running") << "\n";
        out << "control  " << pretty_print(result->control) << "\n";
        for (const auto& v : vars_of(p)) out << v << " = " << approx(result->env.get(v)) << "\n";
        out << "prob     " << approx(result->prob) << "\n";
        out << "trace    " << (result->trace.empty() ? "(empty)" : result->trace.str()) << "\n";
      } else {
        out << "top: no state after exactly " << o.max_steps << " inferences along '" << o.choices
            << "'\n";
      }
      return result ? kOk : kTop;
    }

    if (expect_cmd->parsed() || term_cmd->parsed()) {
      bool expect = expect_cmd->parsed();
      const auto& flags = expect ? expect_budget : term_budget;
      budget_of(flags, o);
      Program p = load(o.file);
      std::vector<Var> vars = expect ? o.vars : std::vector<Var>{};
      BoundReport r = analyse(p, vars, flags, o, expect ? expect_depth : term_depth);
      if (o.json) {
        json j = envelope(expect ? "expect" : "term", o.file);
        j.update(to_json(r));
        out << j.dump(2) << "\n";
      } else {
        print_report(out, r);
      }
      return kOk;
    }

    if (lexp_cmd->parsed()) {
      Budget b = budget_of(lexp_budget, o);
      Rational q = rational_option("--q", o.q);
      if (q < 0) throw BadOptions("--q must be nonnegative");
      Program p = load(o.file);
      LexpVerdict v = lexp_semidecide(p, o.vars.front(), q, b, o.workers);
      if (o.json) {
        json j = envelope("lexp", o.file);
        j["var"] = o.vars.front();
        j["q"] = to_string(q);
        j.update(to_json(v));
        out << j.dump(2) << "\n";
      } else if (const auto* w = std::get_if<LexpWitness>(&v)) {
        out << "witness: q < E[" << o.vars.front() << "] shown at y1 = " << w->y1.get_str()
            << ", y2 = " << w->y2 << "\n";
        out << "sum      " << approx(w->partial_sum) << "\n";
      } else {
        out << "unknown within budget\nbest_sum " << approx(std::get<LexpUnknown>(v).best_sum) << "\n";
      }
      return kOk;
    }

    if (uexp_cmd->parsed()) {
      Budget b = budget_of(uexp_budget, o);
      Rational q = rational_option("--q", o.q);
      Rational delta = rational_option("--delta", o.delta);
      if (delta <= 0) throw BadOptions("--delta must be positive");
      Program p = load(o.file);
      UexpVerdict v = uexp_refute(p, o.vars.front(), q, delta, b, o.workers);
      if (o.json) {
        json j = envelope("refute-uexp", o.file);
        j["var"] = o.vars.front();
        j["q"] = to_string(q);
        j["delta"] = to_string(delta);
        j.update(to_json(v));
        out << j.dump(2) << "\n";
      } else if (const auto* r = std::get_if<UexpRefuted>(&v)) {
        out << "refuted at y1 = " << r->y1.get_str() << ", y2 = " << r->y2 << "\n";
        out << "sum      " << approx(r->partial_sum) << "\n";
      } else {
        out << "not refuted within budget\nbest_sum " << approx(std::get<UexpNotRefuted>(v).best_sum)
            << "\n";
      }
      return kOk;
    }

    if (sample_cmd->parsed()) {
      if (o.n == 0) throw BadOptions("-n must be at least 1");
      if (o.fuel == 0) throw BadOptions("--fuel must be at least 1");
      Program p = load(o.file);
      SampleConfig cfg{o.n, o.seed, o.fuel, o.workers};
      bool expectation = !o.vars.empty();
      Estimate e = expectation ? estimate_expectation(p, o.vars.front(), cfg)
                               : estimate_termination(p, cfg);
      if (o.json) {
        json j = envelope("sample", o.file);
        j["quantity"] = expectation ? "expectation" : "termination";
        if (expectation) j["var"] = o.vars.front();
        j["seed"] = o.seed;
        j["fuel"] = o.fuel;
        j.update(to_json(e));
        out << j.dump(2) << "\n";
      } else {
        out << std::setprecision(10);
        out << (expectation ? "E[" + o.vars.front() + "]" : std::string("Pr[term]")) << " ~ " << e.mean
            << " +/- " << e.ci_halfwidth << " (95%)\n";
        out << "timeouts " << e.timeout_fraction << "\n";
      }
      return kOk;
    }

    if (reduce_cmd->parsed()) {
      Program q = load(o.file);
      ReductionOutput r = reduce(parse_reduction_kind(o.kind), q);
      json j = envelope("reduce", o.file);
      j.update(to_json(r));
      if (!o.out_path.empty()) {
        std::ofstream prog(o.out_path);
        prog << program_text(r.program) << "\n";
        json side = {{"var", j["var"]}, {"value", j["value"]}, {"kind", j["kind"]},
                     {"source_hash", j["source_hash"]}, {"program_file", o.out_path}};
        std::ofstream sc(sidecar_path(o.out_path));
        sc << side.dump(2) << "\n";
        if (!prog || !sc) throw BadOptions("cannot write '" + o.out_path + "'");
      }
      if (o.json) out << j.dump(2) << "\n";
      else if (o.out_path.empty()) out << program_text(r.program) << "\n";
      else out << "wrote " << o.out_path << " and " << sidecar_path(o.out_path).string() << "\n";
      return kOk;
    }
  } catch (const SyntaxError& e) {
    err << o.file << ":" << e.what() << "\n";
    return kParseError;
  } catch (const ProbabilityRangeError& e) {
    err << o.file << ":" << e.what() << "\n";
    return kParseError;
  } catch (const BadOptions& e) {
    err << "error: " << e.what() << "\n";
    return kBadOptions;
  } catch (const NotOrdinaryError& e) {
    err << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ReservedVarClashError& e) {
    err << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace pgcl::cli
