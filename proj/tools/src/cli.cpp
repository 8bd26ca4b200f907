#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "amc/check.hpp"
#include "amc/dot.hpp"
#include "amc/dsl.hpp"
#include "amc/gen.hpp"
#include "amc/kbsc.hpp"
#include "amc/por.hpp"
#include "amc/serialize.hpp"

namespace amc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

class Timer {
public:
  explicit Timer(std::string phase) : phase_(std::move(phase)), start_(clock::now()) {}
  ~Timer() {
    auto ms = std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    std::cerr << "# time " << phase_ << ": " << ms << " ms\n";
  }

private:
  using clock = std::chrono::steady_clock;
  std::string phase_;
  clock::time_point start_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

uint64_t env_seed() {
  const char* s = std::getenv("AMC_SEED");
  if (!s) return 0;
  return std::strtoull(s, nullptr, 10);
}

struct LoadedModel {
  std::shared_ptr<const Amas> amas;
  std::shared_ptr<Ioicgs> model;  // null until built
};

LoadedModel load(const std::string& path, bool build, const BuildLimits& limits) {
  std::string text = read_file(path);
  LoadedModel lm;
  if (looks_like_model_file(text)) {
    ParsedModel pm = parse_model(text);
    lm.amas = pm.amas;
    lm.model = std::make_shared<Ioicgs>(std::move(pm.model));
  } else {
    lm.amas = std::make_shared<Amas>(parse_amas(text));
    if (build) {
      Timer t("build");
      lm.model = std::make_shared<Ioicgs>(build_model(lm.amas, limits));
    }
  }
  return lm;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ReductionContext make_context(const Amas& amas, const std::string& coalition,
                              const std::string& props) {
  ReductionContext ctx;
  for (const std::string& name : split_list(coalition)) {
    auto id = amas.agent_by_name(name);
    if (!id) throw std::runtime_error("unknown agent '" + name + "'");
    ctx.coalition.push_back(*id);
  }
  if (props == "all") {
    for (PropId p = 0; p < amas.props.size(); ++p) ctx.props.push_back(p);
  } else {
    for (const std::string& name : split_list(props)) {
      auto id = amas.props.find(name);
      if (!id) throw std::runtime_error("unknown proposition '" + name + "'");
      ctx.props.push_back(*id);
    }
  }
  return ctx;
}

std::vector<std::string> read_spec_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(a, b - a + 1));
  }
  return out;
}

std::string command_echo(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
  return os.str();
}

void report_header(std::ostringstream& os, const std::string& echo) {
  os << "amc-report 1\n";
  os << "command: " << echo << "\n";
  os << "seed: " << env_seed() << "\n";
}

void report_model_sizes(std::ostringstream& os, const Ioicgs& m) {
  os << "states: " << m.state_count() << "\n";
  os << "transitions: " << m.transition_count() << "\n";
  os << "eps-loops: " << m.eps_loop_count() << "\n";
}

struct CheckArgs {
  std::string file;
  std::vector<std::string> formulas;
  std::string spec_file;
  std::string strategy = "ir";
  std::string semantics = "std";
  std::string witness_file;
  std::string outcome_dot;
  std::string expect;
  uint64_t max_states = BuildLimits{}.max_states;
  uint64_t max_strategies = CheckLimits{}.max_strategies;
};

int do_check(const CheckArgs& args, const std::string& echo) {
  OutcomeMode mode;
  if (args.semantics == "std")
    mode = OutcomeMode::Std;
  else if (args.semantics == "react")
    mode = OutcomeMode::React;
  else
    throw CLI::ValidationError("--semantics must be std or react");
  if (args.strategy != "ir" && args.strategy != "iR-sound")
    throw CLI::ValidationError("--strategy must be ir or iR-sound");
  if (args.strategy == "iR-sound" && mode == OutcomeMode::React)
    throw CLI::ValidationError(
        "--strategy iR-sound does not support react semantics (conjectured only)");

  std::vector<std::string> formulas = args.formulas;
  if (!args.spec_file.empty())
    for (const std::string& f : read_spec_lines(args.spec_file)) formulas.push_back(f);
  if (formulas.empty()) throw CLI::ValidationError("no formula given");

  BuildLimits build_limits{args.max_states};
  CheckLimits check_limits{args.max_strategies};
  LoadedModel lm = load(args.file, /*build=*/args.strategy == "ir", build_limits);

  std::ostringstream report;
  report_header(report, echo);
  std::ostringstream witness_out;

  bool all_satisfied = true;
  for (size_t fi = 0; fi < formulas.size(); ++fi) {
    Formula f = parse_formula(formulas[fi], *lm.amas);
    report << "formula " << fi << ": " << formulas[fi] << "\n";
    if (args.strategy == "ir") {
      Timer t("check");
      CheckResult res = check_ir(*lm.model, f, mode, check_limits);
      report << "verdict: " << (res.verdict ? "True" : "False") << "\n";
      all_satisfied &= res.verdict;
      for (size_t mi = 0; mi < res.modalities.size(); ++mi) {
        const ModalityOutcome& mo = res.modalities[mi];
        report << "modality " << mi << ": " << (mo.holds ? "True" : "False") << " after "
               << mo.strategies_tried << " strategies\n";
        if (mo.witness) {
          witness_out << "# witness for modality " << mi << " of formula " << fi << "\n";
          witness_out << render_strategy(*lm.amas, *mo.witness);
          if (!args.outcome_dot.empty() && fi == 0 && mi == 0) {
            OutcomeGraph og = outcome_subgraph(*lm.model, *mo.witness, mode);
            DotOptions opts;
            opts.name = "outcome";
            write_output(args.outcome_dot, export_dot(og, opts));
          }
        }
      }
    } else {
      Timer t("check-iR-sound");
      SoundResult res = check_iR_sound(lm.amas, f, mode, build_limits, check_limits);
      bool sat = res.verdict == SoundVerdict::SatisfiedSound;
      report << "verdict: " << (sat ? "SatisfiedSound" : "Unknown") << "\n";
      if (res.expanded_model)
        report << "expanded-states: " << res.expanded_model->state_count() << "\n";
      all_satisfied &= sat;
      for (const TransducerIf& z : res.witnesses)
        witness_out << render_transducer(*lm.amas, z, res.expanded->expansions[z.agent]);
    }
  }
  if (lm.model) report_model_sizes(report, *lm.model);
  std::cout << report.str();
  if (!args.witness_file.empty()) write_output(args.witness_file, witness_out.str());

  if (!args.expect.empty()) {
    bool want = args.expect == "true" || args.expect == "True" || args.expect == "1";
    if (want != all_satisfied) return kExitVerdict;
  }
  return kExitOk;
}

struct ReduceArgs {
  std::string file;
  std::string coalition;
  std::string props;
  std::string out;
  std::string report_file;
  std::string dot_file;
  bool validate = false;
  uint64_t max_states = BuildLimits{}.max_states;
};

int do_reduce(const ReduceArgs& args, const std::string& echo) {
  BuildLimits limits{args.max_states};
  auto amas = std::make_shared<Amas>(parse_amas(read_file(args.file)));
  ReductionContext ctx = make_context(*amas, args.coalition, args.props);

  ReducedModel red;
  {
    Timer t("reduce");
    red = reduce(amas, ctx, limits);
  }
  if (!args.out.empty()) write_output(args.out, serialize_model(red.model));
  if (!args.dot_file.empty()) {
    DotOptions opts;
    opts.name = "reduced";
    for (const AmpleDecision& d : red.decisions)
      if (!d.full) opts.highlight.push_back(d.state);
    write_output(args.dot_file, export_dot(red.model, opts));
  }

  std::ostringstream report;
  report_header(report, echo);
  report << "reduced-states: " << red.model.state_count() << "\n";
  report << "reduced-transitions: " << red.model.transition_count() << "\n";

  int exit_code = kExitOk;
  bool need_full = args.validate || !args.report_file.empty();
  if (need_full) {
    Ioicgs full;
    {
      Timer t("build-full");
      full = build_model(amas, limits);
    }
    report << "full-states: " << full.state_count() << "\n";
    report << "full-transitions: " << full.transition_count() << "\n";
    uint32_t ample_states = 0;
    for (const AmpleDecision& d : red.decisions) ample_states += !d.full;
    report << "ample-states: " << ample_states << "\n";
    if (args.validate) {
      uint32_t violations = 0;
      for (const AmpleDecision& d : red.decisions) {
        if (d.full) continue;
        auto g = find_state(full, red.model.states[d.state]);
        if (!g) {
          ++violations;
          continue;
        }
        C1Result c1 = validate_c1(full, ctx, *g, d.events);
        if (!c1.holds) {
          ++violations;
          report << "c1-violation at state " << d.state << "\n";
        }
      }
      report << "c1-violations: " << violations << "\n";
      if (violations) exit_code = kExitVerdict;
    }
  }
  for (const AmpleDecision& d : red.decisions) {
    report << "state " << d.state << ": " << (d.full ? "full" : "ample");
    if (!d.full) report << " agent " << amas->agents[d.agent].name;
    report << " {";
    for (size_t i = 0; i < d.events.size(); ++i)
      report << (i ? "," : "") << amas->events.name(d.events[i]);
    report << "}\n";
  }
  if (!args.report_file.empty())
    write_output(args.report_file, report.str());
  else
    std::cout << report.str();
  return exit_code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"amc: explicit-state model checker for strategic abilities in asynchronous "
               "multi-agent systems"};
  app.require_subcommand(1);
  const std::string echo = command_echo(argc, argv);

  // build
  auto* build_cmd = app.add_subcommand("build", "build the global model of an AMAS");
  std::string build_file, build_out;
  uint64_t build_max_states = BuildLimits{}.max_states;
  build_cmd->add_option("file", build_file, "AMAS source")->required();
  build_cmd->add_option("--out", build_out, "write the canonical model file");
  build_cmd->add_option("--max-states", build_max_states, "state limit");

  // check
  auto* check_cmd = app.add_subcommand("check", "model-check sATL formulas");
  CheckArgs check_args;
  check_cmd->add_option("file", check_args.file, "AMAS source or model file")->required();
  check_cmd->add_option("--formula", check_args.formulas, "formula (repeatable)");
  check_cmd->add_option("--spec", check_args.spec_file, "file with one formula per line");
  check_cmd->add_option("--strategy", check_args.strategy, "ir | iR-sound");
  check_cmd->add_option("--semantics", check_args.semantics, "std | react");
  check_cmd->add_option("--witness", check_args.witness_file, "write witnesses here");
  check_cmd->add_option("--outcome-dot", check_args.outcome_dot,
                        "DOT of the first witness's outcome subgraph");
  check_cmd->add_option("--expect", check_args.expect, "true | false");
  check_cmd->add_option("--max-states", check_args.max_states, "state limit");
  check_cmd->add_option("--max-strategies", check_args.max_strategies, "strategy limit");

  // expand
  auto* expand_cmd = app.add_subcommand("expand", "knowledge-based expansion of an AMAS");
  std::string expand_file, expand_out;
  uint64_t expand_max_states = BuildLimits{}.max_states;
  expand_cmd->add_option("file", expand_file, "AMAS source")->required();
  expand_cmd->add_option("--out", expand_out, "write the expanded AMAS");
  expand_cmd->add_option("--max-states", expand_max_states, "state limit");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "partial-order reduction");
  ReduceArgs reduce_args;
  reduce_cmd->add_option("file", reduce_args.file, "AMAS source")->required();
  reduce_cmd->add_option("--coalition", reduce_args.coalition, "visible agents, comma list");
  reduce_cmd->add_option("--props", reduce_args.props, "observed propositions, comma list or 'all'");
  reduce_cmd->add_flag("--validate-c1", reduce_args.validate, "check every ample set exactly");
  reduce_cmd->add_option("--out", reduce_args.out, "write the reduced model file");
  reduce_cmd->add_option("--report", reduce_args.report_file, "write the reduction report");
  reduce_cmd->add_option("--dot", reduce_args.dot_file, "write DOT with ample states highlighted");
  reduce_cmd->add_option("--max-states", reduce_args.max_states, "state limit");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "benchmark generators");
  auto* gen_asvr_cmd = gen_cmd->add_subcommand("asvr", "voting-with-revoting benchmark");
  uint32_t gen_voters = 2, gen_candidates = 2;
  std::string gen_out;
  gen_asvr_cmd->add_option("--voters", gen_voters, "number of voters")->required();
  gen_asvr_cmd->add_option("--candidates", gen_candidates, "number of candidates")->required();
  gen_asvr_cmd->add_option("--out", gen_out, "output file");
  auto* gen_rand_cmd = gen_cmd->add_subcommand("random", "seeded random AMAS");
  uint64_t gen_seed = env_seed();
  std::string gen_rand_out;
  RandomAmasParams rand_params;
  gen_rand_cmd->add_option("--seed", gen_seed, "seed (default AMC_SEED)");
  gen_rand_cmd->add_option("--max-agents", rand_params.max_agents, "agent bound");
  gen_rand_cmd->add_option("--max-locals", rand_params.max_locals, "local-state bound");
  gen_rand_cmd->add_option("--out", gen_rand_out, "output file");

  // export-dot
  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz export");
  std::string dot_file, dot_out;
  dot_cmd->add_option("file", dot_file, "AMAS source or model file")->required();
  dot_cmd->add_option("--out", dot_out, "output file");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "property oracles");
  auto* stutter_cmd = oracle_cmd->add_subcommand("stutter-equiv", "bounded stuttering check");
  std::string st_full, st_sub, st_props = "all";
  uint32_t st_bound = 8;
  stutter_cmd->add_option("full", st_full, "full model file")->required();
  stutter_cmd->add_option("reduced", st_sub, "reduced model file")->required();
  stutter_cmd->add_option("--bound", st_bound, "lasso bound");
  stutter_cmd->add_option("--props", st_props, "observed propositions");
  auto* sim_cmd = oracle_cmd->add_subcommand("simulate", "bounded-exhaustive simulation check");
  std::string sim_file;
  uint32_t sim_depth = 5;
  sim_cmd->add_option("file", sim_file, "AMAS source")->required();
  sim_cmd->add_option("--depth", sim_depth, "trace depth");
  auto* inter_cmd = oracle_cmd->add_subcommand("intersection", "expanded-state intersection check");
  std::string inter_file;
  inter_cmd->add_option("file", inter_file, "AMAS source")->required();
  auto* cmp_cmd = oracle_cmd->add_subcommand("compare-verdicts", "full vs reduced verdicts");
  std::string cmp_file, cmp_coalition, cmp_props = "all", cmp_spec, cmp_semantics = "std";
  cmp_cmd->add_option("file", cmp_file, "AMAS source")->required();
  cmp_cmd->add_option("--coalition", cmp_coalition, "visible agents");
  cmp_cmd->add_option("--props", cmp_props, "observed propositions");
  cmp_cmd->add_option("--spec", cmp_spec, "formula file")->required();
  cmp_cmd->add_option("--semantics", cmp_semantics, "std | react");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (build_cmd->parsed()) {
      LoadedModel lm = load(build_file, true, BuildLimits{build_max_states});
      if (!lm.model) lm.model = std::make_shared<Ioicgs>(build_model(lm.amas));
      std::ostringstream report;
      report_header(report, echo);
      report_model_sizes(report, *lm.model);
      report << "digest: " << std::hex << model_digest(*lm.model) << std::dec << "\n";
      std::cout << report.str();
      if (!build_out.empty()) write_output(build_out, serialize_model(*lm.model));
      return kExitOk;
    }
    if (check_cmd->parsed()) return do_check(check_args, echo);
    if (expand_cmd->parsed()) {
      auto amas = std::make_shared<Amas>(parse_amas(read_file(expand_file)));
      auto model = std::make_shared<Ioicgs>(build_model(amas, BuildLimits{expand_max_states}));
      ExpandedAmas ex;
      {
        Timer t("expand");
        ex = assemble_expanded(amas, model);
      }
      for (AgentId i = 0; i < amas->agent_count(); ++i)
        std::cerr << "# expansion " << amas->agents[i].name << ": "
                  << ex.expansions[i].knowledge.size() << " knowledge states\n";
      write_output(expand_out, render(*ex.amas));
      return kExitOk;
    }
    if (reduce_cmd->parsed()) return do_reduce(reduce_args, echo);
    if (gen_asvr_cmd->parsed()) {
      write_output(gen_out, gen_asvr(gen_voters, gen_candidates));
      return kExitOk;
    }
    if (gen_rand_cmd->parsed()) {
      Amas amas = gen_random_amas(gen_seed, rand_params);
      write_output(gen_rand_out, render(amas));
      return kExitOk;
    }
    if (dot_cmd->parsed()) {
      LoadedModel lm = load(dot_file, true, BuildLimits{});
      write_output(dot_out, export_dot(*lm.model));
      return kExitOk;
    }
    if (stutter_cmd->parsed()) {
      ParsedModel full = parse_model(read_file(st_full));
      ParsedModel sub = parse_model(read_file(st_sub));
      if (!is_submodel(sub.model, full.model))
        throw std::runtime_error("second model is not a submodel of the first");
      ReductionContext ctx = make_context(*full.amas, "", st_props);
      StutterResult res = stutter_equiv_bounded(full.model, sub.model, ctx, st_bound);
      std::cout << "lassos-checked: " << res.lassos_checked << "\n";
      switch (res.verdict) {
        case StutterVerdict::True: std::cout << "verdict: True\n"; return kExitOk;
        case StutterVerdict::Inconclusive:
          std::cout << "verdict: Inconclusive\n";
          return kExitOk;
        case StutterVerdict::False: {
          std::cout << "verdict: False\nwitness-stem:";
          for (StateId s : res.witness_stem) std::cout << " " << s;
          std::cout << "\nwitness-loop:";
          for (StateId s : res.witness_loop) std::cout << " " << s;
          std::cout << "\n";
          return kExitVerdict;
        }
      }
      return kExitOk;
    }
    if (sim_cmd->parsed()) {
      auto amas = std::make_shared<Amas>(parse_amas(read_file(sim_file)));
      auto model = std::make_shared<Ioicgs>(build_model(amas));
      ExpandedAmas ex = assemble_expanded(amas, model);
      auto mk = std::make_shared<Ioicgs>(build_model(ex.amas));
      bool ok = simulate_check_exhaustive(*model, ex, *mk, sim_depth);
      std::cout << "simulation: " << (ok ? "ok" : "failed") << " up to depth " << sim_depth
                << "\n";
      return ok ? kExitOk : kExitVerdict;
    }
    if (inter_cmd->parsed()) {
      auto amas = std::make_shared<Amas>(parse_amas(read_file(inter_file)));
      auto model = std::make_shared<Ioicgs>(build_model(amas));
      ExpandedAmas ex = assemble_expanded(amas, model);
      auto mk = std::make_shared<Ioicgs>(build_model(ex.amas));
      IntersectionResult res = check_intersection(ex, *mk);
      if (res.holds) {
        std::cout << "intersection: ok over " << mk->state_count() << " expanded states\n";
        return kExitOk;
      }
      std::cout << "intersection: counterexample at expanded state " << *res.counterexample
                << "\n";
      return kExitVerdict;
    }
    if (cmp_cmd->parsed()) {
      auto amas = std::make_shared<Amas>(parse_amas(read_file(cmp_file)));
      ReductionContext ctx = make_context(*amas, cmp_coalition, cmp_props);
      std::vector<Formula> formulas;
      for (const std::string& line : read_spec_lines(cmp_spec))
        formulas.push_back(parse_formula(line, *amas));
      OutcomeMode mode = cmp_semantics == "react" ? OutcomeMode::React : OutcomeMode::Std;
      CompareReport rep = compare_verdicts(amas, ctx, formulas, mode);
      std::cout << "full-states: " << rep.full_states
                << "\nreduced-states: " << rep.reduced_states << "\n";
      for (const auto& row : rep.rows)
        std::cout << (row.agree ? "agree" : "DISAGREE") << " full=" << row.full_verdict
                  << " reduced=" << row.reduced_verdict << " " << row.formula << "\n";
      std::cout << "disagreements: " << rep.disagreements << "\n";
      return rep.disagreements ? kExitVerdict : kExitOk;
    }
  } catch (const LimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace amc::cli
