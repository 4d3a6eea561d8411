#include "gramwalk/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "gramwalk/fixtures.hpp"
#include "gramwalk/grammar.hpp"
#include "gramwalk/oracle.hpp"
#include "gramwalk/result_io.hpp"
#include "gramwalk/triple_io.hpp"
#include "gramwalk/walker.hpp"

namespace gramwalk::cli {

namespace {

// Failures that map straight to an exit code.
struct Exit {
  int code;
  std::string message;
};

SemanticNetwork load_graphs(const std::vector<std::string>& paths) {
  if (paths.empty()) throw Exit{kIoError, "--graph is required"};
  SemanticNetwork net;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    ParseOptions options;
    options.blank_scope = "g" + std::to_string(i);
    auto triples = load_triple_file(paths[i], options);
    net.add_batch(triples);
  }
  return net;
}

Vocabulary vocabulary(const CommandSpec& spec) {
  return spec.rwr_namespace.empty() ? Vocabulary() : Vocabulary(spec.rwr_namespace);
}

Grammar load_grammar(const CommandSpec& spec, std::ostream& err) {
  if (spec.grammar_path.empty()) throw Exit{kIoError, "--grammar is required"};
  ParseOptions options;
  options.blank_scope = "grammar";
  SemanticNetwork gnet;
  auto triples = load_triple_file(spec.grammar_path, options);
  gnet.add_batch(triples);
  GrammarOptions go{vocabulary(spec), spec.lenient};
  try {
    ParsedGrammar parsed = parse_grammar(gnet, go);
    for (const auto& w : parsed.warnings) err << "warning: " << w << '\n';
    return std::move(parsed.grammar);
  } catch (const GrammarError& e) {
    throw Exit{kDiagnostics, spec.grammar_path + ": error: " + e.what()};
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Exit{kIoError, "cannot write " + path.string()};
  f << text;
  if (!f) throw Exit{kIoError, "cannot write " + path.string()};
}

void emit(const CommandSpec& spec, const std::string& text, std::ostream& out) {
  if (spec.output_path.empty() || spec.output_path == "-") {
    out << text;
  } else {
    write_file(spec.output_path, text);
  }
}

std::uint64_t resolve_seed(const CommandSpec& spec) {
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv("GRAMWALK_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || std::string_view(env).starts_with("-")) {
      throw Exit{kIoError, std::string("GRAMWALK_SEED is not an unsigned integer: ") + env};
    }
    return v;
  }
  return RunConfig{}.seed;
}

int print_diagnostics(const std::vector<Diagnostic>& ds, std::ostream& out) {
  for (const auto& d : ds) out << to_string(d) << '\n';
  return has_errors(ds) ? kDiagnostics : kOk;
}

int cmd_run(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  SemanticNetwork net = load_graphs(spec.graph_paths);
  Grammar g = load_grammar(spec, err);
  auto ds = validate_grammar(g, &net);
  if (has_errors(ds)) return print_diagnostics(ds, err);
  for (const auto& d : ds) {
    if (d.severity == Severity::Warning) err << to_string(d) << '\n';
  }
  RunConfig cfg;
  cfg.seed = resolve_seed(spec);
  if (spec.epsilon) cfg.epsilon = *spec.epsilon;
  if (spec.max_steps) cfg.max_steps = *spec.max_steps;
  if (spec.walkers) cfg.walkers = *spec.walkers;
  if (spec.check_every) cfg.check_every = *spec.check_every;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw Exit{kIoError, e.what()};
  }
  RunResult r;
  try {
    r = run(net, g, cfg);
  } catch (const UnrunnableGrammar& e) {
    throw Exit{kDiagnostics, std::string("error: ") + e.what()};
  }
  emit(spec, run_result_json(r), out);
  if (!spec.output_path.empty() && spec.output_path != "-") {
    std::filesystem::path csv = spec.output_path;
    csv.replace_extension(".csv");
    write_file(csv, run_result_csv(r));
  }
  if (!r.converged) err << "note: not converged after " << r.steps << " steps\n";
  return kOk;
}

int cmd_oracle(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  SemanticNetwork net = load_graphs(spec.graph_paths);
  OracleReport report;
  report.mode = spec.mode;
  if (spec.mode == "pagerank") {
    if (!(spec.delta > 0 && spec.delta <= 1)) throw Exit{kIoError, "--delta must lie in (0, 1]"};
    auto w = undirected_network(net);
    if (w.order.empty()) throw Exit{kDiagnostics, "error: network has no vertices"};
    auto c = blend_teleport(transition_matrix(w), spec.delta);
    auto p = power_iteration(c);
    for (std::size_t i = 0; i < c.size(); ++i) report.normalized[c.order[i]] = p.distribution[i];
    report.states = c.size();
    auto periods = closed_class_periods(to_rows(c));
    report.closed_classes = periods.size();
    report.period = periods.empty() ? 1 : periods.front();
    report.strongly_connected = periods.size() == 1;
    report.aperiodic = !p.periodic;
    report.iterations = p.iterations;
    report.converged = p.converged;
  } else if (spec.mode == "chain") {
    Grammar g = load_grammar(spec, err);
    auto ds = validate_grammar(g, &net);
    if (has_errors(ds)) return print_diagnostics(ds, err);
    try {
      ExpandedChain chain = expand_chain(net, g);
      ChainSolution sol = solve_chain(chain);
      report.normalized = sol.distribution;
      report.states = chain.size();
      report.strongly_connected = chain.strongly_connected;
      report.aperiodic = chain.aperiodic();
      report.period = chain.period;
      report.closed_classes = chain.closed_classes;
      report.iterations = sol.power.iterations;
      report.converged = sol.power.converged;
    } catch (const UnsupportedGrammar& e) {
      throw Exit{kDiagnostics, std::string("error: unsupported grammar: ") + e.what()};
    } catch (const CapacityError& e) {
      throw Exit{kDiagnostics, std::string("error: ") + e.what()};
    }
  } else {
    throw Exit{kIoError, "unknown oracle mode '" + spec.mode + "' (expected chain or pagerank)"};
  }
  emit(spec, oracle_json(report), out);
  return kOk;
}

int cmd_compare(const CommandSpec& spec, std::ostream& out) {
  if (spec.inputs.size() != 2) throw Exit{kIoError, "compare needs exactly two result files"};
  auto a = read_distribution(spec.inputs[0]);
  auto b = read_distribution(spec.inputs[1]);
  emit(spec, comparison_json(compare_rankings(a, b, spec.tie_tolerance)), out);
  return kOk;
}

int cmd_validate(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  SemanticNetwork net = load_graphs(spec.graph_paths);
  Grammar g = load_grammar(spec, err);
  auto ds = validate_grammar(g, &net);
  int code = print_diagnostics(ds, out);
  if (code == kOk) out << "ok: " << g.contexts().size() << " contexts, " << g.entry_contexts().size() << " entry\n";
  return code;
}

int cmd_gen_example(const CommandSpec& spec, std::ostream& out) {
  std::vector<fixtures::Example> selected;
  if (spec.example_name == "all") {
    selected = fixtures::examples();
  } else if (auto e = fixtures::example(spec.example_name)) {
    selected.push_back(*e);
  } else {
    std::string names;
    for (const auto& e : fixtures::examples()) names += " " + e.name;
    throw Exit{kIoError, "unknown example '" + spec.example_name + "'; known:" + names + " all"};
  }
  std::filesystem::path dir = spec.output_path.empty() ? "." : spec.output_path;
  for (const auto& e : selected) {
    auto path = dir / e.file_name;
    write_file(path, serialize_triples(parse_triple_list(e.text)));
    out << "wrote " << path.string() << '\n';
  }
  return kOk;
}

}  // namespace

int run_command(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.command == "run") return cmd_run(spec, out, err);
    if (spec.command == "oracle") return cmd_oracle(spec, out, err);
    if (spec.command == "compare") return cmd_compare(spec, out);
    if (spec.command == "validate") return cmd_validate(spec, out, err);
    if (spec.command == "gen-example") return cmd_gen_example(spec, out);
    err << "error: unknown command '" << spec.command << "'\n";
    return kIoError;
  } catch (const Exit& e) {
    err << e.message << '\n';
    return e.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kIoError;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grammar-constrained random walker ranking on semantic networks"};
  app.require_subcommand(1);
  CommandSpec spec;

  auto inputs = [&](CLI::App* sub, bool grammar_required) {
    sub->add_option("--graph", spec.graph_paths, "network triple file (repeatable)")->required();
    auto* g = sub->add_option("--grammar", spec.grammar_path, "grammar triple file");
    if (grammar_required) g->required();
    sub->add_option("--namespace", spec.rwr_namespace, "base IRI of the grammar vocabulary");
    sub->add_flag("--lenient", spec.lenient, "accept known misspellings of grammar properties");
  };

  auto* run_cmd = app.add_subcommand("run", "estimate ranks with grammar-based random walkers");
  inputs(run_cmd, true);
  run_cmd->add_option("--out", spec.output_path, "result JSON path (a .csv is written next to it)");
  run_cmd->add_option("--seed", spec.seed, "RNG seed (default: $GRAMWALK_SEED, else 1)");
  run_cmd->add_option("--epsilon", spec.epsilon, "convergence threshold on the L2 change");
  run_cmd->add_option("--max-steps", spec.max_steps, "step budget across all walkers");
  run_cmd->add_option("--walkers", spec.walkers, "number of concurrent walkers");
  run_cmd->add_option("--check-every", spec.check_every, "test convergence every N submits");

  auto* oracle_cmd = app.add_subcommand("oracle", "exact stationary distribution for small inputs");
  inputs(oracle_cmd, false);
  oracle_cmd->add_option("--out", spec.output_path, "output JSON path");
  oracle_cmd->add_option("--mode", spec.mode, "chain (grammar x graph expansion) or pagerank (undirected)")
      ->check(CLI::IsMember({"chain", "pagerank"}));
  oracle_cmd->add_option("--delta", spec.delta, "PageRank blend weight for --mode pagerank");

  auto* compare_cmd = app.add_subcommand("compare", "distances between two result files");
  compare_cmd->add_option("files", spec.inputs, "two JSON result files")->required()->expected(2);
  compare_cmd->add_option("--out", spec.output_path, "output JSON path");
  compare_cmd->add_option("--tie-tolerance", spec.tie_tolerance, "differences up to this size do not order two vertices")
      ->check(CLI::NonNegativeNumber);

  auto* validate_cmd = app.add_subcommand("validate", "check a grammar against a network");
  inputs(validate_cmd, true);

  auto* gen_cmd = app.add_subcommand("gen-example", "write a shipped example network or grammar");
  gen_cmd->add_option("name", spec.example_name, "example name or 'all'")->required();
  gen_cmd->add_option("--out", spec.output_path, "output directory (default: current directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kIoError;
  }
  spec.command = app.get_subcommands().front()->get_name();
  return run_command(spec, out, err);
}

}  // namespace gramwalk::cli
