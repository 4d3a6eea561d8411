#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gramwalk::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDiagnostics = 1;  // grammar/diagnostic errors, unsupported inputs
inline constexpr int kIoError = 2;      // unreadable files, parse errors, bad usage

struct CommandSpec {
  std::string command;  // run, oracle, compare, validate, gen-example
  std::vector<std::string> graph_paths;
  std::string grammar_path;
  std::string output_path;
  std::vector<std::string> inputs;  // compare: two result files
  std::string example_name;         // gen-example: a name or "all"

  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> max_steps;
  std::optional<std::size_t> walkers;
  std::optional<std::uint64_t> check_every;
  double delta = 0.85;
  double tie_tolerance = 0;  // compare: rank differences up to this count as ties
  std::string mode = "chain";  // oracle: chain or pagerank
  std::string rwr_namespace;   // empty: default vocabulary base
  bool lenient = false;
};

int run_command(const CommandSpec& spec, std::ostream& out, std::ostream& err);

/// Parses argv and runs the command.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gramwalk::cli
