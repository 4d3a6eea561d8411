#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "gramwalk/oracle.hpp"
#include "gramwalk/walker.hpp"

namespace gramwalk {

/// Rounds to 12 significant digits, the precision of every number we print.
double round12(double x);

/// Keys sorted lexicographically; two runs with equal results give equal text.
std::string run_result_json(const RunResult& r);

/// vertex,count,normalized; highest count first, ties by IRI.
std::string run_result_csv(const RunResult& r);

struct OracleReport {
  std::string mode;  // "chain" or "pagerank"
  std::map<Node, double> normalized;
  std::size_t states = 0;
  bool strongly_connected = false;
  bool aperiodic = false;
  std::size_t period = 1;
  std::size_t closed_classes = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

std::string oracle_json(const OracleReport& r);

std::string comparison_json(const RankComparison& c);

/// Reads the "normalized" object of a run or oracle JSON document. Keys are
/// read back as IRIs, or blank nodes when written as "_:id".
std::map<Node, double> read_distribution(const std::filesystem::path& path);

}  // namespace gramwalk
