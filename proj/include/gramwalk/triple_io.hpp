#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gramwalk/graph_store.hpp"

namespace gramwalk {

/// Malformed input. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

struct ParseOptions {
  // Prepended to blank node ids so that two documents loaded into one network
  // never share a blank node.
  std::string blank_scope;
  // Prefixes available without an @prefix line.
  std::map<std::string, std::string> prefixes;
};

// Line format, one statement per line:
//   @prefix name: <base> .
//   subject predicate object .      # comment
// where terms are <iri>, name:local, _:id, "lexical", or "lexical"^^datatype.
std::vector<Triple> parse_triple_list(std::string_view text, const ParseOptions& options = {});
SemanticNetwork parse_triples(std::string_view text, const ParseOptions& options = {});

/// Reads and parses a file. ParseError messages name the path.
std::vector<Triple> load_triple_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// One line per triple, full IRIs, sorted, so that equal sets serialize
/// identically.
std::string serialize_triples(std::vector<Triple> triples);
std::string serialize(const SemanticNetwork& net);

std::string format_term(const Node& n);

}  // namespace gramwalk
