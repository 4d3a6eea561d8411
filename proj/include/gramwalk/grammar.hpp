#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gramwalk/graph_store.hpp"

namespace gramwalk {

inline constexpr std::string_view kDefaultRwrNamespace = "urn:rwr:";

/// IRIs of the walker grammar vocabulary under a configurable base.
struct Vocabulary {
  explicit Vocabulary(std::string base = std::string(kDefaultRwrNamespace));

  std::string base;
  std::string context, entry_context, for_resource, has_rules;
  std::string traverse, has_edge, out_edge, in_edge, has_predicate, has_object, has_subject;
  std::string incr_count, submit_counts, reresolve, probability, steps, obeys;
  std::string has_attributes, has_attribute, is, not_;
  // Edge predicate wildcard: matches every predicate.
  std::string any_property;
  // Misspelled forms accepted in lenient mode.
  std::string typo_has_edge, typo_for_resource;
};

/// Direction of a traversal step. None marks an entry record.
enum class Direction : std::uint8_t { None, Out, In };

char direction_symbol(Direction d);

enum class AttributeKind : std::uint8_t { Is, Not };

struct Attribute {
  Node id;
  AttributeKind kind = AttributeKind::Is;
  int steps = 1;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct GrammarEdge {
  Node id;
  Direction direction = Direction::Out;
  Node predicate;
  bool any_predicate = false;
  std::size_t target = 0;  // index into Grammar::contexts()
  friend bool operator==(const GrammarEdge&, const GrammarEdge&) = default;
};

struct TraverseRule {
  std::vector<GrammarEdge> edges;
  friend bool operator==(const TraverseRule&, const TraverseRule&) = default;
};
struct IncrCountRule {
  friend bool operator==(const IncrCountRule&, const IncrCountRule&) = default;
};
struct SubmitCountsRule {
  friend bool operator==(const SubmitCountsRule&, const SubmitCountsRule&) = default;
};
struct ReresolveRule {
  double probability = 0.15;
  int steps = 1;
  bool obeys_is = false;
  bool obeys_not = false;
  bool obeys(AttributeKind k) const { return k == AttributeKind::Is ? obeys_is : obeys_not; }
  friend bool operator==(const ReresolveRule&, const ReresolveRule&) = default;
};

struct Rule {
  Node id;
  std::variant<TraverseRule, IncrCountRule, SubmitCountsRule, ReresolveRule> body;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Context {
  Node id;
  Node for_resource;
  bool is_entry = false;
  std::vector<Rule> rules;  // execution order
  std::vector<Attribute> attributes;
  // Container nodes, kept so that a grammar serializes back to the same triples.
  std::optional<Node> rules_seq;
  std::vector<Node> attribute_sets;

  const TraverseRule* traverse() const;
  friend bool operator==(const Context&, const Context&) = default;
};

/// A walker program: contexts linked by traverse edges.
class Grammar {
 public:
  Grammar() = default;
  explicit Grammar(std::vector<Context> contexts);

  const std::vector<Context>& contexts() const { return contexts_; }
  const Context& context(std::size_t i) const { return contexts_.at(i); }
  std::optional<std::size_t> find(const Node& id) const;
  std::vector<std::size_t> entry_contexts() const;

  /// Largest steps value over all Is/Not attributes and Reresolve rules.
  int max_lookback() const;

  friend bool operator==(const Grammar&, const Grammar&) = default;

 private:
  std::vector<Context> contexts_;
};

class GrammarError : public std::runtime_error {
 public:
  GrammarError(std::string subject, const std::string& message)
      : std::runtime_error(subject + ": " + message), subject_(std::move(subject)) {}
  const std::string& subject() const { return subject_; }

 private:
  std::string subject_;
};

struct GrammarOptions {
  Vocabulary vocabulary = Vocabulary();
  bool lenient = false;
};

struct ParsedGrammar {
  Grammar grammar;
  std::vector<std::string> warnings;
};

ParsedGrammar parse_grammar(const SemanticNetwork& net, const GrammarOptions& options = {});

std::vector<Triple> serialize_grammar(const Grammar& g, const Vocabulary& vocab = Vocabulary{});

enum class Severity : std::uint8_t { Note, Warning, Error };

struct Diagnostic {
  Severity severity;
  std::string subject;
  std::string message;
};

std::string to_string(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Static checks. When `network` is given, resources and predicates named by
/// the grammar are checked against it.
std::vector<Diagnostic> validate_grammar(const Grammar& g, const SemanticNetwork* network = nullptr);

}  // namespace gramwalk
