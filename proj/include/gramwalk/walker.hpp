#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gramwalk/grammar.hpp"
#include "gramwalk/graph_store.hpp"
#include "gramwalk/rng.hpp"

namespace gramwalk {

/// One position of the walker's path in the network: the vertex and how it
/// was reached. Entry records carry no label and Direction::None.
struct PathRecord {
  TermId vertex = kNoTerm;
  TermId label = kNoTerm;
  Direction direction = Direction::None;
  friend bool operator==(const PathRecord&, const PathRecord&) = default;
};

/// One position of the walker's path in the grammar. `edge` is null for
/// entry records.
struct GrammarRecord {
  std::size_t context = 0;
  const GrammarEdge* edge = nullptr;
  Direction direction = Direction::None;
  friend bool operator==(const GrammarRecord&, const GrammarRecord&) = default;
};

using Counts = std::map<TermId, std::uint64_t>;
using Distribution = std::map<TermId, double>;

/// Walker state. Histories are indexed by logical position 0..length()-1;
/// records older than the retention window may be dropped, which is safe
/// because no rule looks further back than the grammar's largest step count.
class WalkerState {
 public:
  WalkerState() = default;
  WalkerState(std::size_t context, TermId vertex, std::size_t retention);

  std::size_t length() const { return dropped_ + path_.size(); }
  const PathRecord& path(std::size_t index) const { return path_.at(index - dropped_); }
  PathRecord& path(std::size_t index) { return path_.at(index - dropped_); }
  const GrammarRecord& grammar_path(std::size_t index) const { return grammar_path_.at(index - dropped_); }
  bool retained(std::size_t index) const { return index >= dropped_ && index < length(); }

  TermId vertex() const { return path_.back().vertex; }
  std::size_t context() const { return grammar_path_.back().context; }

  void push(const PathRecord& g, const GrammarRecord& psi);

  Counts local_counts;
  std::size_t rule_cursor = 0;

 private:
  std::deque<PathRecord> path_;
  std::deque<GrammarRecord> grammar_path_;
  std::size_t dropped_ = 0;
  std::size_t retention_ = 0;  // 0 keeps everything
};

class UnrunnableGrammar : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar resources resolved against one network. Immutable; shared by all
/// walkers of a run.
class CompiledGrammar {
 public:
  CompiledGrammar(const SemanticNetwork& net, const Grammar& grammar);

  const SemanticNetwork& network() const { return *net_; }
  const Grammar& grammar() const { return *grammar_; }

  /// Vertices that can resolve context c, sorted.
  const std::vector<TermId>& resolutions(std::size_t c) const { return resolutions_.at(c); }
  bool resolves(std::size_t c, TermId v) const;
  bool predicate_matches(const GrammarEdge& e, TermId predicate) const;
  /// Number of history records kept per walker.
  std::size_t retention() const { return retention_; }

 private:
  const SemanticNetwork* net_;
  const Grammar* grammar_;
  std::vector<std::optional<TermId>> resource_ids_;
  std::vector<std::vector<TermId>> resolutions_;
  std::map<const GrammarEdge*, std::optional<TermId>> predicate_ids_;
  std::size_t retention_ = 1;
};

WalkerState spawn_walker(const CompiledGrammar& program, Rng& rng);

struct ConstraintSets {
  std::vector<TermId> excluded;  // X: vertices the next position must not be
  std::vector<TermId> required;  // O: if non-empty, the next position must be one of these
};

/// Is/Not sets for the position the walker would occupy in `next_context`.
/// steps m refers to the record m positions before that new position.
ConstraintSets constraint_sets(const WalkerState& w, const Context& next_context);

struct Candidate {
  TripleRef triple;
  const GrammarEdge* edge = nullptr;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

std::vector<Candidate> traversal_candidates(const CompiledGrammar& program, const WalkerState& w,
                                            const TraverseRule& rule);

void apply_traverse(WalkerState& w, const Candidate& chosen);

void incr_count(WalkerState& w);

/// Adds the local counts into `global` and clears them. Returns what was added.
Counts submit_counts(WalkerState& w, Counts& global);

/// Vertices of a re-resolved window, oldest first (steps+1 of them), with the
/// label/direction used to reach each one from its predecessor.
using Path = std::vector<PathRecord>;

/// All paths matching the grammar window of the last `rule.steps` traversals.
/// Empty if the history is shorter than the window.
std::vector<Path> reresolve_paths(const CompiledGrammar& program, const WalkerState& w, const ReresolveRule& rule);

/// Overwrites the trailing window of the network path. The first record keeps
/// its original incoming label; grammar history and local counts are untouched.
void apply_reresolve(WalkerState& w, const Path& q);

enum class StepOutcome : std::uint8_t { Moved, Counted, Submitted, Reresolved, Halted };

const char* to_string(StepOutcome o);

struct StepResult {
  StepOutcome outcome;
  Counts submitted;  // for Submitted
  Counts discarded;  // for Halted: local counts dropped with the walker
  bool teleported = false;
};

/// Executes the rule under the cursor. On halt the walker is replaced in place
/// by a fresh one and `global` is left untouched.
StepResult step(const CompiledGrammar& program, WalkerState& w, Counts& global, Rng& rng);

Distribution normalize(const Counts& counts);

/// Euclidean distance over the union of supports, missing entries read as 0.
double l2_distance(const Distribution& a, const Distribution& b);
bool has_converged(const Distribution& prev, const Distribution& curr, double epsilon);

struct RunConfig {
  double epsilon = 0.001;
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 5'000'000;
  std::uint64_t check_every = 100;
  std::size_t walkers = 1;

  void validate() const;
};

struct RunResult {
  std::map<Node, std::uint64_t> counts;
  std::map<Node, double> normalized;
  std::uint64_t steps = 0;
  std::uint64_t submits = 0;
  bool converged = false;
};

struct StepEvent {
  std::size_t walker;
  const WalkerState& state;  // after the step
  const StepResult& result;
};

/// Instrumentation. Called from the walker's thread while it holds the run
/// lock, so observers need no synchronization of their own.
using StepObserver = std::function<void(const StepEvent&)>;

RunResult run(const SemanticNetwork& net, const Grammar& g, const RunConfig& cfg, const StepObserver& observer = {});

/// Single-walker run starting from a given state instead of a random entry.
RunResult run_from(const SemanticNetwork& net, const Grammar& g, const RunConfig& cfg, WalkerState initial,
                   const StepObserver& observer = {});

}  // namespace gramwalk
