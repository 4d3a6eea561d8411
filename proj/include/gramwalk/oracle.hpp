#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gramwalk/grammar.hpp"
#include "gramwalk/graph_store.hpp"

namespace gramwalk {

class UnsupportedGrammar : public std::runtime_error {
 public:
  UnsupportedGrammar(std::string context, const std::string& message)
      : std::runtime_error(context.empty() ? message : context + ": " + message), context_(std::move(context)) {}
  const std::string& context() const { return context_; }

 private:
  std::string context_;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One remembered position of a chain state: the vertex and the grammar
/// record that placed the walker there.
struct WindowEntry {
  TermId vertex = kNoTerm;
  std::size_t context = 0;
  const GrammarEdge* edge = nullptr;
  Direction direction = Direction::None;
  friend auto operator<=>(const WindowEntry&, const WindowEntry&) = default;
};

/// A walker arriving in a context: the last (up to k+1) positions, newest last.
struct ChainState {
  std::vector<WindowEntry> window;
  std::size_t context() const { return window.back().context; }
  TermId vertex() const { return window.back().vertex; }
  friend auto operator<=>(const ChainState&, const ChainState&) = default;
};

/// Finite Markov chain equivalent to a walker program on one network. One
/// chain step is one full execution of a context's rule sequence.
struct ExpandedChain {
  const SemanticNetwork* network = nullptr;
  const Grammar* grammar = nullptr;
  int memory_bound = 0;
  std::vector<ChainState> states;
  std::vector<std::vector<std::pair<std::size_t, double>>> transitions;
  // Expected IncrCount hits per vertex during one execution from the state.
  std::vector<std::vector<std::pair<TermId, double>>> rewards;
  std::vector<bool> counted;  // context bears IncrCount
  std::vector<double> initial;

  std::size_t closed_classes = 0;
  std::size_t period = 1;  // lcm of the closed classes' periods
  bool strongly_connected = false;
  bool aperiodic() const { return period == 1; }

  std::size_t size() const { return states.size(); }
};

struct ExpandOptions {
  std::size_t max_states = 100'000;
};

ExpandedChain expand_chain(const SemanticNetwork& net, const Grammar& g, const ExpandOptions& options = {});

/// Sparse row-stochastic chain used by the solvers.
using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

struct PowerResult {
  std::vector<double> distribution;
  std::size_t iterations = 0;
  bool converged = false;
  bool periodic = false;
};

struct PowerOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10'000;
  std::optional<std::vector<double>> start;  // uniform when absent
};

/// x <- xP until the L1 change drops below tolerance. Periodic chains are
/// iterated through their lazy version (I+P)/2, which has the same
/// stationary distribution.
PowerResult power_iteration(const SparseRows& rows, const PowerOptions& options = {});

/// Period of each closed communicating class, in order of discovery.
std::vector<std::size_t> closed_class_periods(const SparseRows& rows);

struct ChainSolution {
  std::vector<double> state_distribution;
  std::map<Node, double> distribution;  // normalized expected counts
  PowerResult power;
};

ChainSolution solve_chain(const ExpandedChain& chain, const PowerOptions& options = {});

/// Directed weighted network; parallel edges are merged by summing weights.
struct WeightedNetwork {
  std::vector<Node> order;
  std::vector<std::map<std::size_t, double>> edges;
};

struct ImpliedNetwork {
  WeightedNetwork network;
  // Chain-step lengths of the counted-to-counted paths that were collapsed.
  std::vector<std::size_t> path_lengths;
  // Stationary mass of the expanded chain restricted to counted states and
  // projected onto their vertices, normalized.
  std::map<Node, double> chain_mass;
};

/// Collapses paths between consecutive counted states. Parallel paths are
/// summed; states sharing a vertex are merged with weights proportional to
/// their long-run frequency.
ImpliedNetwork implied_network(const ExpandedChain& chain, const PowerOptions& options = {});

/// Row-stochastic matrix in a fixed vertex order.
struct TransitionMatrix {
  std::vector<Node> order;
  std::vector<std::vector<double>> entries;
  std::size_t size() const { return order.size(); }
};

/// Rows are outgoing weights normalized; rows without outgoing weight are
/// uniform over all vertices.
TransitionMatrix transition_matrix(const WeightedNetwork& network);

/// delta * A + (1 - delta) * uniform.
TransitionMatrix blend_teleport(const TransitionMatrix& a, double delta);

PowerResult power_iteration(const TransitionMatrix& m, const PowerOptions& options = {});

SparseRows to_rows(const TransitionMatrix& m);

/// Every triple between two vertices, as an undirected edge with its label
/// ignored. A walker using any edge in either direction sees this network.
WeightedNetwork undirected_network(const SemanticNetwork& net);

/// Undirected PageRank over all vertices of `net`.
std::map<Node, double> undirected_pagerank(const SemanticNetwork& net, double delta, const PowerOptions& options = {});

struct RankComparison {
  double l1 = 0;
  double l2 = 0;
  bool rank_agreement = true;
};

/// Distances over the union of supports. Rank agreement: no pair of entries
/// is ordered one way by more than `tie_tolerance` in one distribution and
/// the other way (or tied) in the other.
RankComparison compare_rankings(const std::map<Node, double>& a, const std::map<Node, double>& b,
                                double tie_tolerance = 0);

/// Descending order, ties broken by term order.
std::vector<Node> ranking(const std::map<Node, double>& d);

}  // namespace gramwalk
