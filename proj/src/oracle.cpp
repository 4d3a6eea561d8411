#include "gramwalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace gramwalk {

namespace {

// Everything here scans the triple list directly instead of using the
// network's adjacency indices, so the chain does not share code paths with
// the walker it is used to check.
class Expander {
 public:
  Expander(const SemanticNetwork& net, const Grammar& g, const ExpandOptions& options)
      : net_(net), g_(g), options_(options), k_(static_cast<std::size_t>(g.max_lookback())) {
    for (const auto& c : g.contexts()) resource_.push_back(net.lookup(c.for_resource));
  }

  ExpandedChain build() {
    check_supported();
    ExpandedChain chain;
    chain.network = &net_;
    chain.grammar = &g_;
    chain.memory_bound = static_cast<int>(k_);

    std::vector<std::pair<std::size_t, std::vector<TermId>>> entries;
    for (std::size_t c : g_.entry_contexts()) {
      std::vector<TermId> vs;
      for (TermId v : net_.vertices()) {
        if (resolves(c, v)) vs.push_back(v);
      }
      if (!vs.empty()) entries.emplace_back(c, std::move(vs));
    }
    if (entries.empty()) throw UnsupportedGrammar("", "no entry context has an instance in the network");

    std::map<std::size_t, double> initial;
    for (const auto& [c, vs] : entries) {
      for (TermId v : vs) {
        ChainState s{{WindowEntry{v, c, nullptr, Direction::None}}};
        initial[intern(s)] += 1.0 / static_cast<double>(entries.size()) / static_cast<double>(vs.size());
      }
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
      auto [next, reward] = execute(states_[i]);
      transitions_.push_back(std::move(next));
      rewards_.push_back(std::move(reward));
    }

    chain.states = std::move(states_);
    chain.transitions = std::move(transitions_);
    chain.rewards = std::move(rewards_);
    for (const auto& s : chain.states) {
      const auto& rules = g_.context(s.context()).rules;
      chain.counted.push_back(std::any_of(rules.begin(), rules.end(), [](const Rule& r) {
        return std::holds_alternative<IncrCountRule>(r.body);
      }));
    }
    chain.initial.assign(chain.states.size(), 0.0);
    for (const auto& [i, p] : initial) chain.initial[i] = p;
    return chain;
  }

 private:
  using Branches = std::map<ChainState, double>;

  void check_supported() const {
    for (const auto& c : g_.contexts()) {
      for (const auto& r : c.rules) {
        const auto* rr = std::get_if<ReresolveRule>(&r.body);
        if (rr && (rr->obeys_is || rr->obeys_not)) {
          throw UnsupportedGrammar(to_string(c.id), "Reresolve that obeys attributes has no exact chain model");
        }
      }
    }
  }

  bool resolves(std::size_t c, TermId v) const {
    return resource_[c] && net_.is_vertex(v) && net_.is_instance_of(v, *resource_[c]);
  }

  bool predicate_matches(const GrammarEdge& e, TermId p) const {
    if (e.any_predicate) return true;
    auto id = net_.lookup(e.predicate);
    return id && net_.is_subproperty_of(p, *id);
  }

  std::size_t intern(const ChainState& s) {
    auto [it, fresh] = index_.emplace(s, states_.size());
    if (fresh) {
      if (states_.size() >= options_.max_states) {
        throw CapacityError("expanded chain exceeds " + std::to_string(options_.max_states) + " states");
      }
      states_.push_back(s);
    }
    return it->second;
  }

  // (other end, triple predicate) pairs for every triple touching `a` in the
  // given direction whose predicate fits `e`.
  std::vector<TermId> neighbours(TermId a, const GrammarEdge& e, Direction d) const {
    std::vector<TermId> out;
    for (const auto& t : net_.triples()) {
      TermId here = d == Direction::Out ? t.subject : t.object;
      TermId there = d == Direction::Out ? t.object : t.subject;
      if (here == a && net_.is_vertex(there) && predicate_matches(e, t.predicate)) out.push_back(there);
    }
    return out;
  }

  std::pair<std::vector<std::pair<std::size_t, double>>, std::vector<std::pair<TermId, double>>> execute(
      ChainState s) {
    const Context& ctx = g_.context(s.context());
    const std::string name = to_string(ctx.id);
    Branches branches{{std::move(s), 1.0}};
    std::map<TermId, double> reward;
    for (const auto& rule : ctx.rules) {
      if (const auto* t = std::get_if<TraverseRule>(&rule.body)) {
        std::map<std::size_t, double> next;
        for (const auto& [b, p] : branches) {
          auto moves = traverse(b, *t);
          if (moves.empty()) throw UnsupportedGrammar(name, "walkers can halt here (no traversal candidates)");
          for (auto& m : moves) next[intern(m)] += p / static_cast<double>(moves.size());
        }
        return {{next.begin(), next.end()}, {reward.begin(), reward.end()}};
      }
      if (std::holds_alternative<IncrCountRule>(rule.body)) {
        for (const auto& [b, p] : branches) reward[b.vertex()] += p;
      } else if (const auto* rr = std::get_if<ReresolveRule>(&rule.body)) {
        branches = reresolve(branches, *rr);
      }
    }
    throw UnsupportedGrammar(name, "walkers halt here (rules end without Traverse)");
  }

  std::vector<ChainState> traverse(const ChainState& s, const TraverseRule& rule) const {
    std::vector<ChainState> out;
    const auto& w = s.window;
    for (const auto& e : rule.edges) {
      std::set<TermId> excluded, required;
      for (const auto& a : g_.context(e.target).attributes) {
        auto m = static_cast<std::size_t>(a.steps);
        if (m < 1 || m > w.size()) continue;
        (a.kind == AttributeKind::Not ? excluded : required).insert(w[w.size() - m].vertex);
      }
      for (TermId b : neighbours(s.vertex(), e, e.direction)) {
        if (!resolves(e.target, b) || excluded.contains(b)) continue;
        if (!required.empty() && !required.contains(b)) continue;
        ChainState n = s;
        n.window.push_back({b, e.target, &e, e.direction});
        if (n.window.size() > k_ + 1) n.window.erase(n.window.begin());
        out.push_back(std::move(n));
      }
    }
    return out;
  }

  Branches reresolve(const Branches& in, const ReresolveRule& rule) const {
    Branches out;
    const auto m = static_cast<std::size_t>(rule.steps);
    for (const auto& [s, p] : in) {
      if (s.window.size() < m + 1) {
        out[s] += p;
        continue;
      }
      const std::size_t first = s.window.size() - m - 1;
      std::vector<std::vector<TermId>> paths;
      std::vector<TermId> current;
      auto extend = [&](auto&& self, std::size_t j) -> void {
        if (j == s.window.size()) {
          paths.push_back(current);
          return;
        }
        const WindowEntry& r = s.window[j];
        for (TermId b : neighbours(current.back(), *r.edge, r.direction)) {
          if (!resolves(r.context, b)) continue;
          current.push_back(b);
          self(self, j + 1);
          current.pop_back();
        }
      };
      for (TermId v : net_.vertices()) {
        if (!resolves(s.window[first].context, v)) continue;
        current.assign(1, v);
        extend(extend, first + 1);
      }
      out[s] += p * (1.0 - rule.probability);
      for (const auto& q : paths) {
        ChainState n = s;
        for (std::size_t j = 0; j < q.size(); ++j) n.window[first + j].vertex = q[j];
        out[n] += p * rule.probability / static_cast<double>(paths.size());
      }
    }
    return out;
  }

  const SemanticNetwork& net_;
  const Grammar& g_;
  ExpandOptions options_;
  std::size_t k_;
  std::vector<std::optional<TermId>> resource_;
  std::map<ChainState, std::size_t> index_;
  std::vector<ChainState> states_;
  std::vector<std::vector<std::pair<std::size_t, double>>> transitions_;
  std::vector<std::vector<std::pair<TermId, double>>> rewards_;
};

// Strongly connected components (iterative Tarjan). Returns component id per
// node; ids are assigned in reverse topological order.
std::vector<std::size_t> components(const SparseRows& rows, std::size_t& count) {
  const std::size_t n = rows.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge)
  std::size_t next_index = 0;
  count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e == 0 && index[v] == unset) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (e < rows[v].size()) {
        std::size_t u = rows[v][e++].first;
        if (index[u] == unset) {
          call.emplace_back(u, 0);
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], index[u]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t u;
        do {
          u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          comp[u] = count;
        } while (u != v);
        ++count;
      }
      std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }
  return comp;
}

std::vector<std::vector<std::size_t>> closed_classes(const SparseRows& rows) {
  std::size_t count = 0;
  auto comp = components(rows, count);
  std::vector<bool> closed(count, true);
  for (std::size_t v = 0; v < rows.size(); ++v) {
    for (const auto& [u, p] : rows[v]) {
      if (p > 0 && comp[u] != comp[v]) closed[comp[v]] = false;
    }
  }
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (closed[comp[v]]) members[comp[v]].push_back(v);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& m : members) {
    if (!m.empty()) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t class_period(const SparseRows& rows, const std::vector<std::size_t>& members) {
  std::map<std::size_t, std::size_t> level;
  std::deque<std::size_t> queue{members.front()};
  level[members.front()] = 0;
  std::size_t g = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (const auto& [u, p] : rows[v]) {
      if (p <= 0) continue;
      auto it = level.find(u);
      if (it == level.end()) {
        level[u] = level[v] + 1;
        queue.push_back(u);
      } else {
        auto diff = static_cast<long long>(level[v]) + 1 - static_cast<long long>(it->second);
        g = std::gcd(g, static_cast<std::size_t>(std::llabs(diff)));
      }
    }
  }
  return g == 0 ? 1 : g;
}

}  // namespace

std::vector<std::size_t> closed_class_periods(const SparseRows& rows) {
  std::vector<std::size_t> out;
  for (const auto& c : closed_classes(rows)) out.push_back(class_period(rows, c));
  return out;
}

ExpandedChain expand_chain(const SemanticNetwork& net, const Grammar& g, const ExpandOptions& options) {
  ExpandedChain chain = Expander(net, g, options).build();
  auto classes = closed_classes(chain.transitions);
  chain.closed_classes = classes.size();
  chain.period = 1;
  for (const auto& c : classes) chain.period = std::lcm(chain.period, class_period(chain.transitions, c));

  // Connected means one closed class that counts every vertex the chain can count at all.
  std::set<TermId> all, recurrent;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    for (const auto& [v, r] : chain.rewards[s]) all.insert(v);
  }
  if (classes.size() == 1) {
    for (std::size_t s : classes.front()) {
      for (const auto& [v, r] : chain.rewards[s]) recurrent.insert(v);
    }
  }
  chain.strongly_connected = classes.size() == 1 && all == recurrent;
  return chain;
}

PowerResult power_iteration(const SparseRows& rows, const PowerOptions& options) {
  const std::size_t n = rows.size();
  PowerResult r;
  if (n == 0) {
    r.converged = true;
    return r;
  }
  if (!(options.tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  for (std::size_t p : closed_class_periods(rows)) r.periodic = r.periodic || p > 1;

  std::vector<double> x = options.start.value_or(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  if (x.size() != n) throw std::invalid_argument("start vector has the wrong size");
  std::vector<double> y(n);
  const double keep = r.periodic ? 0.5 : 0.0;
  while (r.iterations < options.max_iterations) {
    for (std::size_t i = 0; i < n; ++i) y[i] = keep * x[i];
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (const auto& [j, p] : rows[i]) y[j] += (1.0 - keep) * x[i] * p;
    }
    double diff = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      diff += std::abs(y[i] - x[i]);
      total += y[i];
    }
    for (auto& v : y) v /= total;
    x.swap(y);
    ++r.iterations;
    if (diff < options.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.distribution = std::move(x);
  return r;
}

ChainSolution solve_chain(const ExpandedChain& chain, const PowerOptions& options) {
  ChainSolution out;
  PowerOptions opts = options;
  if (!opts.start) opts.start = chain.initial;
  out.power = power_iteration(chain.transitions, opts);
  out.state_distribution = out.power.distribution;
  std::map<TermId, double> mass;
  double total = 0;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    for (const auto& [v, r] : chain.rewards[s]) {
      mass[v] += out.state_distribution[s] * r;
      total += out.state_distribution[s] * r;
    }
  }
  if (total > 0) {
    for (const auto& [v, m] : mass) out.distribution[chain.network->term(v)] = m / total;
  }
  return out;
}

ImpliedNetwork implied_network(const ExpandedChain& chain, const PowerOptions& options) {
  const auto& net = *chain.network;
  std::vector<std::size_t> counted;
  std::vector<std::size_t> slot(chain.size(), static_cast<std::size_t>(-1));
  for (std::size_t s = 0; s < chain.size(); ++s) {
    const auto& r = chain.rewards[s];
    if (r.empty()) continue;
    if (r.size() != 1 || r.front().first != chain.states[s].vertex() || std::abs(r.front().second - 1.0) > 1e-12) {
      throw UnsupportedGrammar(to_string(chain.grammar->context(chain.states[s].context()).id),
                               "implied network needs exactly one count at the current vertex per visit");
    }
    slot[s] = counted.size();
    counted.push_back(s);
  }

  // Censored chain: where the walker is the next time it counts.
  ImpliedNetwork out;
  std::set<std::size_t> lengths;
  SparseRows censored(counted.size());
  for (std::size_t i = 0; i < counted.size(); ++i) {
    std::map<std::size_t, double> hit;
    std::map<std::size_t, double> frontier;
    for (const auto& [t, p] : chain.transitions[counted[i]]) frontier[t] += p;
    for (std::size_t len = 1; !frontier.empty() && len <= chain.size() + 1; ++len) {
      std::map<std::size_t, double> next;
      for (const auto& [t, p] : frontier) {
        if (slot[t] != static_cast<std::size_t>(-1)) {
          hit[slot[t]] += p;
          lengths.insert(len);
        } else if (p > 1e-300) {
          for (const auto& [u, q] : chain.transitions[t]) next[u] += p * q;
        }
      }
      frontier.swap(next);
    }
    censored[i].assign(hit.begin(), hit.end());
  }
  out.path_lengths.assign(lengths.begin(), lengths.end());

  PowerResult nu = power_iteration(censored, options);

  std::map<Node, std::size_t> order;
  for (std::size_t s : counted) order.emplace(net.term(chain.states[s].vertex()), 0);
  std::size_t next_id = 0;
  for (auto& [node, id] : order) {
    id = next_id++;
    out.network.order.push_back(node);
  }
  out.network.edges.resize(order.size());
  std::vector<double> weight(order.size(), 0.0);
  std::vector<std::size_t> members(order.size(), 0);
  for (std::size_t i = 0; i < counted.size(); ++i) {
    std::size_t v = order.at(net.term(chain.states[counted[i]].vertex()));
    weight[v] += nu.distribution[i];
    ++members[v];
  }
  for (std::size_t i = 0; i < counted.size(); ++i) {
    std::size_t v = order.at(net.term(chain.states[counted[i]].vertex()));
    // Vertices only seen in transient states fall back to equal weights.
    double share = weight[v] > 0 ? nu.distribution[i] / weight[v] : 1.0 / static_cast<double>(members[v]);
    for (const auto& [j, p] : censored[i]) {
      std::size_t u = order.at(net.term(chain.states[counted[j]].vertex()));
      out.network.edges[v][u] += share * p;
    }
  }

  out.chain_mass = solve_chain(chain, options).distribution;
  return out;
}

TransitionMatrix transition_matrix(const WeightedNetwork& network) {
  TransitionMatrix m;
  m.order = network.order;
  const std::size_t n = network.order.size();
  if (n == 0) throw std::invalid_argument("transition matrix of an empty network");
  m.entries.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0;
    if (i < network.edges.size()) {
      for (const auto& [j, w] : network.edges[i]) total += w;
    }
    if (total <= 0) {
      std::fill(m.entries[i].begin(), m.entries[i].end(), 1.0 / static_cast<double>(n));
      continue;
    }
    for (const auto& [j, w] : network.edges[i]) m.entries[i][j] += w / total;
  }
  return m;
}

TransitionMatrix blend_teleport(const TransitionMatrix& a, double delta) {
  if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("delta must lie in (0, 1]");
  TransitionMatrix c = a;
  const double jump = (1.0 - delta) / static_cast<double>(a.size());
  for (auto& row : c.entries) {
    for (auto& x : row) x = delta * x + jump;
  }
  return c;
}

SparseRows to_rows(const TransitionMatrix& m) {
  SparseRows rows(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m.entries[i][j] != 0) rows[i].emplace_back(j, m.entries[i][j]);
    }
  }
  return rows;
}

PowerResult power_iteration(const TransitionMatrix& m, const PowerOptions& options) {
  return power_iteration(to_rows(m), options);
}

WeightedNetwork undirected_network(const SemanticNetwork& net) {
  WeightedNetwork out;
  std::map<TermId, std::size_t> index;
  std::vector<std::pair<Node, TermId>> sorted;
  for (TermId v : net.vertices()) sorted.emplace_back(net.term(v), v);
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [node, id] : sorted) {
    index[id] = out.order.size();
    out.order.push_back(node);
  }
  out.edges.resize(out.order.size());
  for (const auto& t : net.triples()) {
    if (!net.is_vertex(t.subject) || !net.is_vertex(t.object)) continue;
    std::size_t s = index.at(t.subject), o = index.at(t.object);
    out.edges[s][o] += 1;
    out.edges[o][s] += 1;
  }
  return out;
}

std::map<Node, double> undirected_pagerank(const SemanticNetwork& net, double delta, const PowerOptions& options) {
  auto w = undirected_network(net);
  if (w.order.empty()) return {};
  auto c = blend_teleport(transition_matrix(w), delta);
  auto r = power_iteration(c, options);
  std::map<Node, double> out;
  for (std::size_t i = 0; i < c.size(); ++i) out[c.order[i]] = r.distribution[i];
  return out;
}

RankComparison compare_rankings(const std::map<Node, double>& a, const std::map<Node, double>& b,
                                double tie_tolerance) {
  std::vector<std::tuple<Node, double, double>> rows;
  for (const auto& [k, v] : a) rows.emplace_back(k, v, b.contains(k) ? b.at(k) : 0.0);
  for (const auto& [k, v] : b) {
    if (!a.contains(k)) rows.emplace_back(k, 0.0, v);
  }
  RankComparison r;
  double sq = 0;
  for (const auto& [k, x, y] : rows) {
    r.l1 += std::abs(x - y);
    sq += (x - y) * (x - y);
  }
  r.l2 = std::sqrt(sq);
  for (std::size_t i = 0; i < rows.size() && r.rank_agreement; ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const auto& [ki, ai, bi] = rows[i];
      const auto& [kj, aj, bj] = rows[j];
      if ((ai > aj + tie_tolerance && !(bi > bj)) || (bi > bj + tie_tolerance && !(ai > aj))) {
        r.rank_agreement = false;
        break;
      }
    }
  }
  return r;
}

std::vector<Node> ranking(const std::map<Node, double>& d) {
  std::vector<std::pair<Node, double>> v(d.begin(), d.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<Node> out;
  for (auto& [k, x] : v) out.push_back(k);
  return out;
}

}  // namespace gramwalk
