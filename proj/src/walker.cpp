#include "gramwalk/walker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace gramwalk {

WalkerState::WalkerState(std::size_t context, TermId vertex, std::size_t retention) : retention_(retention) {
  path_.push_back({vertex, kNoTerm, Direction::None});
  grammar_path_.push_back({context, nullptr, Direction::None});
}

void WalkerState::push(const PathRecord& g, const GrammarRecord& psi) {
  path_.push_back(g);
  grammar_path_.push_back(psi);
  while (retention_ != 0 && path_.size() > retention_) {
    path_.pop_front();
    grammar_path_.pop_front();
    ++dropped_;
  }
}

CompiledGrammar::CompiledGrammar(const SemanticNetwork& net, const Grammar& grammar) : net_(&net), grammar_(&grammar) {
  for (const auto& c : grammar.contexts()) {
    auto id = net.lookup(c.for_resource);
    resource_ids_.push_back(id);
    resolutions_.push_back(id ? net.instances_of(*id) : std::vector<TermId>{});
    if (const auto* t = c.traverse()) {
      for (const auto& e : t->edges) predicate_ids_[&e] = e.any_predicate ? std::nullopt : net.lookup(e.predicate);
    }
  }
  // The newest record plus enough history for the longest lookback from the
  // position about to be appended.
  retention_ = static_cast<std::size_t>(grammar.max_lookback()) + 2;
}

bool CompiledGrammar::resolves(std::size_t c, TermId v) const {
  const auto& r = resolutions_.at(c);
  return std::binary_search(r.begin(), r.end(), v);
}

bool CompiledGrammar::predicate_matches(const GrammarEdge& e, TermId predicate) const {
  if (e.any_predicate) return true;
  auto it = predicate_ids_.find(&e);
  std::optional<TermId> id = it != predicate_ids_.end() ? it->second : net_->lookup(e.predicate);
  return id && net_->is_subproperty_of(predicate, *id);
}

WalkerState spawn_walker(const CompiledGrammar& program, Rng& rng) {
  std::vector<std::size_t> usable;
  for (std::size_t c : program.grammar().entry_contexts()) {
    if (!program.resolutions(c).empty()) usable.push_back(c);
  }
  if (usable.empty()) throw UnrunnableGrammar("no entry context has an instance in the network");
  std::size_t c = usable[rng.uniform_index(usable.size())];
  const auto& vs = program.resolutions(c);
  return WalkerState(c, vs[rng.uniform_index(vs.size())], program.retention());
}

namespace {

void insert_sorted(std::vector<TermId>& v, TermId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

bool contains_sorted(const std::vector<TermId>& v, TermId x) { return std::binary_search(v.begin(), v.end(), x); }

// Constraint sets for `context` placed at history position `pos`; vertex_at
// returns the vertex at an earlier position.
template <typename VertexAt>
ConstraintSets constraints_at(const Context& context, std::size_t pos, VertexAt vertex_at, bool use_is = true,
                              bool use_not = true) {
  ConstraintSets cs;
  for (const auto& a : context.attributes) {
    if (a.steps < 1 || static_cast<std::size_t>(a.steps) > pos) continue;
    if (a.kind == AttributeKind::Not && !use_not) continue;
    if (a.kind == AttributeKind::Is && !use_is) continue;
    TermId v = vertex_at(pos - static_cast<std::size_t>(a.steps));
    insert_sorted(a.kind == AttributeKind::Not ? cs.excluded : cs.required, v);
  }
  return cs;
}

bool admits(const ConstraintSets& cs, TermId v) {
  if (contains_sorted(cs.excluded, v)) return false;
  return cs.required.empty() || contains_sorted(cs.required, v);
}

}  // namespace

ConstraintSets constraint_sets(const WalkerState& w, const Context& next_context) {
  return constraints_at(next_context, w.length(), [&](std::size_t i) { return w.path(i).vertex; });
}

std::vector<Candidate> traversal_candidates(const CompiledGrammar& program, const WalkerState& w,
                                            const TraverseRule& rule) {
  const auto& net = program.network();
  const auto& grammar = program.grammar();
  TermId a = w.vertex();
  std::vector<Candidate> out;
  for (const auto& e : rule.edges) {
    ConstraintSets cs = constraint_sets(w, grammar.context(e.target));
    const bool outgoing = e.direction == Direction::Out;
    for (const auto& t : outgoing ? net.out(a) : net.in(a)) {
      TermId b = outgoing ? t.object : t.subject;
      if (!net.is_vertex(b) || !program.predicate_matches(e, t.predicate)) continue;
      if (!program.resolves(e.target, b) || !admits(cs, b)) continue;
      out.push_back({t, &e});
    }
  }
  return out;
}

void apply_traverse(WalkerState& w, const Candidate& chosen) {
  const auto& e = *chosen.edge;
  TermId b = e.direction == Direction::Out ? chosen.triple.object : chosen.triple.subject;
  w.push({b, chosen.triple.predicate, e.direction}, {e.target, &e, e.direction});
  w.rule_cursor = 0;
}

void incr_count(WalkerState& w) {
  ++w.local_counts[w.vertex()];
  ++w.rule_cursor;
}

Counts submit_counts(WalkerState& w, Counts& global) {
  Counts added;
  added.swap(w.local_counts);
  for (const auto& [v, n] : added) global[v] += n;
  ++w.rule_cursor;
  return added;
}

std::vector<Path> reresolve_paths(const CompiledGrammar& program, const WalkerState& w, const ReresolveRule& rule) {
  std::vector<Path> result;
  if (rule.steps < 0) return result;
  const auto m = static_cast<std::size_t>(rule.steps);
  if (w.length() < m + 1) return result;
  const auto& net = program.network();
  const auto& grammar = program.grammar();
  const std::size_t first = w.length() - 1 - m;

  Path current;
  // Vertex at absolute position i, reading the partial path for the window.
  auto vertex_at = [&](std::size_t i) { return i >= first ? current[i - first].vertex : w.path(i).vertex; };
  auto allowed = [&](std::size_t pos, TermId v) {
    if (!rule.obeys_is && !rule.obeys_not) return true;
    const Context& ctx = grammar.context(w.grammar_path(pos).context);
    return admits(constraints_at(ctx, pos, vertex_at, rule.obeys_is, rule.obeys_not), v);
  };

  auto extend = [&](auto&& self, std::size_t pos) -> void {
    if (pos == first + m + 1) {
      result.push_back(current);
      return;
    }
    const GrammarRecord& psi = w.grammar_path(pos);
    const GrammarEdge& e = *psi.edge;
    TermId a = current.back().vertex;
    const bool outgoing = psi.direction == Direction::Out;
    for (const auto& t : outgoing ? net.out(a) : net.in(a)) {
      TermId b = outgoing ? t.object : t.subject;
      if (!net.is_vertex(b) || !program.predicate_matches(e, t.predicate)) continue;
      if (!program.resolves(psi.context, b) || !allowed(pos, b)) continue;
      current.push_back({b, t.predicate, psi.direction});
      self(self, pos + 1);
      current.pop_back();
    }
  };

  const PathRecord& start = w.path(first);
  for (TermId v : program.resolutions(w.grammar_path(first).context)) {
    if (!allowed(first, v)) continue;
    current.assign(1, {v, start.label, start.direction});
    extend(extend, first + 1);
  }
  return result;
}

void apply_reresolve(WalkerState& w, const Path& q) {
  const std::size_t first = w.length() - q.size();
  w.path(first).vertex = q.front().vertex;
  for (std::size_t k = 1; k < q.size(); ++k) w.path(first + k) = q[k];
}

const char* to_string(StepOutcome o) {
  switch (o) {
    case StepOutcome::Moved: return "Moved";
    case StepOutcome::Counted: return "Counted";
    case StepOutcome::Submitted: return "Submitted";
    case StepOutcome::Reresolved: return "Reresolved";
    case StepOutcome::Halted: return "Halted";
  }
  return "?";
}

StepResult step(const CompiledGrammar& program, WalkerState& w, Counts& global, Rng& rng) {
  const Context& ctx = program.grammar().context(w.context());
  auto halt = [&]() {
    StepResult r{StepOutcome::Halted, {}, std::move(w.local_counts)};
    w = spawn_walker(program, rng);
    return r;
  };
  if (w.rule_cursor >= ctx.rules.size()) return halt();

  const Rule& rule = ctx.rules[w.rule_cursor];
  if (const auto* t = std::get_if<TraverseRule>(&rule.body)) {
    auto candidates = traversal_candidates(program, w, *t);
    if (candidates.empty()) return halt();
    apply_traverse(w, candidates[rng.uniform_index(candidates.size())]);
    return {StepOutcome::Moved, {}, {}};
  }
  if (std::holds_alternative<IncrCountRule>(rule.body)) {
    incr_count(w);
    return {StepOutcome::Counted, {}, {}};
  }
  if (std::holds_alternative<SubmitCountsRule>(rule.body)) {
    return {StepOutcome::Submitted, submit_counts(w, global), {}};
  }
  const auto& rr = std::get<ReresolveRule>(rule.body);
  StepResult r{StepOutcome::Reresolved, {}, {}};
  if (w.length() >= static_cast<std::size_t>(rr.steps) + 1 && rng.bernoulli(rr.probability)) {
    auto paths = reresolve_paths(program, w, rr);
    if (!paths.empty()) {
      apply_reresolve(w, paths[rng.uniform_index(paths.size())]);
      r.teleported = true;
    }
  }
  ++w.rule_cursor;
  return r;
}

Distribution normalize(const Counts& counts) {
  Distribution out;
  long double total = 0;
  for (const auto& [v, n] : counts) total += n;
  if (total == 0) return out;
  for (const auto& [v, n] : counts) out[v] = static_cast<double>(n / total);
  return out;
}

double l2_distance(const Distribution& a, const Distribution& b) {
  double sum = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    double d;
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      d = (ia++)->second;
    } else if (ia == a.end() || ib->first < ia->first) {
      d = (ib++)->second;
    } else {
      d = (ia++)->second - (ib++)->second;
    }
    sum += d * d;
  }
  return std::sqrt(sum);
}

bool has_converged(const Distribution& prev, const Distribution& curr, double epsilon) {
  return l2_distance(prev, curr) < epsilon;
}

void RunConfig::validate() const {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (check_every == 0) throw std::invalid_argument("check_every must be at least 1");
  if (walkers == 0) throw std::invalid_argument("walkers must be at least 1");
}

namespace {

class Runner {
 public:
  Runner(const CompiledGrammar& program, const RunConfig& cfg, const StepObserver& observer)
      : program_(program), cfg_(cfg), observer_(observer) {}

  void drive(std::size_t index, WalkerState w, Rng rng) {
    Counts submitted;
    while (!stop_.load(std::memory_order_relaxed)) {
      if (steps_.fetch_add(1, std::memory_order_relaxed) >= cfg_.max_steps) break;
      submitted.clear();
      StepResult r = step(program_, w, submitted, rng);
      if (r.outcome != StepOutcome::Submitted && !observer_) continue;
      std::lock_guard lock(mutex_);
      if (r.outcome == StepOutcome::Submitted) record_submit(submitted);
      if (observer_) observer_({index, w, r});
    }
  }

  RunResult result() const {
    RunResult out;
    const auto& net = program_.network();
    for (const auto& [v, n] : global_) out.counts[net.term(v)] = n;
    for (const auto& [v, x] : normalize(global_)) out.normalized[net.term(v)] = x;
    out.steps = std::min<std::uint64_t>(steps_.load(), cfg_.max_steps);
    out.submits = submits_;
    out.converged = converged_;
    return out;
  }

 private:
  void record_submit(const Counts& added) {
    for (const auto& [v, n] : added) global_[v] += n;
    ++submits_;
    if (submits_ % cfg_.check_every != 0) return;
    Distribution curr = normalize(global_);
    if (curr.empty()) return;
    if (!previous_.empty() && has_converged(previous_, curr, cfg_.epsilon)) {
      converged_ = true;
      stop_.store(true, std::memory_order_relaxed);
    }
    previous_ = std::move(curr);
  }

  const CompiledGrammar& program_;
  const RunConfig& cfg_;
  const StepObserver& observer_;
  std::mutex mutex_;
  std::atomic<std::uint64_t> steps_{0};
  std::atomic<bool> stop_{false};
  Counts global_;
  Distribution previous_;
  std::uint64_t submits_ = 0;
  bool converged_ = false;
};

void check_runnable(const Grammar& g) {
  for (const auto& d : validate_grammar(g)) {
    if (d.severity == Severity::Error) throw UnrunnableGrammar(to_string(d));
  }
}

}  // namespace

RunResult run(const SemanticNetwork& net, const Grammar& g, const RunConfig& cfg, const StepObserver& observer) {
  cfg.validate();
  check_runnable(g);
  CompiledGrammar program(net, g);
  Runner runner(program, cfg, observer);
  if (cfg.walkers == 1) {
    Rng rng(stream_seed(cfg.seed, 0));
    WalkerState w = spawn_walker(program, rng);
    runner.drive(0, std::move(w), rng);
    return runner.result();
  }
  // Spawn up front so an unrunnable grammar is reported on this thread.
  std::vector<std::pair<WalkerState, Rng>> starts;
  for (std::size_t i = 0; i < cfg.walkers; ++i) {
    Rng rng(stream_seed(cfg.seed, i));
    WalkerState w = spawn_walker(program, rng);
    starts.emplace_back(std::move(w), rng);
  }
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < cfg.walkers; ++i) {
      threads.emplace_back([&, i] { runner.drive(i, std::move(starts[i].first), starts[i].second); });
    }
  }
  return runner.result();
}

RunResult run_from(const SemanticNetwork& net, const Grammar& g, const RunConfig& cfg, WalkerState initial,
                   const StepObserver& observer) {
  cfg.validate();
  check_runnable(g);
  CompiledGrammar program(net, g);
  Runner runner(program, cfg, observer);
  runner.drive(0, std::move(initial), Rng(stream_seed(cfg.seed, 0)));
  return runner.result();
}

}  // namespace gramwalk
