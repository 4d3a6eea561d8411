// Acceptance criteria. Prints one PASS/FAIL line per criterion; exits 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "gramwalk/fixtures.hpp"
#include "gramwalk/oracle.hpp"
#include "gramwalk/result_io.hpp"
#include "gramwalk/triple_io.hpp"
#include "gramwalk/walker.hpp"

using namespace gramwalk;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Node lanl(const std::string& local) { return Node::iri(std::string(fixtures::kLanl) + local); }
Node ex(const std::string& local) { return Node::iri("http://example.org/" + local); }

Grammar grammar(const std::string& text) { return parse_grammar(parse_triples(text)).grammar; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Uniform selection among the three fig10 candidates.
void uniform_traversal(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto net = parse_triples(fixtures::fig10());
  auto g = grammar(fixtures::fig10_grammar());
  CompiledGrammar program(net, g);
  const TermId a = *net.lookup(ex("a"));
  Rng rng(stream_seed(1, 0));
  Counts global;
  std::map<Triple, int> hits;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    WalkerState w(0, a, program.retention());
    w.rule_cursor = 2;  // the Traverse rule
    auto r = step(program, w, global, rng);
    if (r.outcome != StepOutcome::Moved) {
      o.require(false, "step did not move");
      return;
    }
    const auto& rec = w.path(1);
    Triple t = rec.direction == Direction::Out ? Triple{ex("a"), net.term(rec.label), net.term(rec.vertex)}
                                               : Triple{net.term(rec.vertex), net.term(rec.label), ex("a")};
    ++hits[t];
  }
  double secs = seconds_since(t0);
  o.require(hits.size() == 3, "exactly 3 distinct triples");
  for (const auto& [t, n] : hits) {
    double f = n / double(trials);
    o.detail << " " << t.subject.value.substr(19) << "->" << t.object.value.substr(19) << "=" << f;
    o.require(std::abs(f - 1.0 / 3) <= 0.01, "frequency within 1/3 +- 0.01");
  }
  o.detail << " time=" << secs << "s";
  o.require(secs < 5, "runtime < 5 s");
}

// 2. Triangle symmetry at epsilon 0.001.
void symmetric_stationary(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto net = parse_triples(fixtures::toy3());
  auto g = grammar(fixtures::coaut_grammar());
  RunConfig cfg;
  cfg.epsilon = 0.001;
  auto r = run(net, g, cfg);
  double secs = seconds_since(t0);
  o.require(r.converged, "converged");
  o.require(r.normalized.size() == 3, "three researchers");
  for (const char* name : {"r1", "r2", "r3"}) {
    double x = r.normalized.contains(lanl(name)) ? r.normalized.at(lanl(name)) : 0.0;
    o.detail << " " << name << "=" << x;
    o.require(std::abs(x - 1.0 / 3) <= 0.02, std::string(name) + " within 1/3 +- 0.02");
  }
  o.detail << " submits=" << r.submits << " time=" << secs << "s";
  o.require(secs < 30, "runtime < 30 s");
}

// 3. Walker against the exact chain oracle.
void oracle_equivalence(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  const std::pair<std::string, std::string> cases[] = {{fixtures::toy3(), fixtures::coaut_grammar()},
                                                       {fixtures::toy2x2(), fixtures::coaut_prime_grammar()}};
  const char* names[] = {"toy3/coaut", "toy2x2/coaut'"};
  for (int i = 0; i < 2; ++i) {
    auto net = parse_triples(cases[i].first);
    auto g = grammar(cases[i].second);
    RunConfig cfg;
    cfg.epsilon = 1e-5;
    auto walker = run(net, g, cfg);
    auto exact = solve_chain(expand_chain(net, g));
    auto cmp = compare_rankings(walker.normalized, exact.distribution, 0.01);
    o.detail << " " << names[i] << ": l1=" << cmp.l1 << " rank=" << (cmp.rank_agreement ? "same" : "differs");
    o.require(walker.converged, std::string(names[i]) + " converged");
    o.require(cmp.l1 <= 0.02, std::string(names[i]) + " l1 <= 0.02");
    o.require(cmp.rank_agreement, std::string(names[i]) + " rank agreement");
  }
  double secs = seconds_since(t0);
  o.detail << " time=" << secs << "s";
  o.require(secs < 60, "runtime < 60 s");
}

// 4. Implied network eigenvector equals the chain's counted mass.
void implied_network_collapse(Outcome& o) {
  auto net = parse_triples(fixtures::toy3());
  auto g = grammar(fixtures::coaut_grammar());
  PowerOptions tight;
  tight.tolerance = 1e-15;
  tight.max_iterations = 1'000'000;
  auto implied = implied_network(expand_chain(net, g), tight);
  auto m = transition_matrix(implied.network);
  auto pi = power_iteration(m, tight);
  o.require(implied.path_lengths == std::vector<std::size_t>{2}, "all collapsed paths have length 2");
  o.require(pi.converged, "power iteration converged");
  double worst = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto it = implied.chain_mass.find(m.order[i]);
    double mass = it == implied.chain_mass.end() ? 0.0 : it->second;
    worst = std::max(worst, std::abs(pi.distribution[i] - mass));
  }
  o.require(implied.chain_mass.size() == m.size(), "same support");
  o.detail << " vertices=" << m.size() << " max|diff|=" << worst;
  o.require(worst <= 1e-9, "max difference <= 1e-9");
}

// 5. Halted walkers never contribute.
void halt_audit(Outcome& o) {
  auto net = parse_triples(fixtures::single_author());
  auto g = grammar(fixtures::coaut_grammar());
  CompiledGrammar program(net, g);
  const TermId r4 = *net.lookup(lanl("r4"));
  std::uint64_t halts = 0, discarded_total = 0, r4_discarded = 0, submitted_all = 0;
  bool exact = true;

  auto audit = [&](const RunResult& r, const Counts& submitted, std::uint64_t increments, std::uint64_t discarded,
                   std::uint64_t pending) {
    std::map<Node, std::uint64_t> want;
    std::uint64_t total = 0;
    for (const auto& [v, n] : submitted) {
      want[net.term(v)] = n;
      total += n;
    }
    submitted_all += total;
    exact = exact && r.counts == want && increments == total + discarded + pending && !r.counts.contains(lanl("r4"));
  };
  auto observe = [&](Counts& submitted, std::uint64_t& increments, std::uint64_t& discarded, std::uint64_t& pending) {
    return [&](const StepEvent& e) {
      if (e.result.outcome == StepOutcome::Counted) ++increments;
      if (e.result.outcome == StepOutcome::Halted) ++halts;
      for (const auto& [v, n] : e.result.submitted) submitted[v] += n;
      for (const auto& [v, n] : e.result.discarded) {
        discarded += n;
        if (v == r4) r4_discarded += n;
      }
      pending = 0;
      for (const auto& [v, n] : e.state.local_counts) pending += n;
    };
  };

  // Random spawns: a walker entering at U2 picks r4 half the time and halts at c4.
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.max_steps = 2000;
    cfg.epsilon = 1e-12;
    Counts submitted;
    std::uint64_t increments = 0, discarded = 0, pending = 0;
    auto r = run(net, g, cfg, observe(submitted, increments, discarded, pending));
    audit(r, submitted, increments, discarded, pending);
    discarded_total += discarded;
  }
  // A walker placed at r4 halts on its first pass.
  WalkerState start(g.entry_contexts().at(0), *net.lookup(lanl("U2")), program.retention());
  for (const auto& c : traversal_candidates(program, start, *g.context(start.context()).traverse())) {
    if (c.triple.subject == r4) apply_traverse(start, c);
  }
  o.require(start.vertex() == r4, "start at r4");
  RunConfig cfg;
  cfg.max_steps = 200000;
  cfg.epsilon = 1e-12;
  Counts submitted;
  std::uint64_t increments = 0, discarded = 0, pending = 0;
  auto r = run_from(net, g, cfg, start, observe(submitted, increments, discarded, pending));
  audit(r, submitted, increments, discarded, pending);
  discarded_total += discarded;

  o.detail << " runs=201 halts=" << halts << " discarded=" << discarded_total << " (r4=" << r4_discarded
           << ") submitted=" << submitted_all;
  o.require(halts > 0, "halts occurred");
  o.require(r4_discarded > 0, "r4 counts were discarded");
  o.require(exact, "global counts equal submitted counts, every increment accounted for, r4 never global");
}

// 6. Constraint sets on replayed traces.
void constraint_replay(Outcome& o) {
  auto net = parse_triples(fixtures::toy3());
  auto g = grammar(fixtures::coaut_grammar());
  const auto& r1 = g.context(*g.find(Node::iri("http://www.lanl.gov/grammar/coaut#Researcher_1")));
  const auto& r3 = g.context(*g.find(Node::iri("http://www.lanl.gov/grammar/coaut#Researcher_3")));
  const std::size_t university = g.entry_contexts().at(0);
  const std::size_t article = *g.find(Node::iri("http://www.lanl.gov/grammar/coaut#ConferenceArticle_2"));
  int first_pass = 0, at_article = 0, later_pass = 0;
  bool x3 = true, o1 = true, later = true;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.max_steps = 60;
    cfg.epsilon = 1e-12;
    std::vector<WalkerState> traces;
    run(net, g, cfg, [&](const StepEvent& e) {
      if (e.result.outcome == StepOutcome::Moved || e.state.length() == 1) traces.push_back(e.state);
    });
    for (const auto& w : traces) {
      const std::size_t n = w.length();
      if (n == 1) {
        // First pass through University_0: nothing to look back on.
        auto cs = constraint_sets(w, r1);
        o1 = o1 && cs.required.empty() && cs.excluded.empty();
        ++first_pass;
      } else if (w.context() == article) {
        // History (..., i, w, x): the coauthor step must avoid exactly w.
        auto cs = constraint_sets(w, r3);
        x3 = x3 && cs.excluded == std::vector<TermId>{w.path(n - 2).vertex} && cs.required.empty();
        ++at_article;
      } else if (w.context() == university) {
        // Back at a university the next researcher must be the one who just arrived.
        auto cs = constraint_sets(w, r1);
        later = later && cs.required == std::vector<TermId>{w.path(n - 2).vertex} && cs.excluded.empty();
        ++later_pass;
      }
    }
  }
  o.detail << " O_1 checks=" << first_pass << " X_3 checks=" << at_article << " later O_1 checks=" << later_pass;
  o.require(o1, "O_1 = X_1 = empty on first pass");
  o.require(x3, "X_3 = {w}, O_3 = empty");
  o.require(later, "O_1 = {arriving researcher} on later passes");
  o.require(first_pass > 0 && at_article > 0 && later_pass > 0, "traces replayed");
}

// 7. Confinement without teleport, full support with it.
void confinement(Outcome& o) {
  auto net = parse_triples(fixtures::toy2x2());
  auto support = [&](const std::string& grammar_text) {
    auto g = grammar(grammar_text);
    CompiledGrammar program(net, g);
    WalkerState start(g.entry_contexts().at(0), *net.lookup(lanl("U2")), program.retention());
    RunConfig cfg;
    cfg.max_steps = 200000;
    std::set<Node> s;
    for (const auto& [v, x] : run_from(net, g, cfg, start).normalized) {
      if (x > 0) s.insert(v);
    }
    return s;
  };
  auto plain = support(fixtures::coaut_grammar());
  auto teleport = support(fixtures::coaut_prime_grammar());
  o.detail << " coaut support=" << plain.size() << " coaut' support=" << teleport.size();
  o.require(plain == std::set<Node>{lanl("r4"), lanl("r5")}, "support {r4, r5} without Reresolve");
  o.require(teleport == std::set<Node>{lanl("r1"), lanl("r2"), lanl("r3"), lanl("r4"), lanl("r5")},
            "all five researchers with Reresolve");
}

// 8. Unconstrained grammar against undirected PageRank.
void unconstrained_pagerank(Outcome& o) {
  auto net = parse_triples(fixtures::mixed());
  auto g = grammar(fixtures::unconstrained_grammar(0.15));
  RunConfig cfg;
  cfg.epsilon = 1e-5;
  auto walker = run(net, g, cfg);
  auto pr = undirected_pagerank(net, 0.85);
  auto cmp = compare_rankings(walker.normalized, pr);
  o.detail << " l1=" << cmp.l1 << " vertices=" << pr.size();
  o.require(walker.converged, "converged");
  o.require(cmp.l1 <= 0.02, "l1 <= 0.02");
}

// 9. Same seed, same bytes.
void determinism(Outcome& o) {
  auto net = parse_triples(fixtures::toy2x2());
  auto g = grammar(fixtures::coaut_prime_grammar());
  RunConfig cfg;
  cfg.seed = 42;
  cfg.walkers = 1;
  auto a = run_result_json(run(net, g, cfg));
  auto b = run_result_json(run(net, g, cfg));
  o.detail << " bytes=" << a.size();
  o.require(a == b, "identical JSON");
}

// 10. Blended matrices are stochastic; power iteration preserves mass.
void matrix_properties(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_row = 0, worst_sum = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    TransitionMatrix a;
    for (std::size_t i = 0; i < n; ++i) a.order.push_back(ex("m" + std::to_string(i)));
    a.entries.assign(n, std::vector<double>(n, 0.0));
    for (auto& row : a.entries) {
      double sum = 0;
      for (auto& x : row) {
        if (rng() % 3 == 0) sum += x = u(rng);
      }
      if (sum == 0) row[rng() % n] = sum = 1.0;
      for (auto& x : row) x /= sum;
    }
    const double delta = 1.0 - u(rng);  // (0, 1]
    auto c = blend_teleport(a, delta);
    for (const auto& row : c.entries) {
      double s = 0;
      for (double x : row) s += x;
      worst_row = std::max(worst_row, std::abs(s - 1));
    }
    auto pi = power_iteration(c);
    double s = 0;
    for (double x : pi.distribution) s += x;
    worst_sum = std::max(worst_sum, std::abs(s - 1));
  }
  o.detail << " max|row-1|=" << worst_row << " max|sum-1|=" << worst_sum;
  o.require(worst_row <= 1e-12, "rows sum to 1 +- 1e-12");
  o.require(worst_sum <= 1e-9, "power iteration sums to 1 +- 1e-9");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"uniform traversal on fig10", uniform_traversal},
      {"toy3 symmetric stationary distribution", symmetric_stationary},
      {"walker matches chain oracle", oracle_equivalence},
      {"implied network equals chain mass", implied_network_collapse},
      {"halted walkers never submit", halt_audit},
      {"Not/Is constraint sets on replayed traces", constraint_replay},
      {"component confinement vs teleportation", confinement},
      {"unconstrained grammar matches undirected PageRank", unconstrained_pagerank},
      {"deterministic JSON", determinism},
      {"matrix properties", matrix_properties},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("%s %d %s:%s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
