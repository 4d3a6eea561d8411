#include "gramwalk/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace gramwalk {

Vocabulary::Vocabulary(std::string b) : base(std::move(b)) {
  auto t = [this](const char* local) { return base + local; };
  context = t("Context");
  entry_context = t("EntryContext");
  for_resource = t("forResource");
  has_rules = t("hasRules");
  traverse = t("Traverse");
  has_edge = t("hasEdge");
  out_edge = t("OutEdge");
  in_edge = t("InEdge");
  has_predicate = t("hasPredicate");
  has_object = t("hasObject");
  has_subject = t("hasSubject");
  incr_count = t("IncrCount");
  submit_counts = t("SubmitCounts");
  reresolve = t("Reresolve");
  probability = t("probability");
  steps = t("steps");
  obeys = t("obeys");
  has_attributes = t("hasAttributes");
  has_attribute = t("hasAttribute");
  is = t("Is");
  not_ = t("Not");
  any_property = t("AnyProperty");
  typo_has_edge = std::string(vocab::kRdfs) + "hasEdge";
  typo_for_resource = std::string(vocab::kRdf) + "forResource";
}

char direction_symbol(Direction d) {
  switch (d) {
    case Direction::Out: return '+';
    case Direction::In: return '-';
    case Direction::None: break;
  }
  return ' ';
}

const TraverseRule* Context::traverse() const {
  for (const auto& r : rules) {
    if (auto* t = std::get_if<TraverseRule>(&r.body)) return t;
  }
  return nullptr;
}

Grammar::Grammar(std::vector<Context> contexts) : contexts_(std::move(contexts)) {}

std::optional<std::size_t> Grammar::find(const Node& id) const {
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (contexts_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Grammar::entry_contexts() const {
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (contexts_[i].is_entry) result.push_back(i);
  }
  return result;
}

int Grammar::max_lookback() const {
  int m = 0;
  for (const auto& c : contexts_) {
    for (const auto& a : c.attributes) m = std::max(m, a.steps);
    for (const auto& r : c.rules) {
      if (auto* rr = std::get_if<ReresolveRule>(&r.body)) m = std::max(m, rr->steps);
    }
  }
  return m;
}

namespace {

class GrammarReader {
 public:
  GrammarReader(const SemanticNetwork& net, const GrammarOptions& options)
      : net_(net), vocab_(options.vocabulary), lenient_(options.lenient) {}

  ParsedGrammar read() {
    std::vector<TermId> context_terms = find_contexts();
    std::vector<Context> contexts(context_terms.size());
    for (std::size_t i = 0; i < context_terms.size(); ++i) {
      context_index_.emplace(context_terms[i], i);
      contexts[i].id = net_.term(context_terms[i]);
    }
    for (std::size_t i = 0; i < context_terms.size(); ++i) read_context(context_terms[i], contexts[i]);
    return {Grammar(std::move(contexts)), std::move(warnings_)};
  }

 private:
  std::optional<TermId> id(const std::string& iri) const { return net_.lookup_iri(iri); }

  std::string name(TermId t) const { return to_string(net_.term(t)); }

  std::vector<TermId> objects(TermId s, const std::string& predicate) const {
    std::vector<TermId> result;
    auto p = id(predicate);
    if (!p) return result;
    for (const auto& t : net_.out(s)) {
      if (t.predicate == *p) result.push_back(t.object);
    }
    std::sort(result.begin(), result.end(), [this](TermId a, TermId b) { return net_.term(a) < net_.term(b); });
    return result;
  }

  bool has_type(TermId s, const std::string& cls) const {
    auto c = id(cls);
    if (!c) return false;
    for (TermId t : net_.asserted_types(s)) {
      if (net_.is_subclass_of(t, *c)) return true;
    }
    return false;
  }

  std::optional<TermId> single(TermId s, const std::string& predicate, const char* what, bool required) const {
    auto values = objects(s, predicate);
    if (values.size() > 1) throw GrammarError(name(s), std::string("more than one ") + what);
    if (values.empty()) {
      if (required) throw GrammarError(name(s), std::string("missing ") + what);
      return std::nullopt;
    }
    return values.front();
  }

  // Property values, also accepting a misspelled alias in lenient mode.
  std::vector<TermId> objects_with_alias(TermId s, const std::string& predicate, const std::string& alias) {
    auto values = objects(s, predicate);
    auto typo = objects(s, alias);
    if (!typo.empty()) {
      if (!lenient_) {
        throw GrammarError(name(s), "uses <" + alias + ">; expected <" + predicate + "> (enable lenient mode to accept)");
      }
      warnings_.push_back(name(s) + ": accepted <" + alias + "> as <" + predicate + ">");
      values.insert(values.end(), typo.begin(), typo.end());
    }
    return values;
  }

  std::vector<TermId> find_contexts() const {
    std::set<TermId> found;
    for (const auto& cls : {vocab_.context, vocab_.entry_context}) {
      auto c = id(cls);
      if (!c) continue;
      for (const auto& t : net_.in(*c)) {
        if (t.predicate == net_.type_id()) found.insert(t.subject);
      }
    }
    // Subclasses of rwr:Context declared in the grammar file.
    for (TermId v : net_.vertices()) {
      if (has_type(v, vocab_.context)) found.insert(v);
    }
    std::vector<TermId> result(found.begin(), found.end());
    std::sort(result.begin(), result.end(), [this](TermId a, TermId b) { return net_.term(a) < net_.term(b); });
    return result;
  }

  long parse_integer(TermId subject, TermId literal, const char* what) const {
    const Node& n = net_.term(literal);
    long value = 0;
    auto [end, ec] = std::from_chars(n.value.data(), n.value.data() + n.value.size(), value);
    if (!n.is_literal() || ec != std::errc{} || end != n.value.data() + n.value.size()) {
      throw GrammarError(name(subject), std::string("non-numeric ") + what + " value " + to_string(n));
    }
    return value;
  }

  double parse_decimal(TermId subject, TermId literal, const char* what) const {
    const Node& n = net_.term(literal);
    double value = 0;
    auto [end, ec] = std::from_chars(n.value.data(), n.value.data() + n.value.size(), value);
    if (!n.is_literal() || ec != std::errc{} || end != n.value.data() + n.value.size() || !std::isfinite(value)) {
      throw GrammarError(name(subject), std::string("non-numeric ") + what + " value " + to_string(n));
    }
    return value;
  }

  void read_context(TermId c, Context& ctx) {
    auto resources = objects_with_alias(c, vocab_.for_resource, vocab_.typo_for_resource);
    if (resources.empty()) throw GrammarError(name(c), "context has no forResource");
    if (resources.size() > 1) throw GrammarError(name(c), "context has more than one forResource");
    ctx.for_resource = net_.term(resources.front());
    ctx.is_entry = has_type(c, vocab_.entry_context);

    if (auto seq = single(c, vocab_.has_rules, "hasRules sequence", false)) {
      ctx.rules_seq = net_.term(*seq);
      read_rules(c, *seq, ctx);
    }

    for (TermId set : objects(c, vocab_.has_attributes)) {
      ctx.attribute_sets.push_back(net_.term(set));
      for (TermId a : objects(set, vocab_.has_attribute)) ctx.attributes.push_back(read_attribute(a));
    }
    std::sort(ctx.attributes.begin(), ctx.attributes.end(),
              [](const Attribute& a, const Attribute& b) { return a.id < b.id; });
  }

  void read_rules(TermId c, TermId seq, Context& ctx) {
    const std::string member_prefix = std::string(vocab::kRdf) + "_";
    std::map<long, TermId> members;
    for (const auto& t : net_.out(seq)) {
      const std::string& p = net_.term(t.predicate).value;
      if (!p.starts_with(member_prefix)) continue;
      std::string_view digits(p.data() + member_prefix.size(), p.size() - member_prefix.size());
      long index = 0;
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (ec != std::errc{} || end != digits.data() + digits.size() || index < 1) {
        throw GrammarError(name(seq), "invalid sequence membership property <" + p + ">");
      }
      if (!members.emplace(index, t.object).second) {
        throw GrammarError(name(seq), "duplicate rule at position " + std::to_string(index));
      }
    }
    long expected = 1;
    for (const auto& [index, _] : members) {
      if (index != expected) {
        throw GrammarError(name(c), "rule sequence " + name(seq) + " has a gap: rdf:_" + std::to_string(expected) +
                                        " missing before rdf:_" + std::to_string(index));
      }
      ++expected;
    }
    int traverses = 0;
    for (const auto& [_, rule] : members) {
      ctx.rules.push_back(read_rule(rule));
      if (std::holds_alternative<TraverseRule>(ctx.rules.back().body)) ++traverses;
    }
    if (traverses > 1) throw GrammarError(name(c), "context has more than one Traverse rule");
  }

  Rule read_rule(TermId r) {
    Rule rule{net_.term(r), IncrCountRule{}};
    int kinds = 0;
    if (has_type(r, vocab_.traverse)) {
      ++kinds;
      rule.body = read_traverse(r);
    }
    if (has_type(r, vocab_.incr_count)) {
      ++kinds;
      rule.body = IncrCountRule{};
    }
    if (has_type(r, vocab_.submit_counts)) {
      ++kinds;
      rule.body = SubmitCountsRule{};
    }
    if (has_type(r, vocab_.reresolve)) {
      ++kinds;
      rule.body = read_reresolve(r);
    }
    if (kinds == 0) throw GrammarError(name(r), "rule has no recognized rule type");
    if (kinds > 1) throw GrammarError(name(r), "rule has more than one rule type");
    return rule;
  }

  TraverseRule read_traverse(TermId r) {
    TraverseRule t;
    for (TermId e : objects_with_alias(r, vocab_.has_edge, vocab_.typo_has_edge)) {
      GrammarEdge edge;
      edge.id = net_.term(e);
      bool out = has_type(e, vocab_.out_edge);
      bool in = has_type(e, vocab_.in_edge);
      if (out == in) throw GrammarError(name(e), "edge must be typed as exactly one of OutEdge or InEdge");
      edge.direction = out ? Direction::Out : Direction::In;
      TermId predicate = *single(e, vocab_.has_predicate, "hasPredicate", true);
      edge.predicate = net_.term(predicate);
      if (!edge.predicate.is_iri()) throw GrammarError(name(e), "hasPredicate must be an IRI");
      edge.any_predicate = edge.predicate.value == vocab_.any_property;
      const std::string& target_property = out ? vocab_.has_object : vocab_.has_subject;
      const std::string& wrong_property = out ? vocab_.has_subject : vocab_.has_object;
      if (!objects(e, wrong_property).empty()) {
        throw GrammarError(name(e), std::string(out ? "out-edge" : "in-edge") + " names its target with <" +
                                        wrong_property + ">");
      }
      TermId target = *single(e, target_property, out ? "hasObject target" : "hasSubject target", true);
      auto it = context_index_.find(target);
      if (it == context_index_.end()) {
        throw GrammarError(name(e), "edge target " + name(target) + " is not a context");
      }
      edge.target = it->second;
      t.edges.push_back(std::move(edge));
    }
    if (t.edges.empty()) throw GrammarError(name(r), "Traverse rule has no edges");
    std::sort(t.edges.begin(), t.edges.end(), [](const GrammarEdge& a, const GrammarEdge& b) { return a.id < b.id; });
    return t;
  }

  ReresolveRule read_reresolve(TermId r) {
    ReresolveRule rr;
    rr.probability = parse_decimal(r, *single(r, vocab_.probability, "probability", true), "probability");
    if (!(rr.probability > 0.0 && rr.probability <= 1.0)) {
      throw GrammarError(name(r), "Reresolve probability " + std::to_string(rr.probability) + " outside (0,1]");
    }
    long steps = parse_integer(r, *single(r, vocab_.steps, "steps", true), "steps");
    if (steps < 0 || steps > std::numeric_limits<int>::max()) {
      throw GrammarError(name(r), "Reresolve steps must be a non-negative integer");
    }
    rr.steps = static_cast<int>(steps);
    for (TermId o : objects(r, vocab_.obeys)) {
      const Node& n = net_.term(o);
      if (n.value == vocab_.is) {
        rr.obeys_is = true;
      } else if (n.value == vocab_.not_) {
        rr.obeys_not = true;
      } else {
        throw GrammarError(name(r), "obeys value " + to_string(n) + " is not an attribute kind");
      }
    }
    return rr;
  }

  Attribute read_attribute(TermId a) {
    Attribute attr;
    attr.id = net_.term(a);
    bool is = has_type(a, vocab_.is);
    bool not_ = has_type(a, vocab_.not_);
    if (is == not_) throw GrammarError(name(a), "attribute must be typed as exactly one of Is or Not");
    attr.kind = is ? AttributeKind::Is : AttributeKind::Not;
    long steps = parse_integer(a, *single(a, vocab_.steps, "steps", true), "steps");
    if (steps < 1 || steps > std::numeric_limits<int>::max()) {
      throw GrammarError(name(a), "attribute steps must be a positive integer");
    }
    attr.steps = static_cast<int>(steps);
    return attr;
  }

  const SemanticNetwork& net_;
  const Vocabulary& vocab_;
  bool lenient_;
  std::map<TermId, std::size_t> context_index_;
  std::vector<std::string> warnings_;
};

std::string format_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

ParsedGrammar parse_grammar(const SemanticNetwork& net, const GrammarOptions& options) {
  return GrammarReader(net, options).read();
}

std::vector<Triple> serialize_grammar(const Grammar& g, const Vocabulary& v) {
  std::vector<Triple> out;
  const Node type = Node::iri(vocab::kType);
  const std::string xsd(vocab::kXsd);
  auto iri = [](const std::string& s) { return Node::iri(s); };
  auto add = [&out](Node s, Node p, Node o) { out.push_back({std::move(s), std::move(p), std::move(o)}); };

  for (const auto& c : g.contexts()) {
    add(c.id, type, iri(c.is_entry ? v.entry_context : v.context));
    add(c.id, iri(v.for_resource), c.for_resource);
    if (c.rules_seq) {
      add(c.id, iri(v.has_rules), *c.rules_seq);
      add(*c.rules_seq, type, iri(vocab::kSeq));
      for (std::size_t i = 0; i < c.rules.size(); ++i) {
        const Rule& r = c.rules[i];
        add(*c.rules_seq, iri(std::string(vocab::kRdf) + "_" + std::to_string(i + 1)), r.id);
        std::visit(
            [&](const auto& body) {
              using T = std::decay_t<decltype(body)>;
              if constexpr (std::is_same_v<T, TraverseRule>) {
                add(r.id, type, iri(v.traverse));
                for (const auto& e : body.edges) {
                  add(r.id, iri(v.has_edge), e.id);
                  bool out_edge = e.direction == Direction::Out;
                  add(e.id, type, iri(out_edge ? v.out_edge : v.in_edge));
                  add(e.id, iri(v.has_predicate), e.predicate);
                  add(e.id, iri(out_edge ? v.has_object : v.has_subject), g.context(e.target).id);
                }
              } else if constexpr (std::is_same_v<T, IncrCountRule>) {
                add(r.id, type, iri(v.incr_count));
              } else if constexpr (std::is_same_v<T, SubmitCountsRule>) {
                add(r.id, type, iri(v.submit_counts));
              } else {
                add(r.id, type, iri(v.reresolve));
                add(r.id, iri(v.probability), Node::literal(format_decimal(body.probability), xsd + "decimal"));
                add(r.id, iri(v.steps), Node::literal(std::to_string(body.steps), xsd + "integer"));
                if (body.obeys_is) add(r.id, iri(v.obeys), iri(v.is));
                if (body.obeys_not) add(r.id, iri(v.obeys), iri(v.not_));
              }
            },
            r.body);
      }
    }
    // Attributes are attached to the first container; extra containers are
    // kept (possibly empty) so the value round-trips.
    for (const auto& set : c.attribute_sets) add(c.id, iri(v.has_attributes), set);
    for (const auto& a : c.attributes) {
      if (c.attribute_sets.empty()) break;
      add(c.attribute_sets.front(), iri(v.has_attribute), a.id);
      add(a.id, type, iri(a.kind == AttributeKind::Is ? v.is : v.not_));
      add(a.id, iri(v.steps), Node::literal(std::to_string(a.steps), xsd + "integer"));
    }
  }
  return out;
}

std::string to_string(const Diagnostic& d) {
  const char* level = d.severity == Severity::Error ? "error" : d.severity == Severity::Warning ? "warning" : "note";
  return std::string(level) + ": " + d.subject + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

constexpr long kUnbounded = std::numeric_limits<long>::max();

// For every context, the shortest and longest number of traversals by which
// it can be reached from an entry context. Longest is kUnbounded when a cycle
// lies on some such path; -1 marks unreachable contexts.
struct Reach {
  std::vector<long> shortest;
  std::vector<long> longest;
};

Reach reachability(const Grammar& g) {
  const std::size_t n = g.contexts().size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* t = g.context(i).traverse()) {
      for (const auto& e : t->edges) {
        if (e.target < n) succ[i].push_back(e.target);
      }
    }
  }
  Reach r{std::vector<long>(n, -1), std::vector<long>(n, -1)};
  std::vector<std::size_t> frontier = g.entry_contexts();
  for (auto e : frontier) r.shortest[e] = 0;
  for (long depth = 0; !frontier.empty(); ++depth) {
    std::vector<std::size_t> next;
    for (auto c : frontier) {
      for (auto s : succ[c]) {
        if (r.shortest[s] < 0) {
          r.shortest[s] = depth + 1;
          next.push_back(s);
        }
      }
    }
    frontier = std::move(next);
  }
  // Longest walk: bounded by n steps unless a reachable cycle feeds the node.
  std::vector<long> best(n, -1);
  for (auto e : g.entry_contexts()) best[e] = 0;
  for (std::size_t round = 0; round <= n; ++round) {
    std::vector<long> next = best;
    for (std::size_t c = 0; c < n; ++c) {
      if (best[c] < 0) continue;
      for (auto s : succ[c]) next[s] = std::max(next[s], best[c] + 1);
    }
    if (round == n) {
      for (std::size_t c = 0; c < n; ++c) {
        if (next[c] != best[c]) r.longest[c] = kUnbounded;
      }
    }
    best = std::move(next);
  }
  // Anything downstream of an unbounded node is unbounded too.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (r.longest[c] != kUnbounded) continue;
      for (auto s : succ[c]) {
        if (r.longest[s] != kUnbounded) {
          r.longest[s] = kUnbounded;
          changed = true;
        }
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (r.longest[c] != kUnbounded) r.longest[c] = best[c];
  }
  return r;
}

}  // namespace

std::vector<Diagnostic> validate_grammar(const Grammar& g, const SemanticNetwork* network) {
  std::vector<Diagnostic> out;
  auto report = [&out](Severity s, const Node& subject, std::string message) {
    out.push_back({s, to_string(subject), std::move(message)});
  };

  if (g.entry_contexts().empty()) out.push_back({Severity::Error, "grammar", "no entry context"});

  const std::size_t n = g.contexts().size();
  bool targets_ok = true;
  for (const auto& c : g.contexts()) {
    if (const auto* t = c.traverse()) {
      for (const auto& e : t->edges) {
        if (e.target >= n) {
          report(Severity::Error, e.id, "edge target does not exist");
          targets_ok = false;
        }
      }
    }
  }
  if (!targets_ok) return out;

  Reach reach = reachability(g);
  for (std::size_t i = 0; i < n; ++i) {
    const Context& c = g.context(i);
    if (reach.shortest[i] < 0 && !g.entry_contexts().empty()) {
      report(Severity::Warning, c.id, "context is unreachable from every entry context");
    }
    if (c.rules.empty()) report(Severity::Warning, c.id, "context has no rules; walkers halt on arrival");
    bool after_traverse = false;
    for (const auto& r : c.rules) {
      if (after_traverse) report(Severity::Warning, r.id, "rule follows a Traverse rule and is never executed");
      if (std::holds_alternative<TraverseRule>(r.body)) after_traverse = true;
      if (const auto* rr = std::get_if<ReresolveRule>(&r.body)) {
        // The window needs steps+1 history records, i.e. steps traversals.
        if (reach.longest[i] >= 0 && reach.longest[i] != kUnbounded && rr->steps > reach.longest[i]) {
          report(Severity::Error, r.id,
                 "Reresolve steps " + std::to_string(rr->steps) + " exceeds every path back from this context");
        } else if (reach.shortest[i] >= 0 && rr->steps > reach.shortest[i]) {
          report(Severity::Warning, r.id,
                 "Reresolve steps " + std::to_string(rr->steps) + " exceeds the shortest path from an entry; "
                 "re-resolution is skipped while history is shorter");
        }
        if (!rr->obeys_is && !rr->obeys_not) {
          report(Severity::Note, r.id, "Reresolve obeys no attributes");
        }
      }
    }
    for (const auto& a : c.attributes) {
      // steps m refers to the record m positions before the arriving one, so
      // it needs a walk of at least m-1 traversals ending here.
      if (reach.longest[i] >= 0 && reach.longest[i] != kUnbounded && a.steps - 1 > reach.longest[i]) {
        report(Severity::Warning, a.id,
               "steps " + std::to_string(a.steps) + " exceeds the grammar's cycle length; the constraint never applies");
      }
    }
  }

  if (network != nullptr) {
    for (const auto& c : g.contexts()) {
      if (c.for_resource.value != vocab::kResource && !network->lookup(c.for_resource)) {
        report(Severity::Warning, c.id, "forResource " + to_string(c.for_resource) + " does not occur in the network");
      }
      if (const auto* t = c.traverse()) {
        for (const auto& e : t->edges) {
          if (!e.any_predicate && !network->lookup(e.predicate)) {
            report(Severity::Warning, e.id, "predicate " + to_string(e.predicate) + " does not occur in the network");
          }
        }
      }
    }
  }
  return out;
}

}  // namespace gramwalk
