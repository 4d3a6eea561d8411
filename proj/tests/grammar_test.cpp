#include <gtest/gtest.h>

#include <algorithm>
#include <regex>

#include "gramwalk/grammar.hpp"
#include "support.hpp"

using namespace gramwalk;
using testing_support::coaut;
using testing_support::grammar_from;
using testing_support::lanl;

namespace {

const Context& ctx(const Grammar& g, const std::string& local) {
  auto i = g.find(coaut(local));
  if (!i) throw std::runtime_error("no context " + local);
  return g.context(*i);
}

bool mentions(const std::vector<Diagnostic>& ds, Severity s, const std::string& needle) {
  return std::any_of(ds.begin(), ds.end(),
                     [&](const Diagnostic& d) { return d.severity == s && d.message.find(needle) != std::string::npos; });
}

std::string without(std::string text, const std::string& line) {
  auto pos = text.find(line);
  if (pos == std::string::npos) throw std::runtime_error("line not found: " + line);
  text.erase(pos, line.size());
  return text;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  if (pos == std::string::npos) throw std::runtime_error("text not found: " + from);
  text.replace(pos, from.size(), to);
  return text;
}

}  // namespace

TEST(Grammar, ParsesCoaut) {
  auto g = grammar_from(fixtures::coaut_grammar());
  ASSERT_EQ(g.contexts().size(), 4u);
  ASSERT_EQ(g.entry_contexts().size(), 1u);
  EXPECT_EQ(g.context(g.entry_contexts()[0]).id, coaut("University_0"));

  const auto& u = ctx(g, "University_0");
  EXPECT_EQ(u.for_resource, lanl("University"));
  ASSERT_EQ(u.rules.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<SubmitCountsRule>(u.rules[0].body));
  const auto* t = u.traverse();
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->edges.size(), 1u);
  EXPECT_EQ(t->edges[0].direction, Direction::In);
  EXPECT_EQ(t->edges[0].predicate, lanl("locatedAt"));
  EXPECT_EQ(g.context(t->edges[0].target).id, coaut("Researcher_1"));

  const auto& r1 = ctx(g, "Researcher_1");
  EXPECT_TRUE(std::holds_alternative<IncrCountRule>(r1.rules[0].body));
  ASSERT_EQ(r1.attributes.size(), 1u);
  EXPECT_EQ(r1.attributes[0].kind, AttributeKind::Is);
  EXPECT_EQ(r1.attributes[0].steps, 2);

  const auto& r3 = ctx(g, "Researcher_3");
  ASSERT_EQ(r3.attributes.size(), 1u);
  EXPECT_EQ(r3.attributes[0].kind, AttributeKind::Not);
  EXPECT_EQ(r3.attributes[0].steps, 2);
  EXPECT_EQ(g.max_lookback(), 2);
}

TEST(Grammar, ParsesCoautPrime) {
  auto g = grammar_from(fixtures::coaut_prime_grammar());
  const auto& c = ctx(g, "ConferenceArticle_2");
  ASSERT_EQ(c.rules.size(), 2u);
  const auto* rr = std::get_if<ReresolveRule>(&c.rules[0].body);
  ASSERT_NE(rr, nullptr);
  EXPECT_DOUBLE_EQ(rr->probability, 0.15);
  EXPECT_EQ(rr->steps, 2);
  EXPECT_FALSE(rr->obeys_is);
  EXPECT_FALSE(rr->obeys_not);
  EXPECT_TRUE(std::holds_alternative<TraverseRule>(c.rules[1].body));
}

TEST(Grammar, ParsesWildcards) {
  auto g = grammar_from(fixtures::unconstrained_grammar(0.3));
  ASSERT_EQ(g.contexts().size(), 1u);
  const auto& c = g.context(0);
  EXPECT_EQ(c.for_resource, Node::iri(vocab::kResource));
  const auto* t = c.traverse();
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->edges.size(), 2u);
  for (const auto& e : t->edges) {
    EXPECT_TRUE(e.any_predicate);
    EXPECT_EQ(e.target, 0u);
  }
  EXPECT_DOUBLE_EQ(std::get<ReresolveRule>(c.rules[0].body).probability, 0.3);
  EXPECT_EQ(std::get<ReresolveRule>(c.rules[0].body).steps, 0);
}

TEST(Grammar, SerializeRoundTrip) {
  for (const auto& text : {fixtures::coaut_grammar(), fixtures::coaut_prime_grammar(), fixtures::unconstrained_grammar(),
                           fixtures::fig10_grammar()}) {
    auto g = grammar_from(text);
    SemanticNetwork net;
    net.add_batch(serialize_grammar(g));
    auto back = parse_grammar(net).grammar;
    EXPECT_EQ(back, g);
  }
}

TEST(Grammar, SerializeUsesCustomNamespace) {
  auto g = grammar_from(fixtures::coaut_grammar());
  Vocabulary v("http://example.org/rwr#");
  SemanticNetwork net;
  net.add_batch(serialize_grammar(g, v));
  EXPECT_TRUE(net.lookup(Node::iri("http://example.org/rwr#Traverse")));
  EXPECT_FALSE(net.lookup(Node::iri("urn:rwr:Traverse")));
  EXPECT_EQ(parse_grammar(net, {v, false}).grammar, g);
}

TEST(Grammar, ValidCoautHasNoErrors) {
  auto net = parse_triples(fixtures::toy3());
  for (const auto& text : {fixtures::coaut_grammar(), fixtures::coaut_prime_grammar()}) {
    auto ds = validate_grammar(grammar_from(text), &net);
    EXPECT_FALSE(has_errors(ds));
  }
}

TEST(Grammar, MissingForResourceIsAnError) {
  auto text = without(fixtures::coaut_grammar(), "g:Researcher_3 rwr:forResource lanl:Researcher .\n");
  try {
    grammar_from(text);
    FAIL() << "expected GrammarError";
  } catch (const GrammarError& e) {
    EXPECT_NE(e.subject().find("Researcher_3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("forResource"), std::string::npos);
  }
}

TEST(Grammar, RuleSequenceGapIsAnError) {
  auto text = replace(fixtures::coaut_prime_grammar(), "rdf:_2 g:Traverse_2", "rdf:_3 g:Traverse_2");
  EXPECT_THROW(grammar_from(text), GrammarError);
}

TEST(Grammar, EdgeTargetMustBeAContext) {
  auto text = replace(fixtures::coaut_grammar(), "g:Edge_3 rwr:hasObject g:University_0",
                      "g:Edge_3 rwr:hasObject g:Nowhere");
  EXPECT_THROW(grammar_from(text), GrammarError);
}

TEST(Grammar, EdgeTypedBothWaysIsAnError) {
  auto text = fixtures::coaut_grammar() + "g:Edge_0 rdf:type rwr:OutEdge .\n";
  EXPECT_THROW(grammar_from(text), GrammarError);
}

TEST(Grammar, TwoTraverseRulesIsAnError) {
  auto text = fixtures::coaut_grammar() + "g:University_0_rules rdf:_3 g:Traverse_1 .\n";
  EXPECT_THROW(grammar_from(text), GrammarError);
}

TEST(Grammar, BadReresolveValues) {
  auto base = fixtures::coaut_prime_grammar();
  EXPECT_THROW(grammar_from(replace(base, "rwr:probability \"0.15\"", "rwr:probability \"1.5\"")), GrammarError);
  EXPECT_THROW(grammar_from(replace(base, "rwr:probability \"0.15\"", "rwr:probability \"0\"")), GrammarError);
  EXPECT_THROW(grammar_from(replace(base, "rwr:probability \"0.15\"", "rwr:probability \"often\"")), GrammarError);
  EXPECT_THROW(grammar_from(replace(base, "g:Reresolve_2 rwr:steps \"2\"", "g:Reresolve_2 rwr:steps \"-1\"")),
               GrammarError);
}

TEST(Grammar, AttributeStepsMustBePositive) {
  EXPECT_THROW(grammar_from(replace(fixtures::coaut_grammar(), "g:Is_1 rwr:steps \"2\"", "g:Is_1 rwr:steps \"0\"")),
               GrammarError);
}

TEST(Grammar, ObeysAttributes) {
  auto text = fixtures::coaut_prime_grammar() + "g:Reresolve_2 rwr:obeys rwr:Not .\n";
  auto g = grammar_from(text);
  const auto& rr = std::get<ReresolveRule>(ctx(g, "ConferenceArticle_2").rules[0].body);
  EXPECT_TRUE(rr.obeys_not);
  EXPECT_FALSE(rr.obeys_is);
  EXPECT_THROW(grammar_from(fixtures::coaut_prime_grammar() + "g:Reresolve_2 rwr:obeys lanl:wrote .\n"), GrammarError);
}

TEST(Grammar, MisspelledVocabularyNeedsLenientMode) {
  auto text = replace(fixtures::coaut_grammar(), "g:Traverse_0 rwr:hasEdge g:Edge_0",
                      "g:Traverse_0 rdfs:hasEdge g:Edge_0");
  text = replace(text, "g:Researcher_1 rwr:forResource", "g:Researcher_1 rdf:forResource");
  auto net = parse_triples(text);
  try {
    parse_grammar(net);
    FAIL() << "expected GrammarError";
  } catch (const GrammarError& e) {
    EXPECT_NE(std::string(e.what()).find("lenient"), std::string::npos);
  }
  auto parsed = parse_grammar(net, {Vocabulary(), true});
  EXPECT_EQ(parsed.grammar, grammar_from(fixtures::coaut_grammar()));
  EXPECT_EQ(parsed.warnings.size(), 2u);
}

TEST(Grammar, NoEntryContextIsADiagnostic) {
  auto text = replace(fixtures::coaut_grammar(), "g:University_0 rdf:type rwr:EntryContext",
                      "g:University_0 rdf:type rwr:Context");
  auto ds = validate_grammar(grammar_from(text));
  EXPECT_TRUE(has_errors(ds));
  EXPECT_TRUE(mentions(ds, Severity::Error, "no entry context"));
}

TEST(Grammar, UnreachableAndEmptyContextsWarn) {
  auto text = fixtures::coaut_grammar() + R"(g:Island rdf:type rwr:Context .
g:Island rwr:forResource lanl:Article .
)";
  auto ds = validate_grammar(grammar_from(text));
  EXPECT_FALSE(has_errors(ds));
  EXPECT_TRUE(mentions(ds, Severity::Warning, "unreachable"));
  EXPECT_TRUE(mentions(ds, Severity::Warning, "no rules"));
}

TEST(Grammar, RulesAfterTraverseWarn) {
  auto text = fixtures::coaut_grammar() + "g:Researcher_1_rules rdf:_3 g:IncrCount_3 .\n";
  auto ds = validate_grammar(grammar_from(text));
  EXPECT_TRUE(mentions(ds, Severity::Warning, "never executed"));
}

TEST(Grammar, ReresolveNeedsEnoughHistory) {
  // From the entry there is no history at all, so a 2-step window never fits.
  auto text = fixtures::coaut_grammar() + R"(g:University_0_rules rdf:_3 g:Early .
g:Early rdf:type rwr:Reresolve .
g:Early rwr:probability "0.5" .
g:Early rwr:steps "9" .
)";
  auto ds = validate_grammar(grammar_from(text));
  EXPECT_TRUE(mentions(ds, Severity::Warning, "Reresolve steps 9"));
}

TEST(Grammar, NetworkCheckFlagsUnknownNames) {
  auto net = parse_triples(fixtures::fig10());
  auto ds = validate_grammar(grammar_from(fixtures::coaut_grammar()), &net);
  EXPECT_FALSE(has_errors(ds));
  EXPECT_TRUE(mentions(ds, Severity::Warning, "does not occur in the network"));
}

TEST(Grammar, DiagnosticFormatting) {
  Diagnostic d{Severity::Warning, "<urn:x>", "something odd"};
  auto s = to_string(d);
  EXPECT_NE(s.find("warning"), std::string::npos);
  EXPECT_NE(s.find("<urn:x>"), std::string::npos);
  EXPECT_NE(s.find("something odd"), std::string::npos);
}
