#include "gramwalk/fixtures.hpp"

#include <charconv>

namespace gramwalk::fixtures {

namespace {

constexpr std::string_view kPrefixes = R"(@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix lanl: <http://www.lanl.gov/> .
@prefix ex: <http://example.org/> .
@prefix rwr: <urn:rwr:> .
)";

constexpr std::string_view kOntology = R"(lanl:Institution rdf:type rdfs:Class .
lanl:University rdf:type rdfs:Class .
lanl:University rdfs:subClassOf lanl:Institution .
lanl:Laboratory rdf:type rdfs:Class .
lanl:Laboratory rdfs:subClassOf lanl:Institution .
lanl:Researcher rdf:type rdfs:Class .
lanl:Article rdf:type rdfs:Class .
lanl:ConferenceArticle rdf:type rdfs:Class .
lanl:ConferenceArticle rdfs:subClassOf lanl:Article .
lanl:JournalArticle rdf:type rdfs:Class .
lanl:JournalArticle rdfs:subClassOf lanl:Article .
lanl:locatedAt rdf:type rdf:Property .
lanl:locatedAt rdfs:domain lanl:Researcher .
lanl:locatedAt rdfs:range lanl:Institution .
lanl:wrote rdf:type rdf:Property .
lanl:wrote rdfs:domain lanl:Researcher .
lanl:wrote rdfs:range lanl:Article .
lanl:cites rdf:type rdf:Property .
lanl:cites rdfs:domain lanl:Article .
lanl:cites rdfs:range lanl:Article .
lanl:hasFirstName rdf:type rdf:Property .
lanl:hasFirstName rdfs:domain lanl:Researcher .
)";

constexpr std::string_view kTriangle = R"(lanl:U1 rdf:type lanl:University .
lanl:r1 rdf:type lanl:Researcher .
lanl:r2 rdf:type lanl:Researcher .
lanl:r3 rdf:type lanl:Researcher .
lanl:c1 rdf:type lanl:ConferenceArticle .
lanl:c2 rdf:type lanl:ConferenceArticle .
lanl:c3 rdf:type lanl:ConferenceArticle .
lanl:r1 lanl:wrote lanl:c1 .
lanl:r1 lanl:wrote lanl:c3 .
lanl:r2 lanl:wrote lanl:c1 .
lanl:r2 lanl:wrote lanl:c2 .
lanl:r3 lanl:wrote lanl:c2 .
lanl:r3 lanl:wrote lanl:c3 .
)";

std::string join(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out += p;
  return out;
}

}  // namespace

std::string scholarly_ontology() { return join({kPrefixes, kOntology}); }

std::string toy3() {
  return join({kPrefixes, kOntology, kTriangle, R"(lanl:U2 rdf:type lanl:University .
lanl:r1 lanl:locatedAt lanl:U1 .
lanl:r2 lanl:locatedAt lanl:U1 .
lanl:r3 lanl:locatedAt lanl:U2 .
lanl:r1 lanl:hasFirstName "Marko"^^xsd:string .
)"});
}

std::string toy2x2() {
  return join({kPrefixes, kOntology, kTriangle, R"(lanl:U2 rdf:type lanl:University .
lanl:r4 rdf:type lanl:Researcher .
lanl:r5 rdf:type lanl:Researcher .
lanl:c4 rdf:type lanl:ConferenceArticle .
lanl:r1 lanl:locatedAt lanl:U1 .
lanl:r2 lanl:locatedAt lanl:U1 .
lanl:r3 lanl:locatedAt lanl:U1 .
lanl:r4 lanl:locatedAt lanl:U2 .
lanl:r5 lanl:locatedAt lanl:U2 .
lanl:r4 lanl:wrote lanl:c4 .
lanl:r5 lanl:wrote lanl:c4 .
)"});
}

std::string single_author() {
  return toy3() + R"(lanl:r4 rdf:type lanl:Researcher .
lanl:c4 rdf:type lanl:ConferenceArticle .
lanl:r4 lanl:locatedAt lanl:U2 .
lanl:r4 lanl:wrote lanl:c4 .
)";
}

std::string fig10() {
  return join({kPrefixes, R"(ex:j ex:omega ex:a .
ex:a ex:omega ex:e .
ex:a ex:omega ex:f .
)"});
}

std::string mixed() {
  return join({kPrefixes, R"(ex:a ex:knows ex:b .
ex:b ex:likes ex:c .
ex:c ex:knows ex:a .
ex:c ex:cites ex:d .
ex:d ex:knows ex:b .
ex:e ex:likes ex:d .
ex:f ex:cites ex:e .
ex:a ex:likes ex:d .
ex:a ex:name "a" .
)"});
}

namespace {

constexpr std::string_view kCoautHead = R"(@prefix g: <http://www.lanl.gov/grammar/coaut#> .
g:University_0 rdf:type rwr:EntryContext .
g:University_0 rwr:forResource lanl:University .
g:University_0 rwr:hasRules g:University_0_rules .
g:University_0_rules rdf:type rdf:Seq .
g:University_0_rules rdf:_1 g:SubmitCounts_0 .
g:University_0_rules rdf:_2 g:Traverse_0 .
g:SubmitCounts_0 rdf:type rwr:SubmitCounts .
g:Traverse_0 rdf:type rwr:Traverse .
g:Traverse_0 rwr:hasEdge g:Edge_0 .
g:Edge_0 rdf:type rwr:InEdge .
g:Edge_0 rwr:hasPredicate lanl:locatedAt .
g:Edge_0 rwr:hasSubject g:Researcher_1 .
g:Researcher_1 rdf:type rwr:Context .
g:Researcher_1 rwr:forResource lanl:Researcher .
g:Researcher_1 rwr:hasRules g:Researcher_1_rules .
g:Researcher_1_rules rdf:type rdf:Seq .
g:Researcher_1_rules rdf:_1 g:IncrCount_1 .
g:Researcher_1_rules rdf:_2 g:Traverse_1 .
g:IncrCount_1 rdf:type rwr:IncrCount .
g:Traverse_1 rdf:type rwr:Traverse .
g:Traverse_1 rwr:hasEdge g:Edge_1 .
g:Edge_1 rdf:type rwr:OutEdge .
g:Edge_1 rwr:hasPredicate lanl:wrote .
g:Edge_1 rwr:hasObject g:ConferenceArticle_2 .
g:Researcher_1 rwr:hasAttributes g:Researcher_1_attributes .
g:Researcher_1_attributes rwr:hasAttribute g:Is_1 .
g:Is_1 rdf:type rwr:Is .
g:Is_1 rwr:steps "2" .
g:ConferenceArticle_2 rdf:type rwr:Context .
g:ConferenceArticle_2 rwr:forResource lanl:ConferenceArticle .
g:ConferenceArticle_2 rwr:hasRules g:ConferenceArticle_2_rules .
g:ConferenceArticle_2_rules rdf:type rdf:Seq .
g:Traverse_2 rdf:type rwr:Traverse .
g:Traverse_2 rwr:hasEdge g:Edge_2 .
g:Edge_2 rdf:type rwr:InEdge .
g:Edge_2 rwr:hasPredicate lanl:wrote .
g:Edge_2 rwr:hasSubject g:Researcher_3 .
g:Researcher_3 rdf:type rwr:Context .
g:Researcher_3 rwr:forResource lanl:Researcher .
g:Researcher_3 rwr:hasRules g:Researcher_3_rules .
g:Researcher_3_rules rdf:type rdf:Seq .
g:Researcher_3_rules rdf:_1 g:IncrCount_3 .
g:Researcher_3_rules rdf:_2 g:Traverse_3 .
g:IncrCount_3 rdf:type rwr:IncrCount .
g:Traverse_3 rdf:type rwr:Traverse .
g:Traverse_3 rwr:hasEdge g:Edge_3 .
g:Edge_3 rdf:type rwr:OutEdge .
g:Edge_3 rwr:hasPredicate lanl:locatedAt .
g:Edge_3 rwr:hasObject g:University_0 .
g:Researcher_3 rwr:hasAttributes g:Researcher_3_attributes .
g:Researcher_3_attributes rwr:hasAttribute g:Not_3 .
g:Not_3 rdf:type rwr:Not .
g:Not_3 rwr:steps "2" .
)";

std::string format_probability(double d) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, end);
}

}  // namespace

std::string coaut_grammar() {
  return join({kPrefixes, kCoautHead, "g:ConferenceArticle_2_rules rdf:_1 g:Traverse_2 .\n"});
}

std::string coaut_prime_grammar() {
  return join({kPrefixes, kCoautHead, R"(g:ConferenceArticle_2_rules rdf:_1 g:Reresolve_2 .
g:ConferenceArticle_2_rules rdf:_2 g:Traverse_2 .
g:Reresolve_2 rdf:type rwr:Reresolve .
g:Reresolve_2 rwr:probability "0.15" .
g:Reresolve_2 rwr:steps "2" .
)"});
}

std::string unconstrained_grammar(double d) {
  return join({kPrefixes, R"(@prefix g: <http://example.org/grammar/unconstrained#> .
g:Vertex_0 rdf:type rwr:EntryContext .
g:Vertex_0 rwr:forResource rdfs:Resource .
g:Vertex_0 rwr:hasRules g:Vertex_0_rules .
g:Vertex_0_rules rdf:type rdf:Seq .
g:Vertex_0_rules rdf:_1 g:Reresolve_0 .
g:Vertex_0_rules rdf:_2 g:IncrCount_0 .
g:Vertex_0_rules rdf:_3 g:SubmitCounts_0 .
g:Vertex_0_rules rdf:_4 g:Traverse_0 .
g:Reresolve_0 rdf:type rwr:Reresolve .
g:Reresolve_0 rwr:probability ")",
               format_probability(d), R"(" .
g:Reresolve_0 rwr:steps "0" .
g:IncrCount_0 rdf:type rwr:IncrCount .
g:SubmitCounts_0 rdf:type rwr:SubmitCounts .
g:Traverse_0 rdf:type rwr:Traverse .
g:Traverse_0 rwr:hasEdge g:Out_0 .
g:Traverse_0 rwr:hasEdge g:In_0 .
g:Out_0 rdf:type rwr:OutEdge .
g:Out_0 rwr:hasPredicate rwr:AnyProperty .
g:Out_0 rwr:hasObject g:Vertex_0 .
g:In_0 rdf:type rwr:InEdge .
g:In_0 rwr:hasPredicate rwr:AnyProperty .
g:In_0 rwr:hasSubject g:Vertex_0 .
)"});
}

std::string fig10_grammar() {
  return join({kPrefixes, R"(@prefix g: <http://example.org/grammar/fig10#> .
g:Vertex_0 rdf:type rwr:EntryContext .
g:Vertex_0 rwr:forResource rdfs:Resource .
g:Vertex_0 rwr:hasRules g:Vertex_0_rules .
g:Vertex_0_rules rdf:type rdf:Seq .
g:Vertex_0_rules rdf:_1 g:IncrCount_0 .
g:Vertex_0_rules rdf:_2 g:SubmitCounts_0 .
g:Vertex_0_rules rdf:_3 g:Traverse_0 .
g:IncrCount_0 rdf:type rwr:IncrCount .
g:SubmitCounts_0 rdf:type rwr:SubmitCounts .
g:Traverse_0 rdf:type rwr:Traverse .
g:Traverse_0 rwr:hasEdge g:Out_0 .
g:Traverse_0 rwr:hasEdge g:In_0 .
g:Out_0 rdf:type rwr:OutEdge .
g:Out_0 rwr:hasPredicate ex:omega .
g:Out_0 rwr:hasObject g:Vertex_0 .
g:In_0 rdf:type rwr:InEdge .
g:In_0 rwr:hasPredicate ex:omega .
g:In_0 rwr:hasSubject g:Vertex_0 .
)"});
}

std::vector<Example> examples() {
  return {
      {"scholarly-ontology", "scholarly-ontology.nt", scholarly_ontology()},
      {"toy3", "toy3.nt", toy3()},
      {"toy2x2", "toy2x2.nt", toy2x2()},
      {"single-author", "single-author.nt", single_author()},
      {"fig10", "fig10.nt", fig10()},
      {"mixed", "mixed.nt", mixed()},
      {"coaut", "coaut.nt", coaut_grammar()},
      {"coaut-prime", "coaut-prime.nt", coaut_prime_grammar()},
      {"unconstrained", "unconstrained.nt", unconstrained_grammar()},
      {"fig10-grammar", "fig10-grammar.nt", fig10_grammar()},
  };
}

std::optional<Example> example(std::string_view name) {
  for (auto& e : examples()) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

}  // namespace gramwalk::fixtures
