#pragma once

#include <string>

#include "gramwalk/fixtures.hpp"
#include "gramwalk/grammar.hpp"
#include "gramwalk/graph_store.hpp"
#include "gramwalk/triple_io.hpp"

namespace testing_support {

inline gramwalk::Node lanl(const std::string& local) {
  return gramwalk::Node::iri(std::string(gramwalk::fixtures::kLanl) + local);
}

inline gramwalk::Node ex(const std::string& local) { return gramwalk::Node::iri("http://example.org/" + local); }

inline gramwalk::Node coaut(const std::string& local) {
  return gramwalk::Node::iri("http://www.lanl.gov/grammar/coaut#" + local);
}

inline gramwalk::Grammar grammar_from(const std::string& text) {
  return gramwalk::parse_grammar(gramwalk::parse_triples(text)).grammar;
}

inline gramwalk::TermId id(const gramwalk::SemanticNetwork& net, const gramwalk::Node& n) {
  auto t = net.lookup(n);
  if (!t) throw std::runtime_error("term not in network: " + n.value);
  return *t;
}

}  // namespace testing_support
