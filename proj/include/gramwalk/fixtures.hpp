#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gramwalk::fixtures {

inline constexpr std::string_view kLanl = "http://www.lanl.gov/";

/// Triple text (with @prefix lines) for the shipped example networks and grammars.
std::string scholarly_ontology();
/// Two universities, three researchers writing three conference articles in a triangle.
std::string toy3();
/// The toy3 triangle at one university plus a separate two-author pair at another.
std::string toy2x2();
/// toy3 plus a researcher whose only article has no coauthor.
std::string single_author();
/// j -> a -> {e, f} over one predicate.
std::string fig10();
/// Small connected network mixing several predicates and directions.
std::string mixed();

std::string coaut_grammar();
/// coaut with a teleport at the conference article (probability 0.15, window 2).
std::string coaut_prime_grammar();
/// Unconstrained walk: any edge, either direction, uniform teleport with probability d.
std::string unconstrained_grammar(double d = 0.15);
/// One context over every vertex following the fig10 predicate both ways.
std::string fig10_grammar();

struct Example {
  std::string name;
  std::string file_name;
  std::string text;
};

/// All examples in a fixed order.
std::vector<Example> examples();
std::optional<Example> example(std::string_view name);

}  // namespace gramwalk::fixtures
