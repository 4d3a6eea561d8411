#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gramwalk {

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

inline const std::string kType = std::string(kRdf) + "type";
inline const std::string kSeq = std::string(kRdf) + "Seq";
inline const std::string kSubClassOf = std::string(kRdfs) + "subClassOf";
inline const std::string kSubPropertyOf = std::string(kRdfs) + "subPropertyOf";
inline const std::string kDomain = std::string(kRdfs) + "domain";
inline const std::string kRange = std::string(kRdfs) + "range";
// Every instance vertex is an rdfs:Resource.
inline const std::string kResource = std::string(kRdfs) + "Resource";
}  // namespace vocab

enum class NodeKind : std::uint8_t { Iri, Blank, Literal };

/// An RDF term. `datatype` is only meaningful for literals and may be empty.
struct Node {
  NodeKind kind = NodeKind::Iri;
  std::string value;
  std::string datatype;

  static Node iri(std::string v) { return {NodeKind::Iri, std::move(v), {}}; }
  static Node blank(std::string id) { return {NodeKind::Blank, std::move(id), {}}; }
  static Node literal(std::string lexical, std::string datatype = {}) {
    return {NodeKind::Literal, std::move(lexical), std::move(datatype)};
  }

  bool is_iri() const { return kind == NodeKind::Iri; }
  bool is_literal() const { return kind == NodeKind::Literal; }

  friend bool operator==(const Node&, const Node&) = default;
  friend auto operator<=>(const Node&, const Node&) = default;
};

/// Human-readable rendering, used in diagnostics and output keys.
std::string to_string(const Node& n);

struct NodeHash {
  std::size_t operator()(const Node& n) const noexcept;
};

struct Triple {
  Node subject;
  Node predicate;
  Node object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

using TermId = std::uint32_t;
inline constexpr TermId kNoTerm = static_cast<TermId>(-1);

/// Interned triple; ids index into SemanticNetwork::term().
struct TripleRef {
  TermId subject = kNoTerm;
  TermId predicate = kNoTerm;
  TermId object = kNoTerm;

  friend bool operator==(const TripleRef&, const TripleRef&) = default;
  friend auto operator<=>(const TripleRef&, const TripleRef&) = default;
};

/// Thrown when a triple violates the data model (literal subject, non-IRI
/// predicate).
class StructuralError : public std::runtime_error {
 public:
  StructuralError(std::string position, const std::string& message)
      : std::runtime_error(message), position_(std::move(position)) {}
  const std::string& position() const { return position_; }

 private:
  std::string position_;
};

/// In-memory triple set with subject/object indices and precomputed RDFS
/// subsumption (subClassOf / subPropertyOf closures, asserted types).
///
/// Mutation happens in a single-owner loading phase; afterwards the object is
/// only read, so concurrent readers need no synchronization. Closures are
/// rebuilt eagerly at the end of every add()/add_batch() that touches schema
/// vocabulary.
class SemanticNetwork {
 public:
  SemanticNetwork();

  /// Returns true if the triple was new.
  bool add(const Triple& t);
  /// Adds all triples and refreshes the schema once. Returns number added.
  std::size_t add_batch(std::span<const Triple> ts);

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  std::span<const TripleRef> triples() const { return triples_; }

  const Node& term(TermId id) const { return terms_.at(id); }
  std::size_t term_count() const { return terms_.size(); }
  std::optional<TermId> lookup(const Node& n) const;
  std::optional<TermId> lookup_iri(std::string_view iri) const;
  Triple resolve(const TripleRef& t) const;
  bool contains(const Triple& t) const;

  std::span<const TripleRef> out(TermId v) const;
  std::span<const TripleRef> in(TermId v) const;

  std::vector<Triple> out_triples(const Node& v) const;
  std::vector<Triple> in_triples(const Node& v) const;

  /// Instance vertices: subjects and resource objects of non-schema triples,
  /// and subjects of rdf:type assertions other than class/property
  /// declarations. Classes that only occur as type objects, in schema axioms,
  /// or in their own declaration are not vertices.
  std::span<const TermId> vertices() const { return vertices_; }
  bool is_vertex(TermId v) const;

  bool is_instance_of(TermId v, TermId cls) const;
  bool is_instance_of(const Node& v, const Node& cls) const;
  /// Sorted by term id.
  std::vector<TermId> instances_of(TermId cls) const;
  std::vector<Node> instances_of(const Node& cls) const;

  bool is_subproperty_of(TermId p, TermId q) const;
  bool is_subproperty_of(const Node& p, const Node& q) const;
  bool is_subclass_of(TermId c, TermId d) const;

  /// Asserted rdf:type classes of v.
  std::span<const TermId> asserted_types(TermId v) const;

  TermId type_id() const { return type_; }

 private:
  TermId intern(const Node& n);
  bool insert(const Triple& t);
  void refresh_schema();

  struct RefHash {
    std::size_t operator()(const TripleRef& t) const noexcept;
  };

  std::vector<Node> terms_;
  std::unordered_map<Node, TermId, NodeHash> term_ids_;

  std::vector<TripleRef> triples_;
  std::unordered_map<TripleRef, std::size_t, RefHash> triple_set_;
  std::unordered_map<TermId, std::vector<TripleRef>> subject_index_;
  std::unordered_map<TermId, std::vector<TripleRef>> object_index_;

  // Schema view: strict (non-reflexive) ancestor sets, sorted. Reflexivity is
  // handled by the query functions.
  std::unordered_map<TermId, std::vector<TermId>> superclasses_;
  std::unordered_map<TermId, std::vector<TermId>> superproperties_;
  std::unordered_map<TermId, std::vector<TermId>> asserted_types_;
  // asserted types closed under subClassOf, sorted.
  std::unordered_map<TermId, std::vector<TermId>> entailed_types_;
  std::vector<TermId> vertices_;
  std::vector<bool> is_vertex_;
  bool schema_dirty_ = false;

  TermId type_ = kNoTerm;
  TermId subclass_ = kNoTerm;
  TermId subproperty_ = kNoTerm;
  TermId domain_ = kNoTerm;
  TermId range_ = kNoTerm;
  TermId resource_ = kNoTerm;
};

}  // namespace gramwalk
