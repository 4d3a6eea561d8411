#include "gramwalk/graph_store.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace gramwalk {

std::string to_string(const Node& n) {
  switch (n.kind) {
    case NodeKind::Iri:
      return n.value;
    case NodeKind::Blank:
      return "_:" + n.value;
    case NodeKind::Literal:
      if (n.datatype.empty()) return "\"" + n.value + "\"";
      return "\"" + n.value + "\"^^<" + n.datatype + ">";
  }
  return n.value;
}

std::size_t NodeHash::operator()(const Node& n) const noexcept {
  std::size_t h = std::hash<std::string>{}(n.value);
  h ^= std::hash<std::string>{}(n.datatype) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ (static_cast<std::size_t>(n.kind) * 0x100000001b3ULL);
}

std::size_t SemanticNetwork::RefHash::operator()(const TripleRef& t) const noexcept {
  std::uint64_t h = t.subject;
  h = h * 0x9e3779b97f4a7c15ULL ^ t.predicate;
  h = h * 0x9e3779b97f4a7c15ULL ^ t.object;
  return static_cast<std::size_t>(h ^ (h >> 29));
}

SemanticNetwork::SemanticNetwork() {
  type_ = intern(Node::iri(vocab::kType));
  subclass_ = intern(Node::iri(vocab::kSubClassOf));
  subproperty_ = intern(Node::iri(vocab::kSubPropertyOf));
  domain_ = intern(Node::iri(vocab::kDomain));
  range_ = intern(Node::iri(vocab::kRange));
  resource_ = intern(Node::iri(vocab::kResource));
}

TermId SemanticNetwork::intern(const Node& n) {
  auto it = term_ids_.find(n);
  if (it != term_ids_.end()) return it->second;
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(n);
  term_ids_.emplace(n, id);
  is_vertex_.push_back(false);
  return id;
}

std::optional<TermId> SemanticNetwork::lookup(const Node& n) const {
  auto it = term_ids_.find(n);
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> SemanticNetwork::lookup_iri(std::string_view iri) const {
  return lookup(Node::iri(std::string(iri)));
}

Triple SemanticNetwork::resolve(const TripleRef& t) const {
  return {term(t.subject), term(t.predicate), term(t.object)};
}

bool SemanticNetwork::contains(const Triple& t) const {
  auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
  if (!s || !p || !o) return false;
  return triple_set_.contains(TripleRef{*s, *p, *o});
}

namespace {

bool is_schema_class(const Node& n) {
  static const std::array<std::string, 6> kinds = {
      std::string(vocab::kRdfs) + "Class",
      std::string(vocab::kRdf) + "Property",
      std::string(vocab::kRdfs) + "Datatype",
      "http://www.w3.org/2002/07/owl#Class",
      "http://www.w3.org/2002/07/owl#ObjectProperty",
      "http://www.w3.org/2002/07/owl#DatatypeProperty",
  };
  return n.is_iri() && std::find(kinds.begin(), kinds.end(), n.value) != kinds.end();
}

}  // namespace

bool SemanticNetwork::insert(const Triple& t) {
  if (t.subject.is_literal()) {
    throw StructuralError("subject", "literal " + to_string(t.subject) + " cannot be a triple subject");
  }
  if (!t.predicate.is_iri()) {
    throw StructuralError("predicate", "predicate " + to_string(t.predicate) + " must be an IRI");
  }
  TripleRef ref{intern(t.subject), intern(t.predicate), intern(t.object)};
  if (triple_set_.contains(ref)) return false;
  triple_set_.emplace(ref, triples_.size());
  triples_.push_back(ref);
  subject_index_[ref.subject].push_back(ref);
  object_index_[ref.object].push_back(ref);

  auto mark_vertex = [this](TermId v) {
    if (terms_[v].is_literal() || is_vertex_[v]) return;
    is_vertex_[v] = true;
    vertices_.insert(std::lower_bound(vertices_.begin(), vertices_.end(), v), v);
  };
  const TermId p = ref.predicate;
  if (p == type_) {
    // Declaring a class or property is schema, not an instance statement.
    if (!is_schema_class(terms_[ref.object])) mark_vertex(ref.subject);
    auto& types = asserted_types_[ref.subject];
    types.insert(std::lower_bound(types.begin(), types.end(), ref.object), ref.object);
    schema_dirty_ = true;
  } else if (p == subclass_ || p == subproperty_) {
    schema_dirty_ = true;
  } else if (p != domain_ && p != range_) {
    mark_vertex(ref.subject);
    mark_vertex(ref.object);
  }
  return true;
}

bool SemanticNetwork::add(const Triple& t) {
  bool added = insert(t);
  if (schema_dirty_) refresh_schema();
  return added;
}

std::size_t SemanticNetwork::add_batch(std::span<const Triple> ts) {
  std::size_t added = 0;
  for (const auto& t : ts) added += insert(t) ? 1 : 0;
  if (schema_dirty_) refresh_schema();
  return added;
}

namespace {

// Strict ancestors of every node of a directed "child -> parent" relation.
std::unordered_map<TermId, std::vector<TermId>> transitive_ancestors(
    const std::unordered_map<TermId, std::vector<TermId>>& parents) {
  std::unordered_map<TermId, std::vector<TermId>> result;
  for (const auto& [start, _] : parents) {
    std::vector<TermId> seen;
    std::deque<TermId> queue{start};
    while (!queue.empty()) {
      TermId cur = queue.front();
      queue.pop_front();
      auto it = parents.find(cur);
      if (it == parents.end()) continue;
      for (TermId up : it->second) {
        if (std::find(seen.begin(), seen.end(), up) != seen.end()) continue;
        seen.push_back(up);
        queue.push_back(up);
      }
    }
    // A cycle makes start its own ancestor; reflexivity is implicit anyway.
    std::erase(seen, start);
    std::sort(seen.begin(), seen.end());
    result.emplace(start, std::move(seen));
  }
  return result;
}

}  // namespace

void SemanticNetwork::refresh_schema() {
  std::unordered_map<TermId, std::vector<TermId>> class_parents, prop_parents;
  for (const auto& t : triples_) {
    if (t.predicate == subclass_) class_parents[t.subject].push_back(t.object);
    if (t.predicate == subproperty_) prop_parents[t.subject].push_back(t.object);
  }
  superclasses_ = transitive_ancestors(class_parents);
  superproperties_ = transitive_ancestors(prop_parents);

  entailed_types_.clear();
  for (const auto& [v, types] : asserted_types_) {
    std::vector<TermId> closed(types.begin(), types.end());
    for (TermId c : types) {
      auto it = superclasses_.find(c);
      if (it != superclasses_.end()) closed.insert(closed.end(), it->second.begin(), it->second.end());
    }
    std::sort(closed.begin(), closed.end());
    closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
    entailed_types_.emplace(v, std::move(closed));
  }
  schema_dirty_ = false;
}

namespace {
const std::vector<TripleRef> kNoTriples;
}

std::span<const TripleRef> SemanticNetwork::out(TermId v) const {
  auto it = subject_index_.find(v);
  return it == subject_index_.end() ? std::span<const TripleRef>(kNoTriples) : std::span(it->second);
}

std::span<const TripleRef> SemanticNetwork::in(TermId v) const {
  auto it = object_index_.find(v);
  return it == object_index_.end() ? std::span<const TripleRef>(kNoTriples) : std::span(it->second);
}

std::vector<Triple> SemanticNetwork::out_triples(const Node& v) const {
  std::vector<Triple> result;
  if (auto id = lookup(v)) {
    for (const auto& t : out(*id)) result.push_back(resolve(t));
  }
  return result;
}

std::vector<Triple> SemanticNetwork::in_triples(const Node& v) const {
  std::vector<Triple> result;
  if (auto id = lookup(v)) {
    for (const auto& t : in(*id)) result.push_back(resolve(t));
  }
  return result;
}

bool SemanticNetwork::is_vertex(TermId v) const { return v < is_vertex_.size() && is_vertex_[v]; }

bool SemanticNetwork::is_subclass_of(TermId c, TermId d) const {
  if (c == d) return true;
  auto it = superclasses_.find(c);
  return it != superclasses_.end() && std::binary_search(it->second.begin(), it->second.end(), d);
}

bool SemanticNetwork::is_instance_of(TermId v, TermId cls) const {
  if (v == cls) return true;
  if (cls == resource_) return is_vertex(v);
  auto it = entailed_types_.find(v);
  return it != entailed_types_.end() && std::binary_search(it->second.begin(), it->second.end(), cls);
}

bool SemanticNetwork::is_instance_of(const Node& v, const Node& cls) const {
  if (v == cls) return true;
  auto vid = lookup(v), cid = lookup(cls);
  return vid && cid && is_instance_of(*vid, *cid);
}

std::vector<TermId> SemanticNetwork::instances_of(TermId cls) const {
  if (cls == resource_) return vertices_;
  std::vector<TermId> result;
  for (const auto& [v, types] : entailed_types_) {
    if (is_vertex(v) && std::binary_search(types.begin(), types.end(), cls)) result.push_back(v);
  }
  if (is_vertex(cls)) result.push_back(cls);
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

std::vector<Node> SemanticNetwork::instances_of(const Node& cls) const {
  std::vector<Node> result;
  if (auto id = lookup(cls)) {
    for (TermId v : instances_of(*id)) result.push_back(term(v));
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool SemanticNetwork::is_subproperty_of(TermId p, TermId q) const {
  if (p == q) return true;
  auto it = superproperties_.find(p);
  return it != superproperties_.end() && std::binary_search(it->second.begin(), it->second.end(), q);
}

bool SemanticNetwork::is_subproperty_of(const Node& p, const Node& q) const {
  if (p == q) return true;
  auto pid = lookup(p), qid = lookup(q);
  return pid && qid && is_subproperty_of(*pid, *qid);
}

std::span<const TermId> SemanticNetwork::asserted_types(TermId v) const {
  static const std::vector<TermId> kNone;
  auto it = asserted_types_.find(v);
  return it == asserted_types_.end() ? std::span<const TermId>(kNone) : std::span(it->second);
}

}  // namespace gramwalk
