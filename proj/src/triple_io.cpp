#include "gramwalk/triple_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace gramwalk {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

bool is_local_char(char c) { return is_name_char(c) || c == ':' || c == '%'; }

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no, const ParseOptions& options,
             std::map<std::string, std::string>& prefixes)
      : s_(line), line_no_(line_no), options_(options), prefixes_(prefixes) {}

  // Returns false for blank/comment/prefix lines.
  bool parse(Triple& out) {
    skip_ws();
    if (at_end() || peek() == '#') return false;
    if (s_.substr(pos_).starts_with("@prefix")) {
      parse_prefix();
      return false;
    }
    std::size_t subject_col = pos_;
    out.subject = parse_term();
    if (out.subject.is_literal()) fail(subject_col, "literal cannot be a subject");
    skip_ws();
    std::size_t predicate_col = pos_;
    out.predicate = parse_term();
    if (!out.predicate.is_iri()) fail(predicate_col, "predicate must be an IRI");
    skip_ws();
    out.object = parse_term();
    finish_statement();
    return true;
  }

 private:
  [[noreturn]] void fail(std::size_t col, const std::string& message) const {
    throw ParseError(line_no_, col + 1, message);
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  void finish_statement() {
    skip_ws();
    if (at_end() || peek() != '.') fail(pos_, "expected '.' to end the statement");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail(pos_, "unexpected text after '.'");
  }

  void parse_prefix() {
    pos_ += 7;
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && peek() != ':' && is_name_char(peek())) ++pos_;
    if (at_end() || peek() != ':') fail(pos_, "expected 'name:' in @prefix");
    std::string name(s_.substr(start, pos_ - start));
    ++pos_;
    skip_ws();
    if (at_end() || peek() != '<') fail(pos_, "expected <iri> in @prefix");
    std::string base = parse_iri_ref();
    finish_statement();
    prefixes_[name] = base;
  }

  std::string parse_iri_ref() {
    std::size_t start = pos_;
    ++pos_;
    std::size_t close = s_.find('>', pos_);
    if (close == std::string_view::npos) fail(start, "unterminated IRI");
    std::string_view body = s_.substr(pos_, close - pos_);
    for (char c : body) {
      if (c == ' ' || c == '<' || c == '"') fail(start, "invalid character in IRI");
    }
    if (body.empty()) fail(start, "empty IRI");
    pos_ = close + 1;
    return std::string(body);
  }

  Node parse_term() {
    if (at_end()) fail(pos_, "expected a term");
    char c = peek();
    if (c == '<') return Node::iri(parse_iri_ref());
    if (c == '"') return parse_literal();
    if (c == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':') return parse_blank();
    if (is_name_start(c) || c == ':') return Node::iri(parse_pname());
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  Node parse_blank() {
    std::size_t start = pos_;
    pos_ += 2;
    std::size_t id_start = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    // A trailing '.' terminates the statement, not the id.
    while (pos_ > id_start && s_[pos_ - 1] == '.') --pos_;
    if (pos_ == id_start) fail(start, "empty blank node id");
    std::string id(s_.substr(id_start, pos_ - id_start));
    if (!options_.blank_scope.empty()) id = options_.blank_scope + "." + id;
    return Node::blank(std::move(id));
  }

  std::string parse_pname() {
    std::size_t start = pos_;
    while (!at_end() && peek() != ':' && is_name_char(peek())) ++pos_;
    if (at_end() || peek() != ':') fail(start, "expected prefixed name 'prefix:local'");
    std::string prefix(s_.substr(start, pos_ - start));
    ++pos_;
    std::size_t local_start = pos_;
    while (!at_end() && is_local_char(peek())) ++pos_;
    while (pos_ > local_start && s_[pos_ - 1] == '.') --pos_;
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail(start, "undeclared prefix '" + prefix + ":'");
    return it->second + std::string(s_.substr(local_start, pos_ - local_start));
  }

  Node parse_literal() {
    std::size_t start = pos_;
    ++pos_;
    std::string lexical;
    while (true) {
      if (at_end()) fail(start, "unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical.push_back(c);
        continue;
      }
      if (at_end()) fail(start, "unterminated escape in literal");
      char e = s_[pos_++];
      switch (e) {
        case 'n': lexical.push_back('\n'); break;
        case 't': lexical.push_back('\t'); break;
        case 'r': lexical.push_back('\r'); break;
        case '"': lexical.push_back('"'); break;
        case '\\': lexical.push_back('\\'); break;
        default: fail(pos_ - 2, std::string("unknown escape \\") + e);
      }
    }
    std::string datatype;
    if (s_.substr(pos_).starts_with("^^")) {
      pos_ += 2;
      if (at_end()) fail(pos_, "expected datatype after ^^");
      datatype = peek() == '<' ? parse_iri_ref() : parse_pname();
    }
    return Node::literal(std::move(lexical), std::move(datatype));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
  const ParseOptions& options_;
  std::map<std::string, std::string>& prefixes_;
};

}  // namespace

std::vector<Triple> parse_triple_list(std::string_view text, const ParseOptions& options) {
  std::vector<Triple> result;
  std::map<std::string, std::string> prefixes = options.prefixes;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    Triple t;
    if (LineParser(text.substr(start, end - start), line_no, options, prefixes).parse(t)) {
      result.push_back(std::move(t));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return result;
}

SemanticNetwork parse_triples(std::string_view text, const ParseOptions& options) {
  SemanticNetwork net;
  auto triples = parse_triple_list(text, options);
  net.add_batch(triples);
  return net;
}

std::vector<Triple> load_triple_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_triple_list(buf.str(), options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), e.detail() + " in " + path.string());
  }
}

std::string format_term(const Node& n) {
  switch (n.kind) {
    case NodeKind::Iri:
      return "<" + n.value + ">";
    case NodeKind::Blank:
      return "_:" + n.value;
    case NodeKind::Literal: {
      std::string out = "\"";
      for (char c : n.value) {
        switch (c) {
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          case '\r': out += "\\r"; break;
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          default: out.push_back(c);
        }
      }
      out += "\"";
      if (!n.datatype.empty()) out += "^^<" + n.datatype + ">";
      return out;
    }
  }
  return n.value;
}

std::string serialize_triples(std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  std::string out;
  for (const auto& t : triples) {
    out += format_term(t.subject) + " " + format_term(t.predicate) + " " + format_term(t.object) + " .\n";
  }
  return out;
}

std::string serialize(const SemanticNetwork& net) {
  std::vector<Triple> triples;
  triples.reserve(net.size());
  for (const auto& t : net.triples()) triples.push_back(net.resolve(t));
  return serialize_triples(std::move(triples));
}

}  // namespace gramwalk
