#include "gramwalk/result_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace gramwalk {

using nlohmann::json;

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

std::string key(const Node& n) { return n.kind == NodeKind::Blank ? "_:" + n.value : n.value; }

Node from_key(const std::string& k) {
  return k.starts_with("_:") ? Node::blank(k.substr(2)) : Node::iri(k);
}

json distribution(const std::map<Node, double>& d) {
  json out = json::object();
  for (const auto& [n, x] : d) out[key(n)] = round12(x);
  return out;
}

}  // namespace

std::string run_result_json(const RunResult& r) {
  json doc;
  json counts = json::object();
  for (const auto& [n, c] : r.counts) counts[key(n)] = c;
  doc["counts"] = counts;
  doc["normalized"] = distribution(r.normalized);
  doc["steps"] = r.steps;
  doc["submits"] = r.submits;
  doc["converged"] = r.converged;
  return doc.dump(2) + "\n";
}

std::string run_result_csv(const RunResult& r) {
  std::vector<std::pair<Node, std::uint64_t>> rows(r.counts.begin(), r.counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::ostringstream out;
  out << "vertex,count,normalized\n";
  for (const auto& [n, c] : rows) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", r.normalized.at(n));
    std::string k = key(n);
    if (k.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : k) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      k = quoted + "\"";
    }
    out << k << ',' << c << ',' << buf << '\n';
  }
  return out.str();
}

std::string oracle_json(const OracleReport& r) {
  json doc;
  doc["mode"] = r.mode;
  doc["normalized"] = distribution(r.normalized);
  doc["states"] = r.states;
  doc["strongly_connected"] = r.strongly_connected;
  doc["aperiodic"] = r.aperiodic;
  doc["period"] = r.period;
  doc["closed_classes"] = r.closed_classes;
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  return doc.dump(2) + "\n";
}

std::string comparison_json(const RankComparison& c) {
  json doc;
  doc["l1"] = round12(c.l1);
  doc["l2"] = round12(c.l2);
  doc["rank_agreement"] = c.rank_agreement;
  return doc.dump(2) + "\n";
}

std::map<Node, double> read_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("normalized") || !doc["normalized"].is_object()) {
    throw std::runtime_error(path.string() + ": missing \"normalized\" object");
  }
  std::map<Node, double> out;
  for (const auto& [k, v] : doc["normalized"].items()) {
    if (!v.is_number()) throw std::runtime_error(path.string() + ": non-numeric value for " + k);
    out[from_key(k)] = v.get<double>();
  }
  return out;
}

}  // namespace gramwalk
