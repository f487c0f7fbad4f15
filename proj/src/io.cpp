#include "credal/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace credal {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw CredalError(ErrorKind::Parse, msg); }

Rational rational_from(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  fail(where + ": expected a rational (\"num/den\" string or integer)");
}

RationalVector rationals_from(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array");
  RationalVector out;
  for (const auto& v : j) out.push_back(rational_from(v, where));
  return out;
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing \"" + key + "\"");
  return j.at(key);
}

long integer_from(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<long>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

ordered_json rational_json(const Rational& r) { return to_string(r); }

ordered_json rationals_json(const RationalVector& v) {
  ordered_json a = ordered_json::array();
  for (const auto& r : v) a.push_back(rational_json(r));
  return a;
}

}  // namespace

CredalNetwork parse_network_unvalidated(std::string_view text) {
  const json doc = parse_json(text);
  std::vector<Variable> vars;
  const auto& jv = member(doc, "variables", "network");
  if (!jv.is_array()) fail("variables: expected an array");
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const std::string where = "variables[" + std::to_string(i) + "]";
    const auto& name = member(jv[i], "name", where);
    if (!name.is_string()) fail(where + ": name must be a string");
    vars.push_back({name.get<std::string>(), static_cast<int>(integer_from(member(jv[i], "card", where), where))});
  }

  std::vector<Arc> arcs;
  const auto& ja = doc.contains("arcs") ? doc.at("arcs") : json::array();
  if (!ja.is_array()) fail("arcs: expected an array");
  for (std::size_t k = 0; k < ja.size(); ++k) {
    const std::string where = "arcs[" + std::to_string(k) + "]";
    if (!ja[k].is_array() || ja[k].size() != 2) fail(where + ": expected [parent, child]");
    const long p = integer_from(ja[k][0], where), c = integer_from(ja[k][1], where);
    if (p < 0 || c < 0 || static_cast<std::size_t>(p) >= vars.size() || static_cast<std::size_t>(c) >= vars.size())
      fail(where + ": node index out of range");
    arcs.push_back({static_cast<NodeId>(p), static_cast<NodeId>(c)});
  }

  // Shape-only network to learn parents and configuration counts.
  CredalNetwork shape(vars, arcs, std::vector<std::vector<CredalSpec>>(vars.size()));

  const auto& jc = member(doc, "cpts", "network");
  if (!jc.is_array() || jc.size() != vars.size()) fail("cpts: expected one entry per variable");
  std::vector<std::vector<CredalSpec>> specs(vars.size());
  for (NodeId i = 0; i < vars.size(); ++i) {
    const auto& entries = jc[i];
    const std::string where_node = "cpts[" + std::to_string(i) + "]";
    if (!entries.is_array()) fail(where_node + ": expected an array");
    const auto& parents = shape.parents(i);
    specs[i].resize(shape.config_count(i));
    std::vector<bool> seen(specs[i].size(), false);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const std::string where = where_node + "[" + std::to_string(e) + "]";
      const auto& entry = entries[e];
      std::vector<State> joint(vars.size(), 0);
      const json& pc = entry.contains("parent_config") ? entry.at("parent_config") : json::array();
      if (!pc.is_array() || pc.size() != parents.size())
        fail(where + ": parent_config must list one state per parent");
      for (std::size_t k = 0; k < parents.size(); ++k) {
        const long s = integer_from(pc[k], where);
        if (s < 0 || s >= vars[parents[k]].cardinality) fail(where + ": parent state out of range");
        joint[parents[k]] = static_cast<State>(s);
      }
      const std::size_t config = shape.config_index(i, joint);
      if (seen[config]) fail(where + ": duplicate parent configuration");
      seen[config] = true;
      CredalSpec spec;
      const auto& ext = member(entry, "extrema", where);
      if (!ext.is_array()) fail(where + ": extrema must be an array");
      for (const auto& q : ext) spec.extrema.push_back(rationals_from(q, where + ".extrema"));
      if (entry.contains("facets")) {
        for (const auto& jf : entry.at("facets")) {
          Facet f;
          f.coefficients = rationals_from(member(jf, "coefficients", where), where + ".facets");
          f.bound = rational_from(member(jf, "bound", where), where + ".facets");
          f.equality = jf.value("equality", false);
          spec.facets.push_back(std::move(f));
        }
      }
      specs[i][config] = std::move(spec);
    }
    for (std::size_t c = 0; c < seen.size(); ++c)
      if (!seen[c]) fail(where_node + ": missing parent configuration " + std::to_string(c));
  }
  return CredalNetwork(std::move(vars), std::move(arcs), std::move(specs));
}

CredalNetwork parse_network(std::string_view text) {
  CredalNetwork net = parse_network_unvalidated(text);
  auto report = validate_network(net);
  if (!report.ok()) {
    std::string msg = "invalid network:";
    for (const auto& f : report.findings) msg += "\n  " + f;
    throw CredalError(ErrorKind::Validation, msg);
  }
  return net;
}

std::string serialize_network(const CredalNetwork& net, int indent) {
  ordered_json doc;
  doc["variables"] = ordered_json::array();
  for (const auto& v : net.variables()) doc["variables"].push_back({{"name", v.name}, {"card", v.cardinality}});
  doc["arcs"] = ordered_json::array();
  for (const auto& a : net.arcs()) doc["arcs"].push_back({a.parent, a.child});
  doc["cpts"] = ordered_json::array();
  for (NodeId i = 0; i < net.size(); ++i) {
    ordered_json entries = ordered_json::array();
    for (std::size_t c = 0; c < net.specs(i).size(); ++c) {
      const auto& spec = net.spec(i, c);
      ordered_json e;
      e["parent_config"] = net.config_states(i, c);
      e["extrema"] = ordered_json::array();
      for (const auto& q : spec.extrema) e["extrema"].push_back(rationals_json(q));
      if (!spec.facets.empty()) {
        e["facets"] = ordered_json::array();
        for (const auto& f : spec.facets)
          e["facets"].push_back(
              {{"coefficients", rationals_json(f.coefficients)}, {"bound", rational_json(f.bound)}, {"equality", f.equality}});
      }
      entries.push_back(std::move(e));
    }
    doc["cpts"].push_back(std::move(entries));
  }
  return doc.dump(indent) + "\n";
}

GbrTask parse_task(std::string_view text) {
  const json doc = parse_json(text);
  GbrTask task;
  const long q = integer_from(member(doc, "query", "query file"), "query");
  if (q < 0) fail("query: negative node index");
  task.query = static_cast<NodeId>(q);
  task.f = rationals_from(member(doc, "f", "query file"), "f");
  if (doc.contains("evidence")) {
    const auto& ev = doc.at("evidence");
    if (!ev.is_object()) fail("evidence: expected an object mapping node to state");
    for (const auto& [key, value] : ev.items()) {
      long node = -1;
      try {
        std::size_t used = 0;
        node = std::stol(key, &used);
        if (used != key.size()) node = -1;
      } catch (const std::exception&) {
      }
      if (node < 0) fail("evidence: key '" + key + "' is not a node index");
      task.evidence[static_cast<NodeId>(node)] = static_cast<State>(integer_from(value, "evidence"));
    }
  }
  const std::string bound = doc.value("bound", std::string("lower"));
  if (bound == "lower") task.bound = Bound::Lower;
  else if (bound == "upper") task.bound = Bound::Upper;
  else fail("bound: expected \"lower\" or \"upper\"");
  return task;
}

std::string serialize_task(const GbrTask& task, int indent) {
  ordered_json doc;
  doc["query"] = task.query;
  doc["f"] = rationals_json(task.f);
  doc["evidence"] = ordered_json::object();
  for (const auto& [node, state] : task.evidence) doc["evidence"][std::to_string(node)] = state;
  doc["bound"] = task.bound == Bound::Lower ? "lower" : "upper";
  return doc.dump(indent) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CredalError(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CredalError(ErrorKind::Parse, "cannot write '" + path + "'");
  out << content;
}

}  // namespace credal
