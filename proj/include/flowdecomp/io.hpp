#pragma once

// JSON serialization of instances, decompositions, path sets and weight
// solutions.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowdecomp/decomposition.hpp"
#include "flowdecomp/fwa.hpp"
#include "flowdecomp/graph.hpp"

namespace flowdecomp {

using Json = nlohmann::json;

struct LoadedInstance {
  Graph graph;
  PseudoFlow flow;
  Json annotations;  // null when absent
};

inline Json instance_to_json(const Graph& g, const PseudoFlow& x, const Json& annotations = nullptr) {
  require_dimension(g, x);
  Json j;
  switch (g.kind()) {
    case GraphKind::DagST:
      j["kind"] = "dag-st";
      break;
    case GraphKind::Circulatory:
      j["kind"] = "circulatory";
      break;
    case GraphKind::Plain:
      throw InvalidInput("only dag-st and circulatory graphs are serializable");
  }
  j["nodes"] = g.node_count();
  if (g.has_terminals()) {
    j["source"] = g.source();
    j["sink"] = g.sink();
  }
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"cost", e.cost}});
  j["edges"] = std::move(edges);
  j["flow"] = x.values();
  if (!annotations.is_null()) j["annotations"] = annotations;
  return j;
}

namespace detail {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace detail

/// Parses and validates an instance. Edge ids must be exactly 0..m-1 with
/// no duplicates; endpoints and the kind's structural rules are checked by
/// the graph constructor.
inline LoadedInstance instance_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  const auto kind = detail::field<std::string>(j, "kind");
  const int nodes = detail::field<int>(j, "nodes");
  if (nodes < 0) throw InvalidInput("node count must be non-negative");
  const Json& raw_edges = j.contains("edges") ? j.at("edges") : Json::array();
  if (!raw_edges.is_array()) throw InvalidInput("\"edges\" must be an array");
  std::vector<Edge> edges(raw_edges.size());
  std::vector<bool> seen(raw_edges.size(), false);
  for (const Json& je : raw_edges) {
    const EdgeId id = detail::field<EdgeId>(je, "id");
    if (id < 0 || static_cast<std::size_t>(id) >= raw_edges.size())
      throw InvalidInput("edge id " + std::to_string(id) + " is out of range (ids must be 0..m-1)");
    if (seen[static_cast<std::size_t>(id)]) throw InvalidInput("duplicate edge id " + std::to_string(id));
    seen[static_cast<std::size_t>(id)] = true;
    const Value edge_cost = je.contains("cost") ? detail::field<Value>(je, "cost") : 0;
    edges[static_cast<std::size_t>(id)] = {id, detail::field<NodeId>(je, "tail"), detail::field<NodeId>(je, "head"),
                                           edge_cost};
  }
  LoadedInstance out;
  if (kind == "dag-st") {
    out.graph = Graph::dag_st(nodes, std::move(edges), detail::field<NodeId>(j, "source"),
                              detail::field<NodeId>(j, "sink"));
  } else if (kind == "circulatory") {
    out.graph = Graph::circulatory(nodes, std::move(edges));
  } else {
    throw InvalidInput("unknown kind \"" + kind + "\"");
  }
  std::vector<Value> flow = j.contains("flow") ? detail::field<std::vector<Value>>(j, "flow")
                                               : std::vector<Value>(raw_edges.size(), 0);
  out.flow = PseudoFlow(std::move(flow));
  require_dimension(out.graph, out.flow);
  if (j.contains("annotations")) out.annotations = j.at("annotations");
  return out;
}

inline Json to_json(const FlowDecomposition& d) {
  Json paths = Json::array();
  for (const WeightedPath& p : d.paths) paths.push_back({{"edges", p.edges}, {"weight", p.weight}});
  return {{"paths", std::move(paths)}, {"method", d.method}};
}

inline FlowDecomposition decomposition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("paths") || !j.at("paths").is_array())
    throw InvalidInput("decomposition must be an object with a \"paths\" array");
  FlowDecomposition d;
  if (j.contains("method")) d.method = detail::field<std::string>(j, "method");
  for (const Json& p : j.at("paths"))
    d.paths.push_back({detail::field<std::vector<EdgeId>>(p, "edges"), detail::field<Value>(p, "weight")});
  return d;
}

inline Json to_json(const CirculationDecomposition& d) {
  Json parts = Json::array();
  for (const CirculationPart& p : d.parts)
    parts.push_back({{"weight", p.weight}, {"circulation", p.circulation.values()}});
  Json j{{"parts", std::move(parts)}, {"total_cost", d.total_cost}};
  if (!d.d_sign_rule.empty()) j["d_sign_rule"] = d.d_sign_rule;
  return j;
}

inline CirculationDecomposition circulation_decomposition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("parts") || !j.at("parts").is_array())
    throw InvalidInput("circulation decomposition must be an object with a \"parts\" array");
  CirculationDecomposition d;
  for (const Json& p : j.at("parts"))
    d.parts.push_back({PseudoFlow(detail::field<std::vector<Value>>(p, "circulation")), detail::field<Value>(p, "weight")});
  d.total_cost = detail::field<Value>(j, "total_cost");
  if (j.contains("d_sign_rule")) d.d_sign_rule = detail::field<std::string>(j, "d_sign_rule");
  return d;
}

/// Accepts {"paths":[[ids],...]} as well as a decomposition file, whose
/// weights are ignored.
inline std::vector<std::vector<EdgeId>> paths_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("paths") || !j.at("paths").is_array())
    throw InvalidInput("paths file must be an object with a \"paths\" array");
  std::vector<std::vector<EdgeId>> out;
  for (const Json& p : j.at("paths")) {
    if (p.is_array()) {
      try {
        out.push_back(p.get<std::vector<EdgeId>>());
      } catch (const nlohmann::json::exception&) {
        throw InvalidInput("path entries must be integer arrays");
      }
    } else {
      out.push_back(detail::field<std::vector<EdgeId>>(p, "edges"));
    }
  }
  return out;
}

inline Json paths_to_json(const std::vector<std::vector<EdgeId>>& paths) { return {{"paths", paths}}; }

// Integers beyond 64 bits are written as decimal strings.
inline Json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<Value>::min() && v <= std::numeric_limits<Value>::max())
    return static_cast<Value>(v);
  return v.str();
}

inline Json solution_to_json(const std::vector<BigInt>& weights, const std::vector<std::vector<BigInt>>& kernel,
                             std::size_t rank) {
  Json w = Json::array();
  for (const BigInt& v : weights) w.push_back(big_to_json(v));
  Json k = Json::array();
  for (const auto& vec : kernel) {
    Json row = Json::array();
    for (const BigInt& v : vec) row.push_back(big_to_json(v));
    k.push_back(std::move(row));
  }
  return {{"weights", std::move(w)}, {"kernel", std::move(k)}, {"rank", rank}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace flowdecomp
