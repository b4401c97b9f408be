#pragma once

// Directed multigraphs, exact pseudo-flows and the basic flow algebra shared
// by every other header in this library.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flowdecomp {

using NodeId = int;
using EdgeId = int;
using Value = std::int64_t;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Thrown by topo_order; carries the node sequence of one directed cycle.
class CycleError : public std::runtime_error {
 public:
  explicit CycleError(std::vector<NodeId> witness)
      : std::runtime_error("graph contains a directed cycle"),
        witness_(std::move(witness)) {}

  const std::vector<NodeId>& witness() const noexcept { return witness_; }

 private:
  std::vector<NodeId> witness_;
};

namespace checked {

inline Value add(Value a, Value b) {
  Value r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Value sub(Value a, Value b) {
  Value r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Value mul(Value a, Value b) {
  Value r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Value abs(Value a) {
  if (a == std::numeric_limits<Value>::min()) throw OverflowError("integer overflow in abs");
  return a < 0 ? -a : a;
}

}  // namespace checked

struct Edge {
  EdgeId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  Value cost = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// DagST: acyclic, designated source with in-degree 0 and sink with
// out-degree 0. Circulatory: every node has in- and out-degree >= 1.
// Plain: no structural invariant; used for intermediate graphs such as
// multi-source DAGs awaiting normalize_st or restrictions of circulatory
// graphs.
enum class GraphKind { DagST, Circulatory, Plain };

inline const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::DagST: return "dag-st";
    case GraphKind::Circulatory: return "circulatory";
    case GraphKind::Plain: return "plain";
  }
  return "?";
}

// Immutable directed multigraph. Edge ids are dense (0..m-1); adjacency
// lists are sorted by edge id so that every traversal is deterministic.
class Graph {
 public:
  Graph() = default;

  static Graph dag_st(int node_count, std::vector<Edge> edges, NodeId source, NodeId sink) {
    Graph g(node_count, std::move(edges), GraphKind::DagST, source, sink);
    g.validate();
    return g;
  }

  static Graph circulatory(int node_count, std::vector<Edge> edges) {
    Graph g(node_count, std::move(edges), GraphKind::Circulatory, -1, -1);
    g.validate();
    return g;
  }

  static Graph plain(int node_count, std::vector<Edge> edges) {
    Graph g(node_count, std::move(edges), GraphKind::Plain, -1, -1);
    g.validate();
    return g;
  }

  int node_count() const noexcept { return node_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  GraphKind kind() const noexcept { return kind_; }
  bool has_terminals() const noexcept { return kind_ == GraphKind::DagST; }

  NodeId source() const {
    if (!has_terminals()) throw InvalidInput("graph has no designated source");
    return source_;
  }
  NodeId sink() const {
    if (!has_terminals()) throw InvalidInput("graph has no designated sink");
    return sink_;
  }

  const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<EdgeId>& out_edges(NodeId v) const { return out_.at(static_cast<std::size_t>(v)); }
  const std::vector<EdgeId>& in_edges(NodeId v) const { return in_.at(static_cast<std::size_t>(v)); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.kind_ == b.kind_ && a.source_ == b.source_ &&
           a.sink_ == b.sink_ && a.edges_ == b.edges_;
  }

 private:
  Graph(int node_count, std::vector<Edge> edges, GraphKind kind, NodeId s, NodeId t)
      : node_count_(node_count), edges_(std::move(edges)), kind_(kind), source_(s), sink_(t) {}

  void validate();

  int node_count_ = 0;
  std::vector<Edge> edges_;
  GraphKind kind_ = GraphKind::Plain;
  NodeId source_ = -1;
  NodeId sink_ = -1;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

/// Returns a topological order of all nodes. Throws CycleError with the node
/// sequence of a directed cycle when the graph is not acyclic. Among ready
/// nodes the lowest id is emitted first.
inline std::vector<NodeId> topo_order(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) ++indeg[static_cast<std::size_t>(e.head)];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
  std::vector<NodeId> order;
  order.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (EdgeId e : g.out_edges(v))
      if (--indeg[static_cast<std::size_t>(g.edge(e).head)] == 0) ready.push(g.edge(e).head);
  }
  if (static_cast<int>(order.size()) == n) return order;

  // Every leftover node has a leftover predecessor; walk backwards until a
  // node repeats.
  std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
  NodeId v = 0;
  while (indeg[static_cast<std::size_t>(v)] == 0) ++v;
  std::vector<NodeId> walk;
  while (seen_at[static_cast<std::size_t>(v)] < 0) {
    seen_at[static_cast<std::size_t>(v)] = static_cast<int>(walk.size());
    walk.push_back(v);
    for (EdgeId e : g.in_edges(v)) {
      NodeId u = g.edge(e).tail;
      if (indeg[static_cast<std::size_t>(u)] > 0) {
        v = u;
        break;
      }
    }
  }
  std::vector<NodeId> cycle(walk.begin() + seen_at[static_cast<std::size_t>(v)], walk.end());
  std::reverse(cycle.begin(), cycle.end());
  throw CycleError(std::move(cycle));
}

inline bool is_acyclic(const Graph& g) {
  try {
    topo_order(g);
    return true;
  } catch (const CycleError&) {
    return false;
  }
}

inline void Graph::validate() {
  if (node_count_ < 0) throw InvalidInput("negative node count");
  out_.assign(static_cast<std::size_t>(node_count_), {});
  in_.assign(static_cast<std::size_t>(node_count_), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != static_cast<EdgeId>(i))
      throw InvalidInput("edge ids must be dense 0..m-1 in order (edge " + std::to_string(i) + ")");
    if (e.tail < 0 || e.tail >= node_count_ || e.head < 0 || e.head >= node_count_)
      throw InvalidInput("edge " + std::to_string(i) + " has an out-of-range endpoint");
    if (e.cost < 0) throw InvalidInput("edge " + std::to_string(i) + " has a negative cost");
    out_[static_cast<std::size_t>(e.tail)].push_back(e.id);
    in_[static_cast<std::size_t>(e.head)].push_back(e.id);
  }
  switch (kind_) {
    case GraphKind::DagST: {
      if (source_ < 0 || source_ >= node_count_ || sink_ < 0 || sink_ >= node_count_)
        throw InvalidInput("source/sink out of range");
      if (source_ == sink_) throw InvalidInput("source and sink coincide");
      if (!in_[static_cast<std::size_t>(source_)].empty()) throw InvalidInput("source has incoming edges");
      if (!out_[static_cast<std::size_t>(sink_)].empty()) throw InvalidInput("sink has outgoing edges");
      if (!is_acyclic(*this)) throw InvalidInput("dag-st graph contains a cycle");
      break;
    }
    case GraphKind::Circulatory:
      for (NodeId v = 0; v < node_count_; ++v)
        if (in_[static_cast<std::size_t>(v)].empty() || out_[static_cast<std::size_t>(v)].empty())
          throw InvalidInput("circulatory graph: node " + std::to_string(v) + " is a source or sink");
      break;
    case GraphKind::Plain:
      break;
  }
}

// Exact integer value per edge id. All arithmetic is overflow-checked.
class PseudoFlow {
 public:
  PseudoFlow() = default;
  explicit PseudoFlow(std::size_t m, Value fill = 0) : values_(m, fill) {}
  explicit PseudoFlow(std::vector<Value> values) : values_(std::move(values)) {}

  static PseudoFlow zeros(const Graph& g) { return PseudoFlow(static_cast<std::size_t>(g.edge_count())); }

  std::size_t size() const noexcept { return values_.size(); }
  Value operator[](EdgeId e) const { return values_[static_cast<std::size_t>(e)]; }
  Value& operator[](EdgeId e) { return values_[static_cast<std::size_t>(e)]; }
  const std::vector<Value>& values() const noexcept { return values_; }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](Value v) { return v == 0; });
  }
  bool is_nonnegative() const {
    return std::all_of(values_.begin(), values_.end(), [](Value v) { return v >= 0; });
  }

  PseudoFlow& operator+=(const PseudoFlow& o) {
    require_same_size(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = checked::add(values_[i], o.values_[i]);
    return *this;
  }
  PseudoFlow& operator-=(const PseudoFlow& o) {
    require_same_size(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = checked::sub(values_[i], o.values_[i]);
    return *this;
  }
  PseudoFlow& operator*=(Value a) {
    for (Value& v : values_) v = checked::mul(v, a);
    return *this;
  }

  friend PseudoFlow operator+(PseudoFlow a, const PseudoFlow& b) { return a += b; }
  friend PseudoFlow operator-(PseudoFlow a, const PseudoFlow& b) { return a -= b; }
  friend PseudoFlow operator*(Value a, PseudoFlow x) { return x *= a; }
  friend PseudoFlow operator-(PseudoFlow x) { return x *= -1; }
  friend bool operator==(const PseudoFlow&, const PseudoFlow&) = default;

  // Exact halving; throws if some entry is odd.
  PseudoFlow halved() const {
    PseudoFlow r(*this);
    for (std::size_t i = 0; i < r.values_.size(); ++i) {
      if (r.values_[i] % 2 != 0) throw std::logic_error("halving an odd entry at edge " + std::to_string(i));
      r.values_[i] /= 2;
    }
    return r;
  }

 private:
  void require_same_size(const PseudoFlow& o) const {
    if (o.values_.size() != values_.size()) throw InvalidInput("pseudo-flow dimension mismatch");
  }

  std::vector<Value> values_;
};

inline void require_dimension(const Graph& g, const PseudoFlow& x) {
  if (x.size() != static_cast<std::size_t>(g.edge_count()))
    throw InvalidInput("pseudo-flow has " + std::to_string(x.size()) + " entries, graph has " +
                       std::to_string(g.edge_count()) + " edges");
}

/// Net inflow minus outflow at every node.
inline std::vector<Value> node_imbalance(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  std::vector<Value> bal(static_cast<std::size_t>(g.node_count()), 0);
  for (const Edge& e : g.edges()) {
    bal[static_cast<std::size_t>(e.head)] = checked::add(bal[static_cast<std::size_t>(e.head)], x[e.id]);
    bal[static_cast<std::size_t>(e.tail)] = checked::sub(bal[static_cast<std::size_t>(e.tail)], x[e.id]);
  }
  return bal;
}

enum class FlowClass { Flow, Circulation, Neither };

inline const char* to_string(FlowClass c) {
  switch (c) {
    case FlowClass::Flow: return "flow";
    case FlowClass::Circulation: return "circulation";
    case FlowClass::Neither: return "neither";
  }
  return "?";
}

inline FlowClass classify(const Graph& g, const PseudoFlow& x) {
  const auto bal = node_imbalance(g, x);
  bool all = true;
  bool inner = true;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (bal[static_cast<std::size_t>(v)] == 0) continue;
    all = false;
    if (!g.has_terminals() || (v != g.source() && v != g.sink())) inner = false;
  }
  if (all) return FlowClass::Circulation;
  if (g.kind() == GraphKind::DagST && inner) return FlowClass::Flow;
  return FlowClass::Neither;
}

/// True when x conserves at every node except (for DagST) source and sink.
inline bool is_flow(const Graph& g, const PseudoFlow& x) { return classify(g, x) != FlowClass::Neither; }

inline bool is_circulation(const Graph& g, const PseudoFlow& x) {
  return classify(g, x) == FlowClass::Circulation;
}

struct FlowStats {
  std::optional<Value> total;  // |X|; present only for DagST graphs
  Value norm = 0;              // max absolute edge value
};

inline Value norm(const PseudoFlow& x) {
  Value r = 0;
  for (Value v : x.values()) r = std::max(r, checked::abs(v));
  return r;
}

/// Net outflow of the source.
inline Value total(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  if (g.kind() != GraphKind::DagST) throw InvalidInput("total flow is defined only for dag-st graphs");
  Value r = 0;
  for (EdgeId e : g.out_edges(g.source())) r = checked::add(r, x[e]);
  for (EdgeId e : g.in_edges(g.source())) r = checked::sub(r, x[e]);
  return r;
}

inline FlowStats stats(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  FlowStats s;
  s.norm = norm(x);
  if (g.kind() == GraphKind::DagST) s.total = total(g, x);
  return s;
}

/// A restricted graph plus the id of the original edge behind each new edge.
struct Subgraph {
  Graph graph;
  std::vector<EdgeId> original;  // new edge id -> original edge id

  PseudoFlow restrict(const PseudoFlow& x) const {
    PseudoFlow r(original.size());
    for (std::size_t i = 0; i < original.size(); ++i) r[static_cast<EdgeId>(i)] = x[original[i]];
    return r;
  }

  PseudoFlow embed(const PseudoFlow& y, std::size_t original_edge_count) const {
    PseudoFlow r(original_edge_count);
    for (std::size_t i = 0; i < original.size(); ++i) r[original[i]] = y[static_cast<EdgeId>(i)];
    return r;
  }
};

/// Spanning subgraph keeping exactly the edges selected by keep. DagST
/// graphs stay DagST (terminals kept); anything else becomes Plain.
template <typename Pred>
Subgraph filter_edges(const Graph& g, Pred keep) {
  Subgraph sub;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (!keep(e.id)) continue;
    Edge copy = e;
    copy.id = static_cast<EdgeId>(edges.size());
    edges.push_back(copy);
    sub.original.push_back(e.id);
  }
  if (g.kind() == GraphKind::DagST)
    sub.graph = Graph::dag_st(g.node_count(), std::move(edges), g.source(), g.sink());
  else
    sub.graph = Graph::plain(g.node_count(), std::move(edges));
  return sub;
}

/// G restricted to x: spanning subgraph of the edges where x is nonzero.
inline Subgraph support_subgraph(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  return filter_edges(g, [&](EdgeId e) { return x[e] != 0; });
}

/// Result of normalize_st: the single-terminal graph plus the appended
/// super-terminal edges. Original edge ids are preserved.
struct Normalized {
  Graph graph;
  int original_edge_count = 0;
  bool added_terminals = false;
};

/// Adds a super source feeding every in-degree-0 node and a super sink fed by
/// every out-degree-0 node. A graph that already has exactly one source and
/// one sink is returned unchanged (as DagST).
inline Normalized normalize_st(const Graph& g) {
  if (!is_acyclic(g)) throw InvalidInput("normalize_st requires an acyclic graph");
  std::vector<NodeId> sources, sinks;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const bool no_in = g.in_edges(v).empty();
    const bool no_out = g.out_edges(v).empty();
    if (no_in && no_out) continue;
    if (no_in) sources.push_back(v);
    if (no_out) sinks.push_back(v);
  }
  if (sources.empty() || sinks.empty()) throw InvalidInput("normalize_st: graph has no edges");
  Normalized out;
  out.original_edge_count = g.edge_count();
  if (sources.size() == 1 && sinks.size() == 1) {
    out.graph = Graph::dag_st(g.node_count(), g.edges(), sources.front(), sinks.front());
    return out;
  }
  std::vector<Edge> edges = g.edges();
  const NodeId s = g.node_count();
  const NodeId t = g.node_count() + 1;
  for (NodeId v : sources) edges.push_back({static_cast<EdgeId>(edges.size()), s, v, 0});
  for (NodeId v : sinks) edges.push_back({static_cast<EdgeId>(edges.size()), v, t, 0});
  out.graph = Graph::dag_st(g.node_count() + 2, std::move(edges), s, t);
  out.added_terminals = true;
  return out;
}

// Sequence of edge ids with an integer weight.
struct WeightedPath {
  std::vector<EdgeId> edges;
  Value weight = 0;

  friend bool operator==(const WeightedPath&, const WeightedPath&) = default;
};

/// Indicator vector of an edge sequence scaled by weight.
inline PseudoFlow path_flow(const Graph& g, const std::vector<EdgeId>& edges, Value weight = 1) {
  PseudoFlow x = PseudoFlow::zeros(g);
  for (EdgeId e : edges) x[e] = checked::add(x[e], weight);
  return x;
}

/// Whether edges form an s-t path of g (every s-t walk in a DAG is simple).
inline bool is_st_path(const Graph& g, const std::vector<EdgeId>& edges) {
  if (!g.has_terminals() || edges.empty()) return false;
  NodeId at = g.source();
  for (EdgeId e : edges) {
    if (e < 0 || e >= g.edge_count()) return false;
    if (g.edge(e).tail != at) return false;
    at = g.edge(e).head;
  }
  return at == g.sink();
}

/// Whether edges form a closed walk.
inline bool is_closed_walk(const Graph& g, const std::vector<EdgeId>& edges) {
  if (edges.empty()) return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EdgeId e = edges[i];
    if (e < 0 || e >= g.edge_count()) return false;
    EdgeId next = edges[(i + 1) % edges.size()];
    if (next < 0 || next >= g.edge_count() || g.edge(e).head != g.edge(next).tail) return false;
  }
  return true;
}

inline Value cost(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  Value c = 0;
  for (const Edge& e : g.edges()) c = checked::add(c, checked::mul(e.cost, x[e.id]));
  return c;
}

inline Value path_cost(const Graph& g, const std::vector<EdgeId>& edges) {
  Value c = 0;
  for (EdgeId e : edges) c = checked::add(c, g.edge(e).cost);
  return c;
}

/// Edges that lie on some s-t path of a DagST graph.
inline std::vector<bool> st_useful_edges(const Graph& g) {
  const int n = g.node_count();
  std::vector<bool> from_s(static_cast<std::size_t>(n), false), to_t(static_cast<std::size_t>(n), false);
  std::vector<NodeId> stack{g.source()};
  from_s[static_cast<std::size_t>(g.source())] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (EdgeId e : g.out_edges(v)) {
      NodeId w = g.edge(e).head;
      if (!from_s[static_cast<std::size_t>(w)]) {
        from_s[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  stack.push_back(g.sink());
  to_t[static_cast<std::size_t>(g.sink())] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (EdgeId e : g.in_edges(v)) {
      NodeId u = g.edge(e).tail;
      if (!to_t[static_cast<std::size_t>(u)]) {
        to_t[static_cast<std::size_t>(u)] = true;
        stack.push_back(u);
      }
    }
  }
  std::vector<bool> useful(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges())
    useful[static_cast<std::size_t>(e.id)] =
        from_s[static_cast<std::size_t>(e.tail)] && to_t[static_cast<std::size_t>(e.head)];
  return useful;
}

/// All s-t paths of a DagST graph using only edges allowed by the mask, in
/// lexicographic edge-id order. Stops after limit paths.
inline std::vector<std::vector<EdgeId>> enumerate_st_paths(const Graph& g, const std::vector<bool>& allowed,
                                                           std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  std::vector<std::vector<EdgeId>> paths;
  std::vector<EdgeId> current;
  auto dfs = [&](auto&& self, NodeId v) -> void {
    if (paths.size() >= limit) return;
    if (v == g.sink()) {
      paths.push_back(current);
      return;
    }
    for (EdgeId e : g.out_edges(v)) {
      if (!allowed[static_cast<std::size_t>(e)]) continue;
      current.push_back(e);
      self(self, g.edge(e).head);
      current.pop_back();
    }
  };
  dfs(dfs, g.source());
  return paths;
}

inline std::vector<std::vector<EdgeId>> enumerate_st_paths(const Graph& g) {
  return enumerate_st_paths(g, std::vector<bool>(static_cast<std::size_t>(g.edge_count()), true));
}

}  // namespace flowdecomp
