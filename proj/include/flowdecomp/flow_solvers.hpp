#pragma once

// Max-flow, minimum flow with edge demands (width) and minimum-cost
// circulation covers, plus trivial path/cycle extraction.

#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "flowdecomp/graph.hpp"

namespace flowdecomp {

using EdgeMask = std::vector<bool>;

inline EdgeMask all_edges(const Graph& g) { return EdgeMask(static_cast<std::size_t>(g.edge_count()), true); }

inline EdgeMask edge_mask(const Graph& g, const std::vector<EdgeId>& ids) {
  EdgeMask m(static_cast<std::size_t>(g.edge_count()), false);
  for (EdgeId e : ids) {
    if (e < 0 || e >= g.edge_count()) throw InvalidInput("edge id " + std::to_string(e) + " out of range");
    m[static_cast<std::size_t>(e)] = true;
  }
  return m;
}

inline EdgeMask support_mask(const PseudoFlow& x) {
  EdgeMask m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = x[static_cast<EdgeId>(i)] != 0;
  return m;
}

namespace detail {

// Residual network with paired arcs (a, a ^ 1). Adjacency lists keep arc
// insertion order, which callers use to encode edge-id tie-breaking.
class ResidualNetwork {
 public:
  explicit ResidualNetwork(int n) : adj_(static_cast<std::size_t>(n)) {}

  int add_arc(NodeId from, NodeId to, Value cap, Value cost = 0) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({from, to, cap, cost});
    arcs_.push_back({to, from, 0, -cost});
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  // Flow currently routed on the forward arc a.
  Value flow(int a) const { return arcs_[static_cast<std::size_t>(a ^ 1)].cap; }

  // Shortest-augmenting-path (Edmonds-Karp) max-flow.
  Value max_flow(NodeId s, NodeId t) {
    Value total = 0;
    const std::size_t n = adj_.size();
    std::vector<int> pred(n);
    for (;;) {
      std::fill(pred.begin(), pred.end(), -1);
      std::queue<NodeId> q;
      q.push(s);
      pred[static_cast<std::size_t>(s)] = -2;
      while (!q.empty() && pred[static_cast<std::size_t>(t)] == -1) {
        NodeId v = q.front();
        q.pop();
        for (int a : adj_[static_cast<std::size_t>(v)]) {
          const Arc& arc = arcs_[static_cast<std::size_t>(a)];
          if (arc.cap > 0 && pred[static_cast<std::size_t>(arc.to)] == -1) {
            pred[static_cast<std::size_t>(arc.to)] = a;
            q.push(arc.to);
          }
        }
      }
      if (pred[static_cast<std::size_t>(t)] == -1) break;
      total = checked::add(total, augment(s, t, pred));
    }
    return total;
  }

  // Successive shortest paths with node potentials (Dijkstra on reduced
  // costs). Requires non-negative arc costs at the start. Returns the amount
  // of flow sent, at most limit.
  Value min_cost_flow(NodeId s, NodeId t, Value limit) {
    const std::size_t n = adj_.size();
    constexpr Value kInf = std::numeric_limits<Value>::max() / 4;
    std::vector<Value> potential(n, 0), dist(n);
    std::vector<int> pred(n);
    Value sent = 0;
    while (sent < limit) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(pred.begin(), pred.end(), -1);
      using Item = std::pair<Value, NodeId>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[static_cast<std::size_t>(s)] = 0;
      pq.push({0, s});
      while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[static_cast<std::size_t>(v)]) continue;
        for (int a : adj_[static_cast<std::size_t>(v)]) {
          const Arc& arc = arcs_[static_cast<std::size_t>(a)];
          if (arc.cap <= 0) continue;
          const Value reduced = arc.cost + potential[static_cast<std::size_t>(v)] -
                                potential[static_cast<std::size_t>(arc.to)];
          const Value nd = d + reduced;
          if (nd < dist[static_cast<std::size_t>(arc.to)]) {
            dist[static_cast<std::size_t>(arc.to)] = nd;
            pred[static_cast<std::size_t>(arc.to)] = a;
            pq.push({nd, arc.to});
          }
        }
      }
      if (dist[static_cast<std::size_t>(t)] == kInf) break;
      for (std::size_t v = 0; v < n; ++v)
        if (dist[v] < kInf) potential[v] += dist[v];
      pred[static_cast<std::size_t>(s)] = -2;
      sent = checked::add(sent, augment(s, t, pred, limit - sent));
    }
    return sent;
  }

 private:
  struct Arc {
    NodeId from;
    NodeId to;
    Value cap;
    Value cost;
  };

  Value augment(NodeId s, NodeId t, const std::vector<int>& pred,
                Value limit = std::numeric_limits<Value>::max()) {
    Value bottleneck = limit;
    for (NodeId v = t; v != s;) {
      const Arc& arc = arcs_[static_cast<std::size_t>(pred[static_cast<std::size_t>(v)])];
      bottleneck = std::min(bottleneck, arc.cap);
      v = arc.from;
    }
    for (NodeId v = t; v != s;) {
      const int a = pred[static_cast<std::size_t>(v)];
      arcs_[static_cast<std::size_t>(a)].cap -= bottleneck;
      arcs_[static_cast<std::size_t>(a ^ 1)].cap += bottleneck;
      v = arcs_[static_cast<std::size_t>(a)].from;
    }
    return bottleneck;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace detail

/// Maximum s-t flow under the given non-negative capacities. Integral;
/// augmenting paths are found breadth-first with lowest edge id first.
inline PseudoFlow max_flow(const Graph& g, const PseudoFlow& capacities, NodeId s, NodeId t) {
  require_dimension(g, capacities);
  if (!capacities.is_nonnegative()) throw InvalidInput("max_flow: negative capacity");
  if (s < 0 || s >= g.node_count() || t < 0 || t >= g.node_count()) throw InvalidInput("max_flow: terminal out of range");
  detail::ResidualNetwork net(g.node_count());
  std::vector<int> arc(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) arc[static_cast<std::size_t>(e.id)] = net.add_arc(e.tail, e.head, capacities[e.id]);
  if (s != t) net.max_flow(s, t);
  PseudoFlow f = PseudoFlow::zeros(g);
  for (const Edge& e : g.edges()) f[e.id] = net.flow(arc[static_cast<std::size_t>(e.id)]);
  return f;
}

// width: value = |cover|; mccc: value = cost(cover).
struct CoverResult {
  Value value = 0;
  PseudoFlow cover;
};

/// Minimum flow C on a DagST graph with C(e) >= 1 for every demanded edge;
/// value = |C| = width_S(G). Builds a feasible cover from one BFS s->u path
/// and one BFS v->t path per demanded edge (u,v), then cancels the surplus
/// with a t->s max-flow in the residual network of allowed decreases.
inline CoverResult width(const Graph& g, const EdgeMask& demanded) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("width requires a dag-st graph");
  if (demanded.size() != static_cast<std::size_t>(g.edge_count())) throw InvalidInput("demand mask size mismatch");
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  const NodeId s = g.source();
  const NodeId t = g.sink();

  // BFS trees: pred_edge toward s, succ_edge toward t.
  std::vector<EdgeId> pred_edge(n, -1), succ_edge(n, -1);
  std::vector<bool> from_s(n, false), to_t(n, false);
  {
    std::queue<NodeId> q;
    q.push(s);
    from_s[static_cast<std::size_t>(s)] = true;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (EdgeId e : g.out_edges(v)) {
        NodeId w = g.edge(e).head;
        if (!from_s[static_cast<std::size_t>(w)]) {
          from_s[static_cast<std::size_t>(w)] = true;
          pred_edge[static_cast<std::size_t>(w)] = e;
          q.push(w);
        }
      }
    }
    q.push(t);
    to_t[static_cast<std::size_t>(t)] = true;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (EdgeId e : g.in_edges(v)) {
        NodeId u = g.edge(e).tail;
        if (!to_t[static_cast<std::size_t>(u)]) {
          to_t[static_cast<std::size_t>(u)] = true;
          succ_edge[static_cast<std::size_t>(u)] = e;
          q.push(u);
        }
      }
    }
  }

  PseudoFlow f = PseudoFlow::zeros(g);
  Value routed = 0;
  for (const Edge& e : g.edges()) {
    if (!demanded[static_cast<std::size_t>(e.id)]) continue;
    if (!from_s[static_cast<std::size_t>(e.tail)] || !to_t[static_cast<std::size_t>(e.head)])
      throw InvalidInput("demanded edge " + std::to_string(e.id) + " lies on no source-sink path");
    for (NodeId v = e.tail; v != s; v = g.edge(pred_edge[static_cast<std::size_t>(v)]).tail)
      f[pred_edge[static_cast<std::size_t>(v)]] += 1;
    f[e.id] += 1;
    for (NodeId v = e.head; v != t; v = g.edge(succ_edge[static_cast<std::size_t>(v)]).head)
      f[succ_edge[static_cast<std::size_t>(v)]] += 1;
    ++routed;
  }
  if (routed == 0) return {0, f};

  const Value unbounded = checked::add(routed, 1);
  detail::ResidualNetwork net(g.node_count());
  std::vector<std::pair<int, int>> arcs(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) {
    const Value lower = demanded[static_cast<std::size_t>(e.id)] ? 1 : 0;
    const int dec = net.add_arc(e.head, e.tail, f[e.id] - lower);
    const int inc = net.add_arc(e.tail, e.head, unbounded);
    arcs[static_cast<std::size_t>(e.id)] = {dec, inc};
  }
  const Value cancelled = net.max_flow(t, s);
  for (const Edge& e : g.edges()) {
    auto [dec, inc] = arcs[static_cast<std::size_t>(e.id)];
    f[e.id] = f[e.id] + net.flow(inc) - net.flow(dec);
  }
  return {routed - cancelled, std::move(f)};
}

inline CoverResult width(const Graph& g) { return width(g, all_edges(g)); }

/// width(G|_X): minimum path cover of the support of x, as a value.
inline Value support_width(const Graph& g, const PseudoFlow& x) {
  const Subgraph sub = support_subgraph(g, x);
  return width(sub.graph).value;
}

/// Minimum-cost circulation C restricted to allowed edges with C(e) >= 1 on
/// every demanded edge. Lower bounds are removed by the excess/deficit
/// transformation; the residual problem is solved by successive shortest
/// paths. Throws InvalidInput when some demanded edge lies on no directed
/// cycle of the allowed subgraph.
inline CoverResult mccc(const Graph& g, const EdgeMask& demanded, const EdgeMask& allowed) {
  const std::size_t m = static_cast<std::size_t>(g.edge_count());
  if (demanded.size() != m || allowed.size() != m) throw InvalidInput("mccc: mask size mismatch");
  const int n = g.node_count();
  std::vector<Value> excess(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) {
    if (!demanded[static_cast<std::size_t>(e.id)]) continue;
    if (!allowed[static_cast<std::size_t>(e.id)]) throw InvalidInput("mccc: demanded edge not allowed");
    excess[static_cast<std::size_t>(e.head)] += 1;
    excess[static_cast<std::size_t>(e.tail)] -= 1;
  }
  Value supply = 0;
  for (Value x : excess)
    if (x > 0) supply += x;

  const NodeId super_s = n;
  const NodeId super_t = n + 1;
  detail::ResidualNetwork net(n + 2);
  std::vector<int> arc(m, -1);
  const Value unbounded = supply + 1;
  for (const Edge& e : g.edges())
    if (allowed[static_cast<std::size_t>(e.id)])
      arc[static_cast<std::size_t>(e.id)] = net.add_arc(e.tail, e.head, unbounded, e.cost);
  for (NodeId v = 0; v < n; ++v) {
    const Value x = excess[static_cast<std::size_t>(v)];
    if (x > 0) net.add_arc(super_s, v, x);
    if (x < 0) net.add_arc(v, super_t, -x);
  }
  const Value sent = supply > 0 ? net.min_cost_flow(super_s, super_t, supply) : 0;
  if (sent != supply)
    throw InvalidInput("mccc: some demanded edge lies on no directed cycle; no circulation cover exists");

  PseudoFlow c = PseudoFlow::zeros(g);
  for (const Edge& e : g.edges()) {
    if (!allowed[static_cast<std::size_t>(e.id)]) continue;
    c[e.id] = (demanded[static_cast<std::size_t>(e.id)] ? 1 : 0) + net.flow(arc[static_cast<std::size_t>(e.id)]);
  }
  return {cost(g, c), std::move(c)};
}

inline CoverResult mccc(const Graph& g, const EdgeMask& demanded) { return mccc(g, demanded, all_edges(g)); }
inline CoverResult mccc(const Graph& g) { return mccc(g, all_edges(g)); }

/// Splits a non-negative flow into at most m weighted s-t paths by
/// repeatedly following the lowest-id positive out-edge from the source and
/// removing the path's bottleneck.
inline std::vector<WeightedPath> extract_paths(const Graph& g, const PseudoFlow& f) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("extract_paths requires a dag-st graph");
  require_dimension(g, f);
  if (!f.is_nonnegative()) throw InvalidInput("extract_paths: flow has a negative entry");
  if (!is_flow(g, f)) throw InvalidInput("extract_paths: input is not a flow");
  PseudoFlow rest = f;
  std::vector<WeightedPath> out;
  while (total(g, rest) > 0) {
    WeightedPath p;
    Value bottleneck = std::numeric_limits<Value>::max();
    for (NodeId v = g.source(); v != g.sink();) {
      EdgeId next = -1;
      for (EdgeId e : g.out_edges(v))
        if (rest[e] > 0) {
          next = e;
          break;
        }
      if (next < 0) throw std::logic_error("extract_paths: walk stuck at node " + std::to_string(v));
      p.edges.push_back(next);
      bottleneck = std::min(bottleneck, rest[next]);
      v = g.edge(next).head;
    }
    for (EdgeId e : p.edges) rest[e] -= bottleneck;
    p.weight = bottleneck;
    out.push_back(std::move(p));
  }
  return out;
}

struct WeightedCycle {
  std::vector<EdgeId> edges;
  Value weight = 0;
};

/// Splits a non-negative circulation into at most m weighted simple cycles.
inline std::vector<WeightedCycle> extract_cycles(const Graph& g, const PseudoFlow& c) {
  require_dimension(g, c);
  if (!c.is_nonnegative()) throw InvalidInput("extract_cycles: negative entry");
  if (!is_circulation(g, c)) throw InvalidInput("extract_cycles: input is not a circulation");
  PseudoFlow rest = c;
  std::vector<WeightedCycle> out;
  std::vector<int> position(static_cast<std::size_t>(g.node_count()), -1);
  for (EdgeId start = 0; start < g.edge_count(); ++start) {
    while (rest[start] > 0) {
      std::vector<EdgeId> walk{start};
      std::vector<NodeId> visited{g.edge(start).tail};
      position[static_cast<std::size_t>(g.edge(start).tail)] = 0;
      NodeId v = g.edge(start).head;
      while (position[static_cast<std::size_t>(v)] < 0) {
        position[static_cast<std::size_t>(v)] = static_cast<int>(visited.size());
        visited.push_back(v);
        EdgeId next = -1;
        for (EdgeId e : g.out_edges(v))
          if (rest[e] > 0) {
            next = e;
            break;
          }
        if (next < 0) throw std::logic_error("extract_cycles: walk stuck at node " + std::to_string(v));
        walk.push_back(next);
        v = g.edge(next).head;
      }
      WeightedCycle cyc;
      cyc.edges.assign(walk.begin() + position[static_cast<std::size_t>(v)], walk.end());
      for (NodeId u : visited) position[static_cast<std::size_t>(u)] = -1;
      cyc.weight = std::numeric_limits<Value>::max();
      for (EdgeId e : cyc.edges) cyc.weight = std::min(cyc.weight, rest[e]);
      for (EdgeId e : cyc.edges) rest[e] -= cyc.weight;
      out.push_back(std::move(cyc));
    }
  }
  return out;
}

}  // namespace flowdecomp
