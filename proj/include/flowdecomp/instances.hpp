#pragma once

// Deterministic instance generators: the adversarial greedy family and its
// subdivided variant, 3-Partition reductions, random series-parallel flows,
// random DAG flows and random circulations, plus two small fixed instances.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "flowdecomp/decomposition.hpp"
#include "flowdecomp/graph.hpp"

namespace flowdecomp {

struct Instance {
  Graph graph;
  PseudoFlow flow;
};

// Adversarial instance for greedy path removal. Backbone edges carry at
// least B and form one s-t path; central edges connect the two recursive
// copies and carry exactly B.
struct GlInstance {
  Graph graph;
  PseudoFlow flow;
  std::vector<EdgeId> backbone;
  std::vector<EdgeId> central_edges;
  int level = 0;
  Value b = 0;
};

namespace detail {

class InstanceBuilder {
 public:
  NodeId node() { return nodes_++; }

  EdgeId edge(NodeId u, NodeId v, Value value, Value cost = 0) {
    const EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({id, u, v, cost});
    values_.push_back(value);
    return id;
  }

  int node_count() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Value>& values() const noexcept { return values_; }

 private:
  int nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<Value> values_;
};

struct GlPart {
  NodeId s = -1, t = -1;
  std::vector<EdgeId> backbone;
  std::vector<EdgeId> central;
  // 2l+1 paths that exactly decompose the non-backbone edges.
  std::vector<WeightedPath> nonbackbone_paths;
};

inline std::vector<EdgeId> concat(std::initializer_list<const std::vector<EdgeId>*> parts) {
  std::vector<EdgeId> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

inline GlPart build_gl(InstanceBuilder& b, int level, Value big) {
  GlPart part;
  if (level == 1) {
    const NodeId s = b.node(), u = b.node(), v = b.node(), t = b.node(), a = b.node(), w = b.node();
    const EdgeId su = b.edge(s, u, big + 1);
    const EdgeId uv = b.edge(u, v, big);
    const EdgeId vt = b.edge(v, t, big + 1);
    const EdgeId su_light = b.edge(s, u, 1);
    const EdgeId vt_light = b.edge(v, t, 1);
    const EdgeId sa = b.edge(s, a, 2);
    const EdgeId av = b.edge(a, v, 2);
    const EdgeId uw = b.edge(u, w, 2);
    const EdgeId wt = b.edge(w, t, 2);
    part.s = s;
    part.t = t;
    part.backbone = {su, uv, vt};
    part.central = {uv};
    part.nonbackbone_paths = {{{su_light, uv, vt_light}, 1}, {{sa, av, vt}, 2}, {{su, uw, wt}, 2}};
    return part;
  }
  const Value half = Value{1} << level;
  const NodeId s = b.node();
  GlPart upper = build_gl(b, level - 1, big);
  GlPart lower = build_gl(b, level - 1, big);
  const NodeId t = b.node();
  const EdgeId enter = b.edge(s, upper.s, big + half);
  const EdgeId central = b.edge(upper.t, lower.s, big);
  const EdgeId leave = b.edge(lower.t, t, big + half);
  const EdgeId bypass_in = b.edge(s, lower.s, half);
  const EdgeId bypass_out = b.edge(upper.t, t, half);
  const std::vector<EdgeId> e_enter{enter}, e_central{central}, e_leave{leave}, e_in{bypass_in}, e_out{bypass_out};
  part.s = s;
  part.t = t;
  part.backbone = concat({&e_enter, &upper.backbone, &e_central, &lower.backbone, &e_leave});
  part.central = concat({&upper.central, &lower.central, &e_central});
  for (std::size_t i = 0; i < upper.nonbackbone_paths.size(); ++i) {
    const WeightedPath& p = upper.nonbackbone_paths[i];
    const WeightedPath& q = lower.nonbackbone_paths[i];
    part.nonbackbone_paths.push_back({concat({&e_enter, &p.edges, &e_central, &q.edges, &e_leave}), p.weight});
  }
  part.nonbackbone_paths.push_back({concat({&e_enter, &upper.backbone, &e_out}), half});
  part.nonbackbone_paths.push_back({concat({&e_in, &lower.backbone, &e_leave}), half});
  return part;
}

inline void check_gl_parameters(int level, Value b) {
  if (level < 1) throw InvalidInput("level must be at least 1");
  if (level > 20) throw InvalidInput("level must be at most 20");
  if (b < (Value{1} << (level + 1)))
    throw InvalidInput("B must be at least 2^(level+1) = " + std::to_string(Value{1} << (level + 1)));
}

}  // namespace detail

/// Recursive adversarial instance with 7 * 2^level - 5 edges and total flow
/// B + 2^(level+1).
inline GlInstance gen_gl(int level, Value b) {
  detail::check_gl_parameters(level, b);
  detail::InstanceBuilder builder;
  detail::GlPart part = detail::build_gl(builder, level, b);
  GlInstance inst;
  inst.graph = Graph::dag_st(builder.node_count(), builder.edges(), part.s, part.t);
  inst.flow = PseudoFlow(builder.values());
  inst.backbone = std::move(part.backbone);
  inst.central_edges = std::move(part.central);
  inst.level = level;
  inst.b = b;
  return inst;
}

/// The 2*level + 2 path decomposition of the instance with B = 2^(level+1):
/// 2*level + 1 paths clear every non-backbone edge, and the remaining flow is
/// 3 on each backbone edge.
inline FlowDecomposition gl_optimal_witness(const GlInstance& inst) {
  if (inst.b != (Value{1} << (inst.level + 1))) throw InvalidInput("witness requires B = 2^(level+1)");
  detail::InstanceBuilder builder;
  detail::GlPart part = detail::build_gl(builder, inst.level, inst.b);
  if (!(inst.graph == Graph::dag_st(builder.node_count(), builder.edges(), part.s, part.t)) ||
      !(inst.flow == PseudoFlow(builder.values())))
    throw InvalidInput("instance does not match the generated family member");
  FlowDecomposition d;
  d.method = "witness-gl";
  d.paths = part.nonbackbone_paths;
  const PseudoFlow rest = inst.flow - resum(inst.graph, d.paths);
  const Value last = rest[inst.backbone.front()];
  std::vector<bool> on_backbone(static_cast<std::size_t>(inst.graph.edge_count()), false);
  for (EdgeId e : inst.backbone) on_backbone[static_cast<std::size_t>(e)] = true;
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e)
    if (rest[e] != (on_backbone[static_cast<std::size_t>(e)] ? last : 0))
      throw std::logic_error("witness residual is not a uniform backbone flow at edge " + std::to_string(e));
  d.paths.push_back({inst.backbone, last});
  if (!verify_decomposition(inst.graph, inst.flow, d.paths, WeightDomain::Natural))
    throw std::logic_error("witness failed re-verification");
  return d;
}

/// gen_gl with every backbone edge (u,v) split into (u,w), (w,v), so that the
/// backbone is also the longest s-t path.
inline GlInstance gen_gl_star(int level, Value b) {
  const GlInstance base = gen_gl(level, b);
  const Graph& g = base.graph;
  std::vector<bool> on_backbone(static_cast<std::size_t>(g.edge_count()), false), is_central(on_backbone);
  for (EdgeId e : base.backbone) on_backbone[static_cast<std::size_t>(e)] = true;
  for (EdgeId e : base.central_edges) is_central[static_cast<std::size_t>(e)] = true;
  detail::InstanceBuilder builder;
  for (int v = 0; v < g.node_count(); ++v) builder.node();
  std::vector<std::vector<EdgeId>> image(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) {
    const Value x = base.flow[e.id];
    if (on_backbone[static_cast<std::size_t>(e.id)]) {
      const NodeId mid = builder.node();
      image[static_cast<std::size_t>(e.id)] = {builder.edge(e.tail, mid, x), builder.edge(mid, e.head, x)};
    } else {
      image[static_cast<std::size_t>(e.id)] = {builder.edge(e.tail, e.head, x)};
    }
  }
  GlInstance inst;
  inst.graph = Graph::dag_st(builder.node_count(), builder.edges(), g.source(), g.sink());
  inst.flow = PseudoFlow(builder.values());
  for (EdgeId e : base.backbone)
    for (EdgeId f : image[static_cast<std::size_t>(e)]) inst.backbone.push_back(f);
  for (EdgeId e : base.central_edges)
    for (EdgeId f : image[static_cast<std::size_t>(e)]) inst.central_edges.push_back(f);
  inst.level = level;
  inst.b = b;
  return inst;
}

/// 3-Partition reduction: 3q parallel edges s->mid carrying the sizes, then
/// q parallel edges mid->t carrying B. Requires sum = qB and B/4 < size < B/2.
inline Instance gen_three_partition(const std::vector<Value>& sizes, Value b) {
  if (sizes.empty() || sizes.size() % 3 != 0) throw InvalidInput("three-partition needs 3q sizes, q >= 1");
  const Value q = static_cast<Value>(sizes.size() / 3);
  Value sum = 0;
  for (Value s : sizes) {
    if (!(4 * s > b && 2 * s < b)) throw InvalidInput("size " + std::to_string(s) + " is not in (B/4, B/2)");
    sum = checked::add(sum, s);
  }
  if (sum != checked::mul(q, b)) throw InvalidInput("sizes must sum to q*B");
  detail::InstanceBuilder builder;
  const NodeId s = builder.node(), mid = builder.node(), t = builder.node();
  for (Value size : sizes) builder.edge(s, mid, size);
  for (Value i = 0; i < q; ++i) builder.edge(mid, t, b);
  return {Graph::dag_st(builder.node_count(), builder.edges(), s, t), PseudoFlow(builder.values())};
}

namespace detail {

// Random walk from `from` along out-edges (forward) or in-edges (backward)
// until reaching `to`. Every node must reach `to`.
inline std::vector<EdgeId> random_walk(const Graph& g, NodeId from, NodeId to, bool forward, std::mt19937_64& rng) {
  std::vector<EdgeId> walk;
  for (NodeId v = from; v != to;) {
    const auto& options = forward ? g.out_edges(v) : g.in_edges(v);
    if (options.empty()) throw InvalidInput("random walk reached a dead end");
    const EdgeId e = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    walk.push_back(e);
    v = forward ? g.edge(e).head : g.edge(e).tail;
  }
  if (!forward) std::reverse(walk.begin(), walk.end());
  return walk;
}

inline std::vector<EdgeId> random_path_through(const Graph& g, EdgeId e, std::mt19937_64& rng) {
  std::vector<EdgeId> p = random_walk(g, g.edge(e).tail, g.source(), false, rng);
  p.push_back(e);
  const auto tail = random_walk(g, g.edge(e).head, g.sink(), true, rng);
  p.insert(p.end(), tail.begin(), tail.end());
  return p;
}

}  // namespace detail

/// Random two-terminal series-parallel multigraph with exactly target_edges
/// edges, and a flow that sums one random weighted path through every edge
/// not yet covered, so every edge carries positive flow.
inline Instance gen_sp_random(std::uint64_t seed, int target_edges, Value weight_lo, Value weight_hi) {
  if (target_edges < 1) throw InvalidInput("target_edges must be at least 1");
  if (weight_lo < 1 || weight_hi < weight_lo) throw InvalidInput("weight range must satisfy 1 <= lo <= hi");
  std::mt19937_64 rng(seed);
  detail::InstanceBuilder builder;
  const NodeId s = builder.node(), t = builder.node();
  auto build = [&](auto&& self, NodeId u, NodeId v, int k) -> void {
    if (k == 1) {
      builder.edge(u, v, 0);
      return;
    }
    const int left = std::uniform_int_distribution<int>(1, k - 1)(rng);
    if (std::bernoulli_distribution(0.5)(rng)) {
      const NodeId w = builder.node();
      self(self, u, w, left);
      self(self, w, v, k - left);
    } else {
      self(self, u, v, left);
      self(self, u, v, k - left);
    }
  };
  build(build, s, t, target_edges);
  Graph g = Graph::dag_st(builder.node_count(), builder.edges(), s, t);
  PseudoFlow x = PseudoFlow::zeros(g);
  std::uniform_int_distribution<Value> weight(weight_lo, weight_hi);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (x[e] != 0) continue;
    const auto p = detail::random_path_through(g, e, rng);
    const Value w = weight(rng);
    for (EdgeId f : p) x[f] = checked::add(x[f], w);
  }
  return {std::move(g), std::move(x)};
}

/// Random s-t DAG on nodes 0..n-1 (source 0, sink n-1) where every node lies
/// on an s-t path. Uses max(edges, minimum needed) edges; parallel edges allowed.
inline Graph gen_random_dag(std::uint64_t seed, int nodes, int edges) {
  if (nodes < 2) throw InvalidInput("a dag needs at least two nodes");
  std::mt19937_64 rng(seed);
  std::vector<Edge> list;
  auto add = [&](NodeId u, NodeId v) { list.push_back({static_cast<EdgeId>(list.size()), u, v, 0}); };
  const NodeId t = nodes - 1;
  if (nodes == 2) add(0, 1);
  for (NodeId v = 1; v < t; ++v) {
    add(std::uniform_int_distribution<NodeId>(0, v - 1)(rng), v);
    add(v, std::uniform_int_distribution<NodeId>(v + 1, t)(rng));
  }
  while (static_cast<int>(list.size()) < edges) {
    NodeId u = std::uniform_int_distribution<NodeId>(0, t)(rng);
    NodeId v = std::uniform_int_distribution<NodeId>(0, t)(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    add(u, v);
  }
  return Graph::dag_st(nodes, std::move(list), 0, t);
}

/// Sum of `paths` random s-t paths (uniform random out-edge walks) with
/// weights in [lo, hi].
inline PseudoFlow gen_random_path_flow(std::uint64_t seed, const Graph& g, int paths, Value lo, Value hi) {
  std::mt19937_64 rng(seed);
  PseudoFlow x = PseudoFlow::zeros(g);
  std::uniform_int_distribution<Value> weight(lo, hi);
  for (int i = 0; i < paths; ++i) {
    const auto p = detail::random_walk(g, g.source(), g.sink(), true, rng);
    const Value w = weight(rng);
    for (EdgeId e : p) x[e] = checked::add(x[e], w);
  }
  return x;
}

/// Strongly connected circulatory multigraph: the cycle 0->1->...->n-1->0
/// plus random extra edges (no self-loops), costs uniform in [0, max_cost].
inline Graph gen_random_circulatory_graph(std::uint64_t seed, int nodes, int edges, Value max_cost) {
  if (nodes < 2) throw InvalidInput("a circulatory graph needs at least two nodes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Value> cost(0, max_cost);
  std::vector<Edge> list;
  for (NodeId v = 0; v < nodes; ++v) list.push_back({v, v, (v + 1) % nodes, cost(rng)});
  while (static_cast<int>(list.size()) < edges) {
    const NodeId u = std::uniform_int_distribution<NodeId>(0, nodes - 1)(rng);
    const NodeId v = std::uniform_int_distribution<NodeId>(0, nodes - 1)(rng);
    if (u == v) continue;
    list.push_back({static_cast<EdgeId>(list.size()), u, v, cost(rng)});
  }
  return Graph::circulatory(nodes, std::move(list));
}

/// Sum of `cycles` random directed cycles, each through a random edge, with
/// weight magnitude in [lo, hi] and a random sign.
inline PseudoFlow gen_random_circulation(std::uint64_t seed, const Graph& g, int cycles, Value lo, Value hi) {
  if (lo < 1 || hi < lo) throw InvalidInput("weight range must satisfy 1 <= lo <= hi");
  std::mt19937_64 rng(seed);
  PseudoFlow x = PseudoFlow::zeros(g);
  if (cycles == 0) return x;
  if (g.edge_count() == 0) throw InvalidInput("graph has no edges");
  std::uniform_int_distribution<Value> magnitude(lo, hi);
  for (int c = 0; c < cycles; ++c) {
    std::vector<EdgeId> cycle;
    for (int attempt = 0; attempt < 4 * g.edge_count() && cycle.empty(); ++attempt) {
      const EdgeId e = std::uniform_int_distribution<EdgeId>(0, g.edge_count() - 1)(rng);
      const NodeId from = g.edge(e).head, to = g.edge(e).tail;
      // Breadth-first search with shuffled adjacency for a random shortest path.
      std::vector<EdgeId> pred(static_cast<std::size_t>(g.node_count()), -1);
      std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
      std::queue<NodeId> q;
      q.push(from);
      seen[static_cast<std::size_t>(from)] = true;
      while (!q.empty() && !seen[static_cast<std::size_t>(to)]) {
        const NodeId v = q.front();
        q.pop();
        std::vector<EdgeId> outs = g.out_edges(v);
        std::shuffle(outs.begin(), outs.end(), rng);
        for (EdgeId f : outs) {
          const NodeId w = g.edge(f).head;
          if (seen[static_cast<std::size_t>(w)]) continue;
          seen[static_cast<std::size_t>(w)] = true;
          pred[static_cast<std::size_t>(w)] = f;
          q.push(w);
        }
      }
      if (!seen[static_cast<std::size_t>(to)]) continue;
      cycle.push_back(e);
      for (NodeId v = to; v != from; v = g.edge(pred[static_cast<std::size_t>(v)]).tail)
        cycle.push_back(pred[static_cast<std::size_t>(v)]);
    }
    if (cycle.empty()) throw InvalidInput("graph has no directed cycle");
    const Value w = magnitude(rng) * (std::bernoulli_distribution(0.5)(rng) ? 1 : -1);
    for (EdgeId e : cycle) x[e] = checked::add(x[e], w);
  }
  return x;
}

/// Width 3, total flow 7, yet no s-t path carries more than 2: a funnel
/// (s->K->t twice, s->M twice ->t) plus the central edge M->K with flow 1.
inline Instance funnel_with_central_edge() {
  detail::InstanceBuilder b;
  const NodeId s = b.node(), fork = b.node(), merge = b.node(), t = b.node();
  b.edge(s, fork, 3);
  b.edge(fork, t, 2);
  b.edge(fork, t, 2);
  b.edge(s, merge, 2);
  b.edge(s, merge, 2);
  b.edge(merge, t, 3);
  b.edge(merge, fork, 1);
  return {Graph::dag_st(b.node_count(), b.edges(), s, t), PseudoFlow(b.values())};
}

/// A positive flow whose integer-weight decomposition needs 4 paths
/// (weights 4, 5, 8, -3) while natural weights need 5. The edge v1->v2
/// carries 1.
inline Instance integer_weight_gap() {
  detail::InstanceBuilder b;
  const NodeId s = b.node(), v1 = b.node(), v2 = b.node(), t = b.node();
  b.edge(s, v1, 4);   // 0
  b.edge(s, v1, 2);   // 1
  b.edge(v1, v2, 1);  // 2
  b.edge(v2, t, 4);   // 3
  b.edge(v2, t, 5);   // 4
  b.edge(s, v2, 8);   // 5
  b.edge(v1, t, 5);   // 6
  return {Graph::dag_st(b.node_count(), b.edges(), s, t), PseudoFlow(b.values())};
}

/// The four paths of the integer decomposition of integer_weight_gap().
inline std::vector<WeightedPath> integer_weight_gap_paths() {
  return {{{0, 2, 3}, 4}, {{1, 6}, 5}, {{5, 4}, 8}, {{1, 2, 4}, -3}};
}

}  // namespace flowdecomp
