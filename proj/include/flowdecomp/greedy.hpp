#pragma once

// Saturating greedy path-removal heuristics and the width-stability toolkit:
// large-weight checks, funnel and series-parallel recognition, and a seeded
// falsifier for width-stability.

#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flowdecomp/decomposition.hpp"
#include "flowdecomp/flow_solvers.hpp"
#include "flowdecomp/graph.hpp"

namespace flowdecomp {

enum class PathCriterion { Weight, Longest, Shortest };

inline const char* to_string(PathCriterion c) {
  switch (c) {
    case PathCriterion::Weight: return "greedy-weight";
    case PathCriterion::Longest: return "greedy-long";
    case PathCriterion::Shortest: return "greedy-short";
  }
  return "?";
}

namespace detail {

inline void require_nonneg_flow(const Graph& g, const PseudoFlow& x) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("a dag-st graph is required");
  require_dimension(g, x);
  if (!x.is_nonnegative()) throw InvalidInput("flow has a negative entry");
  if (!is_flow(g, x)) throw InvalidInput("input is not a flow");
}

// Single DP pass over a topological order of s-t paths in G|_x. Ties keep the
// lowest-id predecessor edge.
inline WeightedPath select_path(const Graph& g, const std::vector<NodeId>& order, const PseudoFlow& x,
                                PathCriterion criterion) {
  constexpr Value kUnreached = std::numeric_limits<Value>::min();
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  std::vector<Value> score(n, kUnreached);
  std::vector<EdgeId> via(n, -1);
  score[static_cast<std::size_t>(g.source())] =
      criterion == PathCriterion::Weight ? std::numeric_limits<Value>::max() : 0;
  for (NodeId v : order) {
    if (v == g.source()) continue;
    for (EdgeId e : g.in_edges(v)) {
      if (x[e] <= 0) continue;
      const Value from = score[static_cast<std::size_t>(g.edge(e).tail)];
      if (from == kUnreached) continue;
      Value cand = 0;
      bool better = false;
      Value& cur = score[static_cast<std::size_t>(v)];
      switch (criterion) {
        case PathCriterion::Weight:
          cand = std::min(from, x[e]);
          better = cur == kUnreached || cand > cur;
          break;
        case PathCriterion::Longest:
          cand = from + 1;
          better = cur == kUnreached || cand > cur;
          break;
        case PathCriterion::Shortest:
          cand = from + 1;
          better = cur == kUnreached || cand < cur;
          break;
      }
      if (better) {
        cur = cand;
        via[static_cast<std::size_t>(v)] = e;
      }
    }
  }
  if (score[static_cast<std::size_t>(g.sink())] == kUnreached) throw InvalidInput("flow is zero: no s-t path carries flow");
  WeightedPath p;
  for (NodeId v = g.sink(); v != g.source(); v = g.edge(via[static_cast<std::size_t>(v)]).tail)
    p.edges.push_back(via[static_cast<std::size_t>(v)]);
  std::reverse(p.edges.begin(), p.edges.end());
  p.weight = std::numeric_limits<Value>::max();
  for (EdgeId e : p.edges) p.weight = std::min(p.weight, x[e]);
  return p;
}

}  // namespace detail

/// An s-t path maximizing the minimum edge value; weight is that bottleneck.
inline WeightedPath heaviest_path(const Graph& g, const PseudoFlow& x) {
  detail::require_nonneg_flow(g, x);
  return detail::select_path(g, topo_order(g), x, PathCriterion::Weight);
}

/// Path with the most edges in G|_x, carrying its bottleneck.
inline WeightedPath saturating_longest_path(const Graph& g, const PseudoFlow& x) {
  detail::require_nonneg_flow(g, x);
  return detail::select_path(g, topo_order(g), x, PathCriterion::Longest);
}

/// Path with the fewest edges in G|_x, carrying its bottleneck.
inline WeightedPath saturating_shortest_path(const Graph& g, const PseudoFlow& x) {
  detail::require_nonneg_flow(g, x);
  return detail::select_path(g, topo_order(g), x, PathCriterion::Shortest);
}

/// Removes criterion-optimal paths with their bottleneck weight until the
/// flow is exhausted. Every step zeroes at least one edge.
inline FlowDecomposition greedy_decompose(const Graph& g, const PseudoFlow& x, PathCriterion criterion) {
  detail::require_nonneg_flow(g, x);
  FlowDecomposition d;
  d.method = to_string(criterion);
  const auto order = topo_order(g);
  PseudoFlow rest = x;
  while (total(g, rest) > 0) {
    WeightedPath p = detail::select_path(g, order, rest, criterion);
    for (EdgeId e : p.edges) rest[e] -= p.weight;
    d.trace.push_back(p.weight);
    d.paths.push_back(std::move(p));
  }
  return d;
}

struct LargeWeightCheck {
  bool holds = true;
  Value bottleneck = 0;
  Value width = 0;
  Value total = 0;
};

/// Whether some s-t path in G|_x carries at least |x| / width(G|_x), compared
/// as bottleneck * width >= |x|. A violation certifies that g is not
/// width-stable.
inline LargeWeightCheck check_large_weight_property(const Graph& g, const PseudoFlow& x) {
  detail::require_nonneg_flow(g, x);
  LargeWeightCheck r;
  r.total = total(g, x);
  if (r.total == 0) return r;
  r.bottleneck = heaviest_path(g, x).weight;
  r.width = support_width(g, x);
  r.holds = checked::mul(r.bottleneck, r.width) >= r.total;
  return r;
}

struct FunnelResult {
  bool is_funnel = false;
  // One entry per s-t path when is_funnel: the path and one of its private edges.
  std::vector<std::pair<std::vector<EdgeId>, EdgeId>> private_edges;
};

/// Funnel test on the edges that lie on s-t paths: a funnel has no merging
/// node (in-degree > 1) that reaches, or is, a forking node (out-degree > 1).
inline FunnelResult is_funnel(const Graph& g) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("is_funnel requires a dag-st graph");
  const auto useful = st_useful_edges(g);
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  std::vector<int> indeg(n, 0), outdeg(n, 0);
  for (const Edge& e : g.edges())
    if (useful[static_cast<std::size_t>(e.id)]) {
      ++outdeg[static_cast<std::size_t>(e.tail)];
      ++indeg[static_cast<std::size_t>(e.head)];
    }
  std::vector<bool> after_merge(n, false);
  FunnelResult r;
  for (NodeId v : topo_order(g)) {
    bool tainted = indeg[static_cast<std::size_t>(v)] > 1;
    for (EdgeId e : g.in_edges(v))
      if (useful[static_cast<std::size_t>(e)] && after_merge[static_cast<std::size_t>(g.edge(e).tail)]) tainted = true;
    after_merge[static_cast<std::size_t>(v)] = tainted;
    if (tainted && outdeg[static_cast<std::size_t>(v)] > 1) return r;
  }
  r.is_funnel = true;
  const auto paths = enumerate_st_paths(g, useful, static_cast<std::size_t>(g.edge_count()) + 1);
  std::vector<int> uses(static_cast<std::size_t>(g.edge_count()), 0);
  for (const auto& p : paths)
    for (EdgeId e : p) ++uses[static_cast<std::size_t>(e)];
  for (const auto& p : paths) {
    EdgeId priv = -1;
    for (EdgeId e : p)
      if (uses[static_cast<std::size_t>(e)] == 1) {
        priv = e;
        break;
      }
    if (priv < 0) throw std::logic_error("funnel path without a private edge");
    r.private_edges.emplace_back(p, priv);
  }
  return r;
}

// Composition tree of a two-terminal series-parallel graph.
struct SpTree {
  enum class Kind { Edge, Series, Parallel };
  struct Node {
    Kind kind = Kind::Edge;
    EdgeId edge = -1;  // for Kind::Edge
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  int root = -1;

  std::size_t leaf_count() const {
    std::size_t k = 0;
    for (const Node& v : nodes) k += v.kind == Kind::Edge ? 1 : 0;
    return k;
  }
};

struct SeriesParallelResult {
  bool is_series_parallel = false;
  SpTree tree;  // meaningful only when is_series_parallel
};

/// Exhaustive series/parallel reduction: merge parallel edges and contract
/// inner nodes with in- and out-degree 1 until nothing changes. The graph is
/// series-parallel iff a single source-to-sink edge remains. Isolated nodes
/// are ignored.
inline SeriesParallelResult is_series_parallel(const Graph& g) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("is_series_parallel requires a dag-st graph");
  SeriesParallelResult r;
  if (g.edge_count() == 0) return r;
  const NodeId s = g.source();
  const NodeId t = g.sink();
  struct Virtual {
    NodeId tail, head;
    int tree;
  };
  std::vector<Virtual> ve;
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  std::vector<std::set<int>> out(n), in(n);
  SpTree& tree = r.tree;
  auto add_virtual = [&](NodeId u, NodeId v, int node) {
    const int id = static_cast<int>(ve.size());
    ve.push_back({u, v, node});
    out[static_cast<std::size_t>(u)].insert(id);
    in[static_cast<std::size_t>(v)].insert(id);
    return id;
  };
  auto kill = [&](int id) {
    out[static_cast<std::size_t>(ve[static_cast<std::size_t>(id)].tail)].erase(id);
    in[static_cast<std::size_t>(ve[static_cast<std::size_t>(id)].head)].erase(id);
  };
  // Flattens same-kind children so the tree alternates series/parallel.
  auto compose = [&](SpTree::Kind kind, int a, int b) {
    SpTree::Node node;
    node.kind = kind;
    for (int c : {a, b}) {
      const SpTree::Node& child = tree.nodes[static_cast<std::size_t>(c)];
      if (child.kind == kind)
        node.children.insert(node.children.end(), child.children.begin(), child.children.end());
      else
        node.children.push_back(c);
    }
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  for (const Edge& e : g.edges()) {
    tree.nodes.push_back({SpTree::Kind::Edge, e.id, {}});
    add_virtual(e.tail, e.head, static_cast<int>(tree.nodes.size()) - 1);
  }

  std::queue<NodeId> work;
  std::vector<bool> queued(n, true);
  for (NodeId v = 0; v < g.node_count(); ++v) work.push(v);
  auto enqueue = [&](NodeId v) {
    if (!queued[static_cast<std::size_t>(v)]) {
      queued[static_cast<std::size_t>(v)] = true;
      work.push(v);
    }
  };
  while (!work.empty()) {
    const NodeId v = work.front();
    work.pop();
    queued[static_cast<std::size_t>(v)] = false;
    std::map<NodeId, int> by_head;
    const std::vector<int> outs(out[static_cast<std::size_t>(v)].begin(), out[static_cast<std::size_t>(v)].end());
    for (int id : outs) {
      const NodeId h = ve[static_cast<std::size_t>(id)].head;
      auto it = by_head.find(h);
      if (it == by_head.end()) {
        by_head.emplace(h, id);
        continue;
      }
      const int merged_tree =
          compose(SpTree::Kind::Parallel, ve[static_cast<std::size_t>(it->second)].tree, ve[static_cast<std::size_t>(id)].tree);
      kill(it->second);
      kill(id);
      it->second = add_virtual(v, h, merged_tree);
      enqueue(h);
    }
    if (v != s && v != t && in[static_cast<std::size_t>(v)].size() == 1 && out[static_cast<std::size_t>(v)].size() == 1) {
      const int a = *in[static_cast<std::size_t>(v)].begin();
      const int b = *out[static_cast<std::size_t>(v)].begin();
      const NodeId u = ve[static_cast<std::size_t>(a)].tail;
      const NodeId w = ve[static_cast<std::size_t>(b)].head;
      const int series_tree = compose(SpTree::Kind::Series, ve[static_cast<std::size_t>(a)].tree, ve[static_cast<std::size_t>(b)].tree);
      kill(a);
      kill(b);
      add_virtual(u, w, series_tree);
      enqueue(u);
      enqueue(w);
    }
  }
  std::size_t alive = 0;
  int last = -1;
  for (std::size_t v = 0; v < n; ++v) {
    alive += out[v].size();
    if (!out[v].empty()) last = *out[v].begin();
  }
  if (alive == 1 && ve[static_cast<std::size_t>(last)].tail == s && ve[static_cast<std::size_t>(last)].head == t) {
    r.is_series_parallel = true;
    tree.root = ve[static_cast<std::size_t>(last)].tree;
  } else {
    tree = {};
  }
  return r;
}

enum class StabilityVerdict { StableCertified, UnstableWitnessed, Unknown };

inline const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::StableCertified: return "StableCertified";
    case StabilityVerdict::UnstableWitnessed: return "UnstableWitnessed";
    case StabilityVerdict::Unknown: return "Unknown";
  }
  return "?";
}

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::Unknown;
  // WidthIncrease: smaller <= larger, width(G|smaller) > width(G|larger).
  // LargeWeightViolation: smaller is a flow whose heaviest path is too light.
  enum class Witness { None, WidthIncrease, LargeWeightViolation } witness = Witness::None;
  std::optional<PseudoFlow> smaller;
  std::optional<PseudoFlow> larger;
  int trials_used = 0;
};

/// Re-checks a witness from scratch with independent width computations.
inline bool reverify_witness(const Graph& g, const StabilityReport& r) {
  switch (r.witness) {
    case StabilityReport::Witness::None:
      return false;
    case StabilityReport::Witness::WidthIncrease: {
      if (!r.smaller || !r.larger) return false;
      const PseudoFlow& x = *r.smaller;
      const PseudoFlow& y = *r.larger;
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (x[e] < 0 || x[e] > y[e]) return false;
      if (!is_flow(g, x) || !is_flow(g, y)) return false;
      return support_width(g, x) > support_width(g, y);
    }
    case StabilityReport::Witness::LargeWeightViolation:
      return r.smaller && !check_large_weight_property(g, *r.smaller).holds;
  }
  return false;
}

/// Semi-decision procedure. Series-parallel graphs are certified stable.
/// Otherwise random flow pairs X <= Y (sums of random s-t paths with weights
/// in [1, 8]) are searched for a width increase or a large-weight violation.
inline StabilityReport falsify_width_stability(const Graph& g, int trials, std::uint64_t seed) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("falsify_width_stability requires a dag-st graph");
  StabilityReport report;
  if (is_series_parallel(g).is_series_parallel) {
    report.verdict = StabilityVerdict::StableCertified;
    return report;
  }
  const auto useful = st_useful_edges(g);
  const int m = g.edge_count();
  if (m == 0 || std::none_of(useful.begin(), useful.end(), [](bool b) { return b; })) return report;

  std::mt19937_64 rng(seed);
  auto random_path = [&]() {
    std::vector<EdgeId> p;
    for (NodeId v = g.source(); v != g.sink();) {
      std::vector<EdgeId> options;
      for (EdgeId e : g.out_edges(v))
        if (useful[static_cast<std::size_t>(e)]) options.push_back(e);
      EdgeId e = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
      p.push_back(e);
      v = g.edge(e).head;
    }
    return p;
  };
  std::uniform_int_distribution<Value> weight(1, 8);

  auto found = [&](StabilityReport::Witness kind, PseudoFlow x, std::optional<PseudoFlow> y, int trial) {
    StabilityReport r;
    r.verdict = StabilityVerdict::UnstableWitnessed;
    r.witness = kind;
    r.smaller = std::move(x);
    r.larger = std::move(y);
    r.trials_used = trial + 1;
    if (!reverify_witness(g, r)) throw std::logic_error("width-stability witness failed re-verification");
    return r;
  };

  for (int trial = 0; trial < trials; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 2 * m)(rng);
    std::vector<std::pair<std::vector<EdgeId>, Value>> x_paths;
    for (int i = 0; i < k; ++i) x_paths.emplace_back(random_path(), weight(rng));
    std::vector<std::pair<std::vector<EdgeId>, Value>> y_paths = x_paths;
    const int extra = std::uniform_int_distribution<int>(0, 2 * m)(rng);
    for (int i = 0; i < extra; ++i) y_paths.emplace_back(random_path(), weight(rng));

    auto sum = [&](const auto& list) {
      PseudoFlow f = PseudoFlow::zeros(g);
      for (const auto& [p, w] : list) f += path_flow(g, p, w);
      return f;
    };
    const PseudoFlow x = sum(x_paths);
    const PseudoFlow y = sum(y_paths);
    const Value wy = support_width(g, y);
    if (support_width(g, x) > wy) return found(StabilityReport::Witness::WidthIncrease, x, y, trial);
    if (!check_large_weight_property(g, x).holds)
      return found(StabilityReport::Witness::LargeWeightViolation, x, std::nullopt, trial);
    if (!check_large_weight_property(g, y).holds)
      return found(StabilityReport::Witness::LargeWeightViolation, y, std::nullopt, trial);

    // Sub-flows of Y that drop every generating path through one edge mimic
    // a path removal that saturates that edge.
    const EdgeId cut = std::uniform_int_distribution<EdgeId>(0, m - 1)(rng);
    std::vector<std::pair<std::vector<EdgeId>, Value>> kept;
    for (const auto& item : y_paths)
      if (std::find(item.first.begin(), item.first.end(), cut) == item.first.end()) kept.push_back(item);
    const PseudoFlow z = sum(kept);
    if (!z.is_zero() && support_width(g, z) > wy) return found(StabilityReport::Witness::WidthIncrease, z, y, trial);

    // Greedy residuals of Y are also flows below Y.
    PseudoFlow rest = y;
    const auto order = topo_order(g);
    while (total(g, rest) > 0) {
      const WeightedPath p = detail::select_path(g, order, rest, PathCriterion::Weight);
      for (EdgeId e : p.edges) rest[e] -= p.weight;
      if (!rest.is_zero() && support_width(g, rest) > wy)
        return found(StabilityReport::Witness::WidthIncrease, rest, y, trial);
    }
  }
  report.trials_used = trials;
  return report;
}

}  // namespace flowdecomp
