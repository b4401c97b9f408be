#pragma once

// Power-of-two circulation decomposition with integer weights: parity-fixing
// unitary circulations, binary splitting, unitary-to-difference splitting,
// the full approximation for circulations, and its flow wrapper via the
// (t,s)-edge reduction.

#include <string>
#include <utility>
#include <vector>

#include "flowdecomp/decomposition.hpp"
#include "flowdecomp/flow_solvers.hpp"
#include "flowdecomp/graph.hpp"

namespace flowdecomp {

// A violated internal invariant of the approximation pipeline.
class ConsistencyError : public std::logic_error {
 public:
  ConsistencyError(const std::string& what, std::optional<EdgeId> edge = std::nullopt)
      : std::logic_error(edge ? what + " (edge " + std::to_string(*edge) + ")" : what), edge_(edge) {}

  std::optional<EdgeId> edge() const noexcept { return edge_; }

 private:
  std::optional<EdgeId> edge_;
};

/// Smallest k with 2^k >= n (0 for n <= 1).
inline int ceil_log2(Value n) {
  int k = 0;
  while (k < 62 && (Value{1} << k) < n) ++k;
  return k;
}

/// A circulation Y with values in {-1, 0, +1} and the parity of x on every
/// edge. The odd edges form an undirected graph with even degrees; it is
/// split into closed trails (each walk starts at the lowest node with
/// unused odd edges and leaves by the lowest unused edge id) and each trail
/// is oriented along its traversal.
inline PseudoFlow unitary(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  if (!is_circulation(g, x)) throw InvalidInput("unitary: input is not a circulation");
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  std::vector<std::vector<EdgeId>> incident(n);
  for (const Edge& e : g.edges()) {
    if (x[e.id] % 2 == 0) continue;
    incident[static_cast<std::size_t>(e.tail)].push_back(e.id);
    if (e.head != e.tail) incident[static_cast<std::size_t>(e.head)].push_back(e.id);
  }
  std::vector<std::size_t> cursor(n, 0);
  std::vector<bool> used(static_cast<std::size_t>(g.edge_count()), false);
  PseudoFlow y = PseudoFlow::zeros(g);
  auto next_unused = [&](NodeId v) -> EdgeId {
    auto& list = incident[static_cast<std::size_t>(v)];
    auto& at = cursor[static_cast<std::size_t>(v)];
    while (at < list.size() && used[static_cast<std::size_t>(list[at])]) ++at;
    return at < list.size() ? list[at] : -1;
  };
  for (NodeId start = 0; start < g.node_count(); ++start) {
    while (next_unused(start) >= 0) {
      NodeId v = start;
      for (EdgeId e; (e = next_unused(v)) >= 0;) {
        used[static_cast<std::size_t>(e)] = true;
        const Edge& edge = g.edge(e);
        if (edge.tail == v) {
          y[e] = 1;
          v = edge.head;
        } else {
          y[e] = -1;
          v = edge.tail;
        }
      }
      if (v != start) throw ConsistencyError("odd-edge graph has a node of odd degree", std::nullopt);
    }
  }
  return y;
}

/// x = sum_i 2^i * Y_i with every Y_i unitary; at most ceil(log2 ||x||) + 1
/// terms. Y_0 = unitary(x), then recurse on (x - Y_0) / 2.
inline std::vector<PseudoFlow> pow2_split(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  if (!is_circulation(g, x)) throw InvalidInput("pow2_split: input is not a circulation");
  std::vector<PseudoFlow> parts;
  PseudoFlow rest = x;
  while (norm(rest) > 1) {
    PseudoFlow y = unitary(g, rest);
    rest = (rest - y).halved();
    parts.push_back(std::move(y));
  }
  parts.push_back(std::move(rest));
  return parts;
}

/// Splits a unitary circulation y into non-negative circulations A, B with
/// A - B = y and cost(A) + cost(B) = cost(c) - cost(d), where c is a
/// circulation cover (c >= 1 wherever y or d is nonzero) and d is a unitary
/// circulation with d = y + c (mod 2) and cost(d) >= 0.
inline std::pair<PseudoFlow, PseudoFlow> unitary_to_difference(const Graph& g, const PseudoFlow& y, const PseudoFlow& c,
                                                               const PseudoFlow& d) {
  require_dimension(g, y);
  require_dimension(g, c);
  require_dimension(g, d);
  if (norm(y) > 1) throw ConsistencyError("unitary_to_difference: y is not unitary");
  if (norm(d) > 1) throw ConsistencyError("unitary_to_difference: d is not unitary");
  if (cost(g, d) < 0) throw ConsistencyError("unitary_to_difference: cost(d) is negative");
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if ((d[e] - y[e] - c[e]) % 2 != 0) throw ConsistencyError("unitary_to_difference: parity mismatch", e);
  const PseudoFlow base = c - d;
  PseudoFlow a = (base + y).halved();
  PseudoFlow b = (base - y).halved();
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (a[e] < 0 || b[e] < 0) throw ConsistencyError("unitary_to_difference: negative entry", e);
  return {std::move(a), std::move(b)};
}

/// The parity circulation used against cover c for the unitary y: unitary(c + y),
/// negated when its cost is negative.
inline PseudoFlow parity_fix(const Graph& g, const PseudoFlow& y, const PseudoFlow& c) {
  PseudoFlow d = unitary(g, c + y);
  if (cost(g, d) < 0) d = -d;
  return d;
}

inline constexpr const char* kDSignRule = "cost(D) >= 0";

/// Circulation decomposition with weights +-2^j and total cost at most
/// (ceil(log2 ||x||) + 1) * mccc_S(g), S the support of x.
///
/// The cover C is computed on the subgraph of edges covered by a minimum
/// cover of S. For each nonzero binary level Y_j the parity circulation D_j
/// must match C + Y_j, so it is recomputed per level, and the parts are the
/// halved differences (C - D_j +- Y_j) / 2.
inline CirculationDecomposition mccd_z_approx(const Graph& g, const PseudoFlow& x) {
  require_dimension(g, x);
  if (!is_circulation(g, x)) throw InvalidInput("mccd_z_approx: input is not a circulation");
  CirculationDecomposition out;
  out.d_sign_rule = kDSignRule;
  if (x.is_zero()) return out;

  const CoverResult support_cover = mccc(g, support_mask(x));
  const EdgeMask kept = support_mask(support_cover.cover);
  const CoverResult cover = mccc(g, kept, kept);
  if (cover.value != support_cover.value)
    throw ConsistencyError("cover of the reduced graph differs from the support cover");
  const PseudoFlow& c = cover.cover;

  const auto levels = pow2_split(g, x);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const PseudoFlow& y = levels[j];
    if (y.is_zero()) continue;
    const PseudoFlow d = parity_fix(g, y, c);
    auto [a, b] = unitary_to_difference(g, y, c, d);
    const Value w = Value{1} << j;
    if (!a.is_zero()) out.parts.push_back({std::move(a), w});
    if (!b.is_zero()) out.parts.push_back({std::move(b), -w});
  }
  out.total_cost = decomposition_cost(g, out.parts);
  const VerifyResult check = verify_circulation_decomposition(g, x, out, WeightDomain::Integer);
  if (!check) throw ConsistencyError("mccd_z_approx output failed verification: " + check.message, check.edge);
  return out;
}

/// The (t,s)-edge reduction: g plus an edge t->s (cost 1, all other costs 0)
/// carrying |x|. The extra edge has id m.
struct ReducedInstance {
  Graph graph;
  PseudoFlow circulation;
  EdgeId return_edge = -1;
};

inline ReducedInstance reduce_flow_to_circulation(const Graph& g, const PseudoFlow& x) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("reduction requires a dag-st graph");
  require_dimension(g, x);
  if (!is_flow(g, x)) throw InvalidInput("reduction: input is not a flow");
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e.cost = 0;
  const EdgeId back = g.edge_count();
  edges.push_back({back, g.sink(), g.source(), 1});
  ReducedInstance r;
  r.graph = Graph::plain(g.node_count(), std::move(edges));
  std::vector<Value> v = x.values();
  v.push_back(total(g, x));
  r.circulation = PseudoFlow(std::move(v));
  r.return_edge = back;
  return r;
}

/// Integer-weight flow decomposition through the circulation approximation:
/// each part A is a circulation on the reduced graph, hence an s-t flow of
/// value A(t,s) once the return edge is dropped; it is split into paths that
/// carry the part's signed power-of-two weight times their multiplicity.
inline FlowDecomposition mfd_z_approx(const Graph& g, const PseudoFlow& x) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("mfd_z_approx requires a dag-st graph");
  require_dimension(g, x);
  if (!is_flow(g, x)) throw InvalidInput("mfd_z_approx: input is not a flow");
  FlowDecomposition out;
  out.method = "logz";
  if (x.is_zero()) return out;
  const ReducedInstance red = reduce_flow_to_circulation(g, x);
  const CirculationDecomposition circ = mccd_z_approx(red.graph, red.circulation);
  const std::size_t m = static_cast<std::size_t>(g.edge_count());
  for (const CirculationPart& part : circ.parts) {
    PseudoFlow f(std::vector<Value>(part.circulation.values().begin(), part.circulation.values().begin() + static_cast<std::ptrdiff_t>(m)));
    for (WeightedPath& p : extract_paths(g, f)) {
      p.weight = checked::mul(p.weight, part.weight);
      out.paths.push_back(std::move(p));
    }
  }
  const VerifyResult check = verify_decomposition(g, x, out.paths, WeightDomain::Integer);
  if (!check) throw ConsistencyError("mfd_z_approx output failed verification: " + check.message, check.edge);
  return out;
}

}  // namespace flowdecomp
