#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowdecomp/graph.hpp"

namespace flowdecomp {

struct FlowDecomposition {
  std::vector<WeightedPath> paths;
  std::string method;
  std::vector<Value> trace;  // per-step bottleneck, for iterative methods

  std::size_t size() const noexcept { return paths.size(); }
};

enum class WeightDomain { Natural, Integer };

struct VerifyResult {
  bool ok = true;
  std::optional<EdgeId> edge;  // first offending edge, when the failure is edge-local
  std::optional<std::size_t> path;  // first offending path, when path-local
  std::string message;

  explicit operator bool() const noexcept { return ok; }
};

inline PseudoFlow resum(const Graph& g, const std::vector<WeightedPath>& paths) {
  PseudoFlow sum = PseudoFlow::zeros(g);
  for (const WeightedPath& p : paths)
    for (EdgeId e : p.edges) sum[e] = checked::add(sum[e], p.weight);
  return sum;
}

/// Checks that every path is an s-t path, weights lie in the domain (Natural
/// means >= 1), and the weighted sum equals x exactly.
inline VerifyResult verify_decomposition(const Graph& g, const PseudoFlow& x, const std::vector<WeightedPath>& paths,
                                         WeightDomain domain) {
  require_dimension(g, x);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const WeightedPath& p = paths[i];
    if (!is_st_path(g, p.edges)) return {false, std::nullopt, i, "path " + std::to_string(i) + " is not an s-t path"};
    if (p.weight == 0 || (domain == WeightDomain::Natural && p.weight < 0))
      return {false, std::nullopt, i, "path " + std::to_string(i) + " has weight outside the domain"};
  }
  const PseudoFlow sum = resum(g, paths);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (sum[e] != x[e])
      return {false, e, std::nullopt,
              "edge " + std::to_string(e) + ": decomposition sums to " + std::to_string(sum[e]) + ", flow is " +
                  std::to_string(x[e])};
  return {};
}

// A circulation decomposition: X = sum of weight_i * circulation_i with
// every circulation_i >= 0.
struct CirculationPart {
  PseudoFlow circulation;
  Value weight = 0;
};

struct CirculationDecomposition {
  std::vector<CirculationPart> parts;
  Value total_cost = 0;
  std::string d_sign_rule;  // how the parity circulation's sign was fixed, if applicable
};

inline Value decomposition_cost(const Graph& g, const std::vector<CirculationPart>& parts) {
  Value c = 0;
  for (const CirculationPart& p : parts) c = checked::add(c, cost(g, p.circulation));
  return c;
}

/// Checks non-negativity and conservation of each part, the weight domain,
/// exact reconstruction, and the recorded total cost.
inline VerifyResult verify_circulation_decomposition(const Graph& g, const PseudoFlow& x,
                                                     const CirculationDecomposition& d, WeightDomain domain) {
  require_dimension(g, x);
  PseudoFlow sum = PseudoFlow::zeros(g);
  for (std::size_t i = 0; i < d.parts.size(); ++i) {
    const CirculationPart& p = d.parts[i];
    if (p.circulation.size() != x.size()) return {false, std::nullopt, i, "part has wrong dimension"};
    if (!p.circulation.is_nonnegative()) return {false, std::nullopt, i, "part " + std::to_string(i) + " is negative"};
    if (!is_circulation(g, p.circulation))
      return {false, std::nullopt, i, "part " + std::to_string(i) + " violates conservation"};
    if (p.weight == 0 || (domain == WeightDomain::Natural && p.weight < 0))
      return {false, std::nullopt, i, "part " + std::to_string(i) + " has weight outside the domain"};
    sum += p.weight * p.circulation;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (sum[e] != x[e])
      return {false, e, std::nullopt,
              "edge " + std::to_string(e) + ": parts sum to " + std::to_string(sum[e]) + ", target is " +
                  std::to_string(x[e])};
  if (decomposition_cost(g, d.parts) != d.total_cost) return {false, std::nullopt, std::nullopt, "total_cost mismatch"};
  return {};
}

}  // namespace flowdecomp
