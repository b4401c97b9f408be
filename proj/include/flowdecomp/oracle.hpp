#pragma once

// Exact solvers for tiny instances: minimum flow decomposition over natural
// and (bounded) integer weights, minimum-cost circulation decomposition, and
// a brute-force minimum path cover.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "flowdecomp/decomposition.hpp"
#include "flowdecomp/flow_solvers.hpp"
#include "flowdecomp/graph.hpp"
#include "flowdecomp/greedy.hpp"
#include "flowdecomp/mccd.hpp"

namespace flowdecomp {

struct OracleBudget {
  int max_edges = 40;
  std::size_t max_atoms = 100000;  // enumerated paths or cycles
  Value weight_bound = 0;          // integer searches; 0 means ||x||
  int max_parts = 24;
  std::int64_t max_steps = 20'000'000;
};

enum class OracleStatus {
  Optimal,              // proven minimum
  OptimalWithinBounds,  // minimum among decompositions with |weight| <= weight_bound
  BoundLimited,         // search truncated; the result is the best incumbent
};

inline const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Optimal:
      return "optimal";
    case OracleStatus::OptimalWithinBounds:
      return "bound-limited-complete";
    case OracleStatus::BoundLimited:
      return "bound-limited";
  }
  return "?";
}

struct OracleResult {
  OracleStatus status = OracleStatus::Optimal;
  Value size = 0;
  FlowDecomposition decomposition;
  Value weight_bound = 0;
  std::int64_t steps = 0;
};

struct CirculationOracleResult {
  OracleStatus status = OracleStatus::Optimal;
  Value cost = 0;
  CirculationDecomposition decomposition;
  Value weight_bound = 0;
  std::int64_t steps = 0;
};

/// Every simple directed cycle, each reported once starting from its lowest
/// node. Throws InvalidInput beyond limit cycles.
inline std::vector<std::vector<EdgeId>> enumerate_simple_cycles(const Graph& g, std::size_t limit) {
  std::vector<std::vector<EdgeId>> cycles;
  std::vector<bool> on_stack(static_cast<std::size_t>(g.node_count()), false);
  std::vector<EdgeId> current;
  for (NodeId root = 0; root < g.node_count(); ++root) {
    auto dfs = [&](auto&& self, NodeId v) -> void {
      for (EdgeId e : g.out_edges(v)) {
        const NodeId w = g.edge(e).head;
        if (w < root || (w != root && on_stack[static_cast<std::size_t>(w)])) continue;
        current.push_back(e);
        if (w == root) {
          if (cycles.size() >= limit) throw InvalidInput("cycle enumeration exceeds the budget");
          cycles.push_back(current);
        } else {
          on_stack[static_cast<std::size_t>(w)] = true;
          self(self, w);
          on_stack[static_cast<std::size_t>(w)] = false;
        }
        current.pop_back();
      }
    };
    on_stack[static_cast<std::size_t>(root)] = true;
    dfs(dfs, root);
    on_stack[static_cast<std::size_t>(root)] = false;
  }
  return cycles;
}

namespace detail {

// Branch and bound over "atoms" (s-t paths or simple cycles). Each step
// takes the lowest edge with nonzero residual and tries every unused atom
// through it with every admissible weight. The objective is the sum of the
// used atoms' costs; each atom is used at most once.
class AtomSearch {
 public:
  struct Pick {
    std::size_t atom;
    Value weight;
  };

  AtomSearch(std::vector<std::vector<EdgeId>> atoms, std::vector<Value> atom_cost, WeightDomain domain,
             Value weight_bound, int max_parts, std::int64_t max_steps,
             std::function<Value(const PseudoFlow&)> lower_bound)
      : atoms_(std::move(atoms)),
        cost_(std::move(atom_cost)),
        domain_(domain),
        weight_bound_(weight_bound),
        max_parts_(max_parts),
        max_steps_(max_steps),
        lower_bound_(std::move(lower_bound)) {
    min_cost_ = cost_.empty() ? 0 : *std::min_element(cost_.begin(), cost_.end());
  }

  // Searches for a decomposition of x strictly cheaper than best. Returns
  // true when one was found (stored in best_picks()).
  bool run(const PseudoFlow& x, Value best) {
    best_ = best;
    used_.assign(atoms_.size(), false);
    by_edge_.assign(x.size(), {});
    for (std::size_t a = 0; a < atoms_.size(); ++a)
      for (EdgeId e : atoms_[a]) {
        auto& list = by_edge_[static_cast<std::size_t>(e)];
        if (list.empty() || list.back() != a) list.push_back(a);
      }
    found_ = false;
    search(x, 0);
    return found_;
  }

  Value best() const noexcept { return best_; }
  const std::vector<Pick>& best_picks() const noexcept { return best_picks_; }
  bool truncated() const noexcept { return truncated_; }
  std::int64_t steps() const noexcept { return steps_; }

 private:
  void search(const PseudoFlow& residual, Value spent) {
    if (truncated_) return;
    EdgeId pivot = -1;
    for (EdgeId e = 0; e < static_cast<EdgeId>(residual.size()); ++e)
      if (residual[e] != 0) {
        pivot = e;
        break;
      }
    if (pivot < 0) {
      if (spent < best_) {
        best_ = spent;
        best_picks_ = picks_;
        found_ = true;
      }
      return;
    }
    if (static_cast<int>(picks_.size()) >= max_parts_) {
      truncated_ = true;
      return;
    }
    if (spent + min_cost_ >= best_) return;
    if (!picks_.empty()) {
      const Value lb = lower_bound_(residual);
      if (lb == kInfeasible || spent + lb >= best_) return;
    }
    for (std::size_t a : by_edge_[static_cast<std::size_t>(pivot)]) {
      if (used_[a]) continue;
      const Value after = spent + cost_[a];
      if (after >= best_) continue;
      for (Value w : weights(a, residual, pivot)) {
        if (++steps_ > max_steps_) {
          truncated_ = true;
          return;
        }
        PseudoFlow next = residual;
        for (EdgeId e : atoms_[a]) next[e] -= w;
        // A nonzero remainder costs at least one more atom.
        if (!next.is_zero() && after + min_cost_ >= best_ && min_cost_ > 0) continue;
        used_[a] = true;
        picks_.push_back({a, w});
        search(next, after);
        picks_.pop_back();
        used_[a] = false;
        if (truncated_) return;
        if (after >= best_) break;
      }
    }
  }

  std::vector<Value> weights(std::size_t a, const PseudoFlow& residual, EdgeId pivot) const {
    std::vector<Value> out;
    if (domain_ == WeightDomain::Natural) {
      Value cap = std::numeric_limits<Value>::max();
      for (EdgeId e : atoms_[a]) cap = std::min(cap, residual[e]);
      for (Value w = cap; w >= 1; --w) out.push_back(w);
      return out;
    }
    const Value first = residual[pivot];
    if (first != 0 && checked::abs(first) <= weight_bound_) out.push_back(first);
    for (Value k = 1; k <= weight_bound_; ++k)
      for (Value w : {k, -k})
        if (w != first) out.push_back(w);
    return out;
  }

 public:
  static constexpr Value kInfeasible = std::numeric_limits<Value>::max();

 private:
  std::vector<std::vector<EdgeId>> atoms_;
  std::vector<Value> cost_;
  WeightDomain domain_;
  Value weight_bound_;
  int max_parts_;
  std::int64_t max_steps_;
  std::function<Value(const PseudoFlow&)> lower_bound_;
  Value min_cost_ = 0;

  std::vector<std::vector<std::size_t>> by_edge_;
  std::vector<bool> used_;
  std::vector<Pick> picks_, best_picks_;
  Value best_ = 0;
  bool found_ = false;
  bool truncated_ = false;
  std::int64_t steps_ = 0;
};

inline void check_oracle_input(const Graph& g, const PseudoFlow& x, const OracleBudget& budget) {
  require_dimension(g, x);
  if (g.edge_count() > budget.max_edges)
    throw InvalidInput("instance has " + std::to_string(g.edge_count()) + " edges; oracle cap is " +
                       std::to_string(budget.max_edges));
}

}  // namespace detail

/// Minimum number of natural-weight s-t paths decomposing x. Branches on the
/// lowest-id unsaturated edge over residual paths and weights, pruned by the
/// width of the residual support; the incumbent is greedy-weight.
inline OracleResult exact_mfd_nat(const Graph& g, const PseudoFlow& x, const OracleBudget& budget = {}) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("exact_mfd_nat requires a dag-st graph");
  detail::check_oracle_input(g, x, budget);
  if (!x.is_nonnegative() || !is_flow(g, x)) throw InvalidInput("exact_mfd_nat: input is not a non-negative flow");
  OracleResult out;
  out.decomposition.method = "exact-nat";
  if (x.is_zero()) return out;

  const FlowDecomposition greedy = greedy_decompose(g, x, PathCriterion::Weight);
  auto paths = enumerate_st_paths(g, support_mask(x), budget.max_atoms + 1);
  if (paths.size() > budget.max_atoms) throw InvalidInput("path enumeration exceeds the budget");
  const auto atoms = paths;
  const std::size_t atom_count = paths.size();
  detail::AtomSearch search(std::move(paths), std::vector<Value>(atom_count, 1), WeightDomain::Natural, 0,
                            budget.max_parts, budget.max_steps,
                            [&](const PseudoFlow& r) { return support_width(g, r); });
  const Value root_lb = support_width(g, x);
  const Value incumbent = static_cast<Value>(greedy.size());
  bool improved = false;
  if (root_lb < incumbent) improved = search.run(x, incumbent);
  if (improved) {
    for (const auto& pick : search.best_picks()) out.decomposition.paths.push_back({atoms[pick.atom], pick.weight});
  } else {
    out.decomposition.paths = greedy.paths;
  }
  out.size = static_cast<Value>(out.decomposition.size());
  out.steps = search.steps();
  out.status = search.truncated() && out.size > root_lb ? OracleStatus::BoundLimited : OracleStatus::Optimal;
  if (!verify_decomposition(g, x, out.decomposition.paths, WeightDomain::Natural))
    throw std::logic_error("exact_mfd_nat produced an invalid decomposition");
  return out;
}

/// Minimum number of integer-weight s-t paths decomposing x, with weights in
/// [-W, W] \ {0} (W = budget.weight_bound, default ||x||). Paths may use any
/// edge of g. Lower bound: paths needed to cover the residual support.
inline OracleResult exact_mfd_int(const Graph& g, const PseudoFlow& x, const OracleBudget& budget = {}) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("exact_mfd_int requires a dag-st graph");
  detail::check_oracle_input(g, x, budget);
  if (!is_flow(g, x)) throw InvalidInput("exact_mfd_int: input is not a flow");
  OracleResult out;
  out.decomposition.method = "exact-int";
  out.weight_bound = budget.weight_bound > 0 ? budget.weight_bound : norm(x);
  if (x.is_zero()) return out;

  FlowDecomposition incumbent = mfd_z_approx(g, x);
  if (x.is_nonnegative()) {
    FlowDecomposition greedy = greedy_decompose(g, x, PathCriterion::Weight);
    if (greedy.size() < incumbent.size()) incumbent = std::move(greedy);
  }
  const EdgeMask useful = st_useful_edges(g);
  auto paths = enumerate_st_paths(g, useful, budget.max_atoms + 1);
  if (paths.size() > budget.max_atoms) throw InvalidInput("path enumeration exceeds the budget");
  const auto atoms = paths;
  const std::size_t atom_count = paths.size();
  auto lower_bound = [&](const PseudoFlow& r) -> Value {
    try {
      return width(g, support_mask(r)).value;
    } catch (const InvalidInput&) {
      return detail::AtomSearch::kInfeasible;
    }
  };
  detail::AtomSearch search(std::move(paths), std::vector<Value>(atom_count, 1), WeightDomain::Integer,
                            out.weight_bound, budget.max_parts, budget.max_steps, lower_bound);
  const Value root_lb = lower_bound(x);
  if (root_lb < static_cast<Value>(incumbent.size()) && search.run(x, static_cast<Value>(incumbent.size()))) {
    out.decomposition.paths.clear();
    for (const auto& pick : search.best_picks()) out.decomposition.paths.push_back({atoms[pick.atom], pick.weight});
  } else {
    out.decomposition.paths = std::move(incumbent.paths);
  }
  out.size = static_cast<Value>(out.decomposition.size());
  out.steps = search.steps();
  if (out.size == root_lb)
    out.status = OracleStatus::Optimal;
  else
    out.status = search.truncated() ? OracleStatus::BoundLimited : OracleStatus::OptimalWithinBounds;
  if (!verify_decomposition(g, x, out.decomposition.paths, WeightDomain::Integer))
    throw std::logic_error("exact_mfd_int produced an invalid decomposition");
  return out;
}

/// Minimum-cost circulation decomposition. A part's cost is the cost of its
/// circulation; splitting a part into simple cycles never changes the total,
/// so the search ranges over sets of distinct weighted simple cycles. Natural
/// weights require x >= 0; integer weights are bounded by W (default ||x||).
/// Lower bound: mccc of the residual support.
inline CirculationOracleResult exact_mccd(const Graph& g, const PseudoFlow& x, WeightDomain domain,
                                          const OracleBudget& budget = {}) {
  detail::check_oracle_input(g, x, budget);
  if (!is_circulation(g, x)) throw InvalidInput("exact_mccd: input is not a circulation");
  CirculationOracleResult out;
  out.weight_bound = budget.weight_bound > 0 ? budget.weight_bound : norm(x);
  if (x.is_zero()) return out;
  if (domain == WeightDomain::Natural && !x.is_nonnegative())
    throw InvalidInput("exact_mccd: natural weights need a non-negative circulation");

  CirculationDecomposition incumbent;
  bool have_incumbent = false;
  if (x.is_nonnegative()) {
    std::map<std::vector<EdgeId>, Value> merged;
    for (const WeightedCycle& c : extract_cycles(g, x)) merged[c.edges] += c.weight;
    for (const auto& [edges, w] : merged) incumbent.parts.push_back({path_flow(g, edges), w});
    incumbent.total_cost = decomposition_cost(g, incumbent.parts);
    have_incumbent = true;
  }
  if (domain == WeightDomain::Integer) {
    CirculationDecomposition approx = mccd_z_approx(g, x);
    if (!have_incumbent || approx.total_cost < incumbent.total_cost) incumbent = std::move(approx);
  }

  auto cycles = enumerate_simple_cycles(g, budget.max_atoms);
  if (domain == WeightDomain::Natural) {
    const EdgeMask support = support_mask(x);
    std::erase_if(cycles, [&](const std::vector<EdgeId>& c) {
      return std::any_of(c.begin(), c.end(), [&](EdgeId e) { return !support[static_cast<std::size_t>(e)]; });
    });
  }
  const auto atoms = cycles;
  std::vector<Value> atom_cost;
  for (const auto& c : cycles) atom_cost.push_back(path_cost(g, c));
  auto lower_bound = [&](const PseudoFlow& r) -> Value {
    try {
      return mccc(g, support_mask(r)).value;
    } catch (const InvalidInput&) {
      return detail::AtomSearch::kInfeasible;
    }
  };
  detail::AtomSearch search(std::move(cycles), std::move(atom_cost), domain, out.weight_bound, budget.max_parts,
                            budget.max_steps, lower_bound);
  const Value root_lb = lower_bound(x);
  if (root_lb < incumbent.total_cost && search.run(x, incumbent.total_cost)) {
    out.decomposition.parts.clear();
    for (const auto& pick : search.best_picks())
      out.decomposition.parts.push_back({path_flow(g, atoms[pick.atom]), pick.weight});
    out.decomposition.total_cost = decomposition_cost(g, out.decomposition.parts);
  } else {
    out.decomposition = std::move(incumbent);
  }
  out.cost = out.decomposition.total_cost;
  out.steps = search.steps();
  if (out.cost == root_lb)
    out.status = OracleStatus::Optimal;
  else if (search.truncated())
    out.status = OracleStatus::BoundLimited;
  else
    out.status = domain == WeightDomain::Natural ? OracleStatus::Optimal : OracleStatus::OptimalWithinBounds;
  if (!verify_circulation_decomposition(g, x, out.decomposition, domain))
    throw std::logic_error("exact_mccd produced an invalid decomposition");
  return out;
}

/// Minimum number of s-t paths covering every edge in demanded, by iterative
/// deepening over all s-t paths (branching on the lowest uncovered edge).
inline Value exact_width_bruteforce(const Graph& g, const EdgeMask& demanded, int max_edges = 12) {
  if (g.kind() != GraphKind::DagST) throw InvalidInput("exact_width_bruteforce requires a dag-st graph");
  if (g.edge_count() > max_edges)
    throw InvalidInput("exact_width_bruteforce: " + std::to_string(g.edge_count()) + " edges exceed the cap of " +
                       std::to_string(max_edges));
  if (demanded.size() != static_cast<std::size_t>(g.edge_count())) throw InvalidInput("mask size mismatch");
  const auto paths = enumerate_st_paths(g);
  std::vector<std::vector<std::size_t>> through(static_cast<std::size_t>(g.edge_count()));
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (EdgeId e : paths[i]) through[static_cast<std::size_t>(e)].push_back(i);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (demanded[static_cast<std::size_t>(e)] && through[static_cast<std::size_t>(e)].empty())
      throw InvalidInput("edge " + std::to_string(e) + " lies on no s-t path");
  std::vector<int> covered(static_cast<std::size_t>(g.edge_count()), 0);
  auto coverable = [&](auto&& self, int k) -> bool {
    EdgeId open = -1;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (demanded[static_cast<std::size_t>(e)] && covered[static_cast<std::size_t>(e)] == 0) {
        open = e;
        break;
      }
    if (open < 0) return true;
    if (k == 0) return false;
    for (std::size_t i : through[static_cast<std::size_t>(open)]) {
      for (EdgeId e : paths[i]) ++covered[static_cast<std::size_t>(e)];
      const bool ok = self(self, k - 1);
      for (EdgeId e : paths[i]) --covered[static_cast<std::size_t>(e)];
      if (ok) return true;
    }
    return false;
  };
  for (int k = 0;; ++k)
    if (coverable(coverable, k)) return k;
}

inline Value exact_width_bruteforce(const Graph& g) { return exact_width_bruteforce(g, all_edges(g)); }

}  // namespace flowdecomp
