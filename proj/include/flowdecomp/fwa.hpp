#pragma once

// Weight assignment for a fixed set of s-t paths: the incidence system
// L w = x, its integer solution lattice, a bounded natural-weight search,
// and rank diagnostics.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flowdecomp/graph.hpp"

namespace flowdecomp {

using BigInt = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<BigInt>>;

// L[i][j] = 1 iff path j uses edge i; rhs[i] = x(e_i).
struct LinearSystem {
  std::vector<std::vector<int>> matrix;
  std::vector<Value> rhs;
  std::vector<std::vector<EdgeId>> paths;

  std::size_t rows() const noexcept { return rhs.size(); }
  std::size_t cols() const noexcept { return paths.size(); }
};

inline LinearSystem build_system(const Graph& g, const PseudoFlow& x, const std::vector<std::vector<EdgeId>>& paths) {
  require_dimension(g, x);
  LinearSystem sys;
  sys.rhs = x.values();
  sys.paths = paths;
  sys.matrix.assign(static_cast<std::size_t>(g.edge_count()), std::vector<int>(paths.size(), 0));
  for (std::size_t j = 0; j < paths.size(); ++j) {
    for (EdgeId e : paths[j])
      if (e < 0 || e >= g.edge_count())
        throw InvalidInput("path " + std::to_string(j) + " references nonexistent edge " + std::to_string(e));
    if (!is_st_path(g, paths[j])) throw InvalidInput("path " + std::to_string(j) + " is not an s-t path");
    for (EdgeId e : paths[j]) sys.matrix[static_cast<std::size_t>(e)][j] += 1;
  }
  return sys;
}

struct IntSolution {
  std::vector<BigInt> particular;
  std::vector<std::vector<BigInt>> kernel_basis;
};

// Why an integer system has no solution: equation `row` reduces either to
// 0 = residual (residual != 0) or to divisor * z = residual with divisor not
// dividing residual.
struct Infeasibility {
  std::size_t row = 0;
  BigInt divisor;
  BigInt residual;

  std::string describe() const {
    if (divisor == 0) return "equation " + std::to_string(row) + " reduces to 0 = " + residual.str();
    return "equation " + std::to_string(row) + " reduces to " + divisor.str() + " * z = " + residual.str() +
           ", which has no integer solution";
  }
};

struct IntResult {
  bool feasible = false;
  IntSolution solution;
  std::size_t rank = 0;
  std::optional<Infeasibility> certificate;
};

/// Solves A w = b over the integers. Unimodular column operations bring A
/// to lower echelon form H = A U (Euclid on each row, pivots made positive);
/// H z = b is solved by forward substitution, w = U z, and the columns of U
/// past the rank span the kernel lattice.
inline IntResult solve_diophantine(const BigMatrix& a, const std::vector<BigInt>& b) {
  const std::size_t m = a.size();
  const std::size_t k = m == 0 ? 0 : a.front().size();
  if (b.size() != m) throw InvalidInput("right-hand side has the wrong length");
  BigMatrix h = a;
  BigMatrix u(k, std::vector<BigInt>(k, 0));
  for (std::size_t j = 0; j < k; ++j) u[j][j] = 1;
  auto swap_cols = [&](std::size_t p, std::size_t q) {
    for (auto& row : h) std::swap(row[p], row[q]);
    for (auto& row : u) std::swap(row[p], row[q]);
  };
  auto sub_col = [&](std::size_t target, std::size_t from, const BigInt& factor) {
    for (auto& row : h) row[target] -= factor * row[from];
    for (auto& row : u) row[target] -= factor * row[from];
  };
  auto negate_col = [&](std::size_t p) {
    for (auto& row : h) row[p] = -row[p];
    for (auto& row : u) row[p] = -row[p];
  };

  std::vector<std::size_t> pivot_row;  // pivot column j sits in row pivot_row[j]
  for (std::size_t i = 0; i < m && pivot_row.size() < k; ++i) {
    const std::size_t p = pivot_row.size();
    while (true) {
      std::size_t best = k;
      for (std::size_t j = p; j < k; ++j)
        if (h[i][j] != 0 && (best == k || abs(h[i][j]) < abs(h[i][best]))) best = j;
      if (best == k) break;
      if (best != p) swap_cols(p, best);
      bool done = true;
      for (std::size_t j = p + 1; j < k; ++j) {
        if (h[i][j] == 0) continue;
        const BigInt q = h[i][j] / h[i][p];
        sub_col(j, p, q);
        if (h[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (h[i][p] == 0) continue;
    if (h[i][p] < 0) negate_col(p);
    pivot_row.push_back(i);
  }

  IntResult out;
  out.rank = pivot_row.size();
  std::vector<BigInt> z(k, 0);
  std::size_t next_pivot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    BigInt acc = b[i];
    for (std::size_t j = 0; j < next_pivot; ++j) acc -= h[i][j] * z[j];
    if (next_pivot < pivot_row.size() && pivot_row[next_pivot] == i) {
      const BigInt& d = h[i][next_pivot];
      if (acc % d != 0) {
        out.certificate = Infeasibility{i, d, acc};
        return out;
      }
      z[next_pivot] = acc / d;
      ++next_pivot;
    } else if (acc != 0) {
      out.certificate = Infeasibility{i, 0, acc};
      return out;
    }
  }
  out.feasible = true;
  out.solution.particular.assign(k, 0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < out.rank; ++j) out.solution.particular[r] += u[r][j] * z[j];
  for (std::size_t j = out.rank; j < k; ++j) {
    std::vector<BigInt> col(k);
    for (std::size_t r = 0; r < k; ++r) col[r] = u[r][j];
    out.solution.kernel_basis.push_back(std::move(col));
  }
  return out;
}

inline BigMatrix to_big(const LinearSystem& sys) {
  BigMatrix a(sys.rows(), std::vector<BigInt>(sys.cols()));
  for (std::size_t i = 0; i < sys.rows(); ++i)
    for (std::size_t j = 0; j < sys.cols(); ++j) a[i][j] = sys.matrix[i][j];
  return a;
}

inline IntResult solve_int(const LinearSystem& sys) {
  std::vector<BigInt> b(sys.rhs.begin(), sys.rhs.end());
  return solve_diophantine(to_big(sys), b);
}

/// L * w as big integers.
inline std::vector<BigInt> apply(const LinearSystem& sys, const std::vector<BigInt>& w) {
  if (w.size() != sys.cols()) throw InvalidInput("weight vector has the wrong length");
  std::vector<BigInt> out(sys.rows(), 0);
  for (std::size_t i = 0; i < sys.rows(); ++i)
    for (std::size_t j = 0; j < sys.cols(); ++j)
      if (sys.matrix[i][j] != 0) out[i] += sys.matrix[i][j] * w[j];
  return out;
}

inline bool satisfies(const LinearSystem& sys, const std::vector<BigInt>& w) {
  const auto lhs = apply(sys, w);
  for (std::size_t i = 0; i < sys.rows(); ++i)
    if (lhs[i] != sys.rhs[i]) return false;
  return true;
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
inline std::size_t matrix_rank(BigMatrix a) {
  const std::size_t m = a.size();
  const std::size_t k = m == 0 ? 0 : a.front().size();
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t col = 0; col < k && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = rank + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < k; ++j) a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

enum class NatStatus { Found, InfeasibleWithinBounds, BoundLimited };

inline const char* to_string(NatStatus s) {
  switch (s) {
    case NatStatus::Found:
      return "found";
    case NatStatus::InfeasibleWithinBounds:
      return "infeasible within bounds";
    case NatStatus::BoundLimited:
      return "bound-limited";
  }
  return "?";
}

struct NatResult {
  NatStatus status = NatStatus::InfeasibleWithinBounds;
  std::vector<std::vector<Value>> solutions;  // lexicographically increasing
  std::vector<Value> caps;
  std::int64_t steps = 0;
  bool truncated = false;  // step budget hit; solutions may be incomplete

  const std::vector<Value>& weights() const { return solutions.front(); }
};

/// Per-path bottleneck of the right-hand side; any natural solution
/// respects it.
inline std::vector<Value> bottleneck_caps(const LinearSystem& sys) {
  std::vector<Value> caps(sys.cols(), 0);
  for (std::size_t j = 0; j < sys.cols(); ++j) {
    Value cap = std::numeric_limits<Value>::max();
    bool any = false;
    for (std::size_t i = 0; i < sys.rows(); ++i)
      if (sys.matrix[i][j] != 0) {
        cap = std::min(cap, sys.rhs[i] / sys.matrix[i][j]);
        any = true;
      }
    caps[j] = any ? std::max<Value>(cap, 0) : 0;
  }
  return caps;
}

/// Natural solutions w in [0, cap]^k of L w = x, in lexicographic order, up
/// to max_solutions. Backtracking assigns paths in index order; an edge
/// whose last covering path is being assigned forces that weight, and
/// partial sums prune against the right-hand side from both sides.
inline NatResult solve_nat_all(const LinearSystem& sys, std::size_t max_solutions,
                               std::optional<std::vector<Value>> caps = std::nullopt,
                               std::int64_t max_steps = 50'000'000) {
  const std::size_t m = sys.rows(), k = sys.cols();
  NatResult out;
  out.caps = caps ? *caps : bottleneck_caps(sys);
  if (out.caps.size() != k) throw InvalidInput("caps have the wrong length");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sys.matrix[i][j] < 0) throw InvalidInput("solve_nat expects a non-negative matrix");

  std::vector<int> last(m, -1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sys.matrix[i][j] != 0) last[i] = static_cast<int>(j);
  for (std::size_t i = 0; i < m; ++i)
    if (last[i] < 0 && sys.rhs[i] != 0) return out;
  // remaining[j][i]: largest contribution paths j.. can still add to edge i.
  std::vector<std::vector<Value>> remaining(k + 1, std::vector<Value>(m, 0));
  for (std::size_t j = k; j-- > 0;)
    for (std::size_t i = 0; i < m; ++i)
      remaining[j][i] = checked::add(remaining[j + 1][i], checked::mul(sys.matrix[i][j], out.caps[j]));
  std::vector<std::vector<std::size_t>> closing(k);
  for (std::size_t i = 0; i < m; ++i)
    if (last[i] >= 0) closing[static_cast<std::size_t>(last[i])].push_back(i);

  std::vector<Value> sum(m, 0), w(k, 0);
  bool stop = false;
  auto feasible_after = [&](std::size_t next) {
    for (std::size_t i = 0; i < m; ++i)
      if (sum[i] > sys.rhs[i] || sum[i] + remaining[next][i] < sys.rhs[i]) return false;
    return true;
  };
  auto assign = [&](std::size_t j, Value value, Value sign) {
    for (std::size_t i = 0; i < m; ++i)
      if (sys.matrix[i][j] != 0) sum[i] += sign * sys.matrix[i][j] * value;
  };
  auto dfs = [&](auto&& self, std::size_t j) -> void {
    if (stop) return;
    if (j == k) {
      out.solutions.push_back(w);
      if (out.solutions.size() >= max_solutions) stop = true;
      return;
    }
    Value lo = 0, hi = out.caps[j];
    for (std::size_t i : closing[j]) {
      const Value need = sys.rhs[i] - sum[i];
      if (need % sys.matrix[i][j] != 0) return;
      const Value forced = need / sys.matrix[i][j];
      lo = std::max(lo, forced);
      hi = std::min(hi, forced);
    }
    for (Value v = lo; v <= hi && !stop; ++v) {
      if (++out.steps > max_steps) {
        stop = true;
        out.truncated = true;
        return;
      }
      w[j] = v;
      assign(j, v, 1);
      if (feasible_after(j + 1)) self(self, j + 1);
      assign(j, v, -1);
    }
    w[j] = 0;
  };
  if (feasible_after(0)) dfs(dfs, 0);
  if (!out.solutions.empty())
    out.status = NatStatus::Found;
  else
    out.status = out.truncated ? NatStatus::BoundLimited : NatStatus::InfeasibleWithinBounds;
  return out;
}

/// The lexicographically smallest natural solution within caps.
inline NatResult solve_nat(const LinearSystem& sys, std::optional<std::vector<Value>> caps = std::nullopt,
                           std::int64_t max_steps = 50'000'000) {
  return solve_nat_all(sys, 1, std::move(caps), max_steps);
}

struct RankReport {
  std::size_t rank = 0;
  std::size_t paths = 0;
  std::vector<std::vector<BigInt>> kernel_basis;  // empty when feasible rank == k
  // Two distinct natural solutions within bottleneck caps, when they exist.
  std::optional<std::pair<std::vector<Value>, std::vector<Value>>> witness;
  bool witness_search_complete = true;
};

/// Rank of L; when rank < k, the kernel lattice basis and (if the natural
/// search finds them) two distinct natural solutions.
inline RankReport system_rank(const LinearSystem& sys, std::int64_t max_steps = 50'000'000) {
  RankReport r;
  r.paths = sys.cols();
  r.rank = matrix_rank(to_big(sys));
  if (r.rank == sys.cols()) return r;
  const IntResult homogeneous = solve_diophantine(to_big(sys), std::vector<BigInt>(sys.rows(), 0));
  r.kernel_basis = homogeneous.solution.kernel_basis;
  const NatResult nat = solve_nat_all(sys, 2, std::nullopt, max_steps);
  r.witness_search_complete = !nat.truncated || nat.solutions.size() >= 2;
  if (nat.solutions.size() >= 2) r.witness = std::make_pair(nat.solutions[0], nat.solutions[1]);
  return r;
}

// Two natural weight assignments (a_0..a_3, b_0..b_3) for the same eight
// paths, recorded as data: a_0 = b_0 = 3, a_i = 6^(2i) + 1, b_i = 6^(2i+1) + 5
// and a_0 = 5, b_0 = 1, a_i = 6^(2i) + 2, b_i = 6^(2i+1) + 4.
struct PathWeightFamily {
  std::vector<Value> a;
  std::vector<Value> b;
};

inline std::pair<PathWeightFamily, PathWeightFamily> rank_deficient_weight_families() {
  auto pow6 = [](int e) {
    Value v = 1;
    for (int i = 0; i < e; ++i) v *= 6;
    return v;
  };
  PathWeightFamily first{{3}, {3}}, second{{5}, {1}};
  for (int i = 1; i <= 3; ++i) {
    first.a.push_back(pow6(2 * i) + 1);
    first.b.push_back(pow6(2 * i + 1) + 5);
    second.a.push_back(pow6(2 * i) + 2);
    second.b.push_back(pow6(2 * i + 1) + 4);
  }
  return {first, second};
}

}  // namespace flowdecomp
