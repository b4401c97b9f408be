#pragma once

// Benchmark rows for the adversarial family: greedy counts against the
// constructive witness, with exact ratios.

#include <cstdio>
#include <future>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flowdecomp/flow_solvers.hpp"
#include "flowdecomp/greedy.hpp"
#include "flowdecomp/instances.hpp"
#include "flowdecomp/mccd.hpp"
#include "flowdecomp/oracle.hpp"

namespace flowdecomp {

// Exact non-negative rational p/q in lowest terms.
struct Ratio {
  Value p = 0;
  Value q = 1;

  static Ratio of(Value p, Value q) {
    if (q <= 0) throw InvalidInput("ratio denominator must be positive");
    const Value d = std::gcd(p, q);
    return {p / d, q / d};
  }

  // Exact comparison by cross-multiplication (operands are small).
  friend bool operator<(const Ratio& a, const Ratio& b) { return checked::mul(a.p, b.q) < checked::mul(b.p, a.q); }
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.p == b.p && a.q == b.q; }

  /// "p/q d.dddddd"
  std::string str() const {
    char decimal[64];
    std::snprintf(decimal, sizeof decimal, "%.6f", static_cast<double>(p) / static_cast<double>(q));
    return std::to_string(p) + "/" + std::to_string(q) + " " + decimal;
  }
};

struct BenchRow {
  std::string family;
  int level = 0;
  int m = 0;
  Value total_flow = 0;
  Value norm = 0;
  Value width_or_mccc = 0;
  std::size_t greedy_weight = 0;
  std::size_t greedy_long = 0;
  std::size_t greedy_short = 0;
  std::size_t witness = 0;
  std::size_t logz_cost = 0;  // path count of the integer-weight approximation
  std::optional<Value> oracle;
  Ratio ratio;  // greedy_weight / witness
};

inline const char* kBenchHeader =
    "family,level,m,total_flow,norm,width_or_mccc,greedy_weight,greedy_long,greedy_short,witness,logz_cost,oracle,"
    "ratio";

inline std::string to_csv(const BenchRow& r) {
  std::ostringstream out;
  out << r.family << ',' << r.level << ',' << r.m << ',' << r.total_flow << ',' << r.norm << ',' << r.width_or_mccc
      << ',' << r.greedy_weight << ',' << r.greedy_long << ',' << r.greedy_short << ',' << r.witness << ','
      << r.logz_cost << ',' << (r.oracle ? std::to_string(*r.oracle) : "") << ',' << r.ratio.str();
  return out.str();
}

/// One row for the adversarial instance at `level` with B = 2^(level+1).
/// The exact oracle runs only when oracle_max_edges admits the instance.
inline BenchRow gl_bench_row(int level, int oracle_max_edges = 9) {
  const GlInstance inst = gen_gl(level, Value{1} << (level + 1));
  BenchRow r;
  r.family = "gl";
  r.level = level;
  r.m = inst.graph.edge_count();
  r.total_flow = total(inst.graph, inst.flow);
  r.norm = norm(inst.flow);
  r.width_or_mccc = support_width(inst.graph, inst.flow);
  r.greedy_weight = greedy_decompose(inst.graph, inst.flow, PathCriterion::Weight).size();
  r.greedy_long = greedy_decompose(inst.graph, inst.flow, PathCriterion::Longest).size();
  r.greedy_short = greedy_decompose(inst.graph, inst.flow, PathCriterion::Shortest).size();
  r.witness = gl_optimal_witness(inst).size();
  r.logz_cost = mfd_z_approx(inst.graph, inst.flow).size();
  if (r.m <= oracle_max_edges) {
    const OracleResult o = exact_mfd_nat(inst.graph, inst.flow);
    if (o.status == OracleStatus::Optimal) r.oracle = o.size;
  }
  r.ratio = Ratio::of(static_cast<Value>(r.greedy_weight), static_cast<Value>(r.witness));
  return r;
}

/// Rows for levels 1..max_level, optionally computed concurrently; rows are
/// returned in level order either way.
inline std::vector<BenchRow> gl_bench(int max_level, bool parallel = true) {
  if (max_level < 1) throw InvalidInput("levels must be at least 1");
  std::vector<BenchRow> rows;
  if (!parallel) {
    for (int level = 1; level <= max_level; ++level) rows.push_back(gl_bench_row(level));
    return rows;
  }
  std::vector<std::future<BenchRow>> jobs;
  for (int level = 1; level <= max_level; ++level)
    jobs.push_back(std::async(std::launch::async, [level] { return gl_bench_row(level); }));
  for (auto& job : jobs) rows.push_back(job.get());
  return rows;
}

}  // namespace flowdecomp
