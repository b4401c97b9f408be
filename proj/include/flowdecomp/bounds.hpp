#pragma once

// Exact evaluations of the closed-form bounds used by the test and bench
// harnesses.

#include <boost/multiprecision/cpp_int.hpp>

#include "flowdecomp/graph.hpp"
#include "flowdecomp/mccd.hpp"

namespace flowdecomp {

/// floor(log2(total) / log2(b / (b - 1))) + 1, the greedy path-count bound
/// on width-stable graphs. Computed as 1 + the largest c with
/// b^c <= total * (b - 1)^c.
inline Value width_stable_bound(Value total_flow, Value b) {
  if (b < 2) throw InvalidInput("width_stable_bound needs width >= 2");
  if (total_flow < 1) throw InvalidInput("width_stable_bound needs positive total flow");
  using boost::multiprecision::cpp_int;
  cpp_int lhs = 1, rhs = total_flow;
  Value c = 0;
  while (true) {
    lhs *= b;
    rhs *= b - 1;
    if (lhs > rhs) break;
    ++c;
  }
  return c + 1;
}

/// ceil(log2 ||x||) + 1, the approximation factor of the power-of-two
/// decomposition.
inline Value log_factor(Value norm_value) { return ceil_log2(norm_value) + 1; }

}  // namespace flowdecomp
