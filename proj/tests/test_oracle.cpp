#include <gtest/gtest.h>

#include <random>

#include "flowdecomp/greedy.hpp"
#include "flowdecomp/instances.hpp"
#include "flowdecomp/mccd.hpp"
#include "flowdecomp/oracle.hpp"
#include "test_support.hpp"

namespace fd = flowdecomp;
using fd::testing::values;

namespace {

// Smallest k such that x is a sum of k weighted paths over distinct paths of
// all_paths(g), weights in [lo, hi] \ {0}. Plain depth-first search, no bounds.
fd::Value brute_mfd(const fd::Graph& g, const fd::PseudoFlow& x, fd::Value lo, fd::Value hi, int max_k) {
  const auto paths = fd::testing::all_paths(g);
  fd::PseudoFlow rest = x;
  std::function<bool(std::size_t, int)> rec = [&](std::size_t from, int k) {
    if (rest.is_zero()) return true;
    if (k == 0) return false;
    for (std::size_t i = from; i < paths.size(); ++i)
      for (fd::Value w = lo; w <= hi; ++w) {
        if (w == 0) continue;
        for (fd::EdgeId e : paths[i]) rest[e] -= w;
        const bool ok = rec(i + 1, k - 1);
        for (fd::EdgeId e : paths[i]) rest[e] += w;
        if (ok) return true;
      }
    return false;
  };
  for (int k = 0; k <= max_k; ++k)
    if (rec(0, k)) return k;
  return -1;
}

}  // namespace

TEST(ExactMfdNatTest, Examples) {
  const fd::Graph one = fd::testing::chain(2);
  const fd::OracleResult single = fd::exact_mfd_nat(one, values({7, 7}));
  EXPECT_EQ(single.size, 1);
  EXPECT_EQ(single.status, fd::OracleStatus::Optimal);
  EXPECT_EQ(fd::exact_mfd_nat(one, values({0, 0})).size, 0);

  const fd::Instance tp = fd::gen_three_partition({3, 3, 4}, 10);
  EXPECT_EQ(fd::exact_mfd_nat(tp.graph, tp.flow).size, 3);

  const fd::GlInstance g1 = fd::gen_gl(1, 4);
  const fd::OracleResult r = fd::exact_mfd_nat(g1.graph, g1.flow);
  EXPECT_EQ(r.size, 4);
  EXPECT_EQ(r.status, fd::OracleStatus::Optimal);
  EXPECT_TRUE(fd::verify_decomposition(g1.graph, g1.flow, r.decomposition.paths, fd::WeightDomain::Natural));
  EXPECT_EQ(brute_mfd(g1.graph, g1.flow, 1, fd::norm(g1.flow), 4), 4);
}

TEST(ExactMfdNatTest, RejectsBadInput) {
  const fd::Graph one = fd::testing::chain(2);
  EXPECT_THROW(fd::exact_mfd_nat(one, values({1, 2})), fd::InvalidInput);
  EXPECT_THROW(fd::exact_mfd_nat(one, values({-1, -1})), fd::InvalidInput);
  fd::OracleBudget tight;
  tight.max_edges = 1;
  EXPECT_THROW(fd::exact_mfd_nat(one, values({1, 1}), tight), fd::InvalidInput);
}

TEST(ExactMfdNatTest, MatchesBruteForceOnTinyFlows) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 5, 7);
    const fd::PseudoFlow x = fd::testing::random_flow(rng, g, 3, 1, 4);
    const fd::OracleResult r = fd::exact_mfd_nat(g, x);
    EXPECT_EQ(r.status, fd::OracleStatus::Optimal);
    EXPECT_EQ(r.size, brute_mfd(g, x, 1, fd::norm(x), 4)) << "trial " << trial;
    EXPECT_GE(r.size, fd::support_width(g, x));
    EXPECT_TRUE(fd::verify_decomposition(g, x, r.decomposition.paths, fd::WeightDomain::Natural));
  }
}

TEST(ExactMfdIntTest, Examples) {
  const fd::Graph one = fd::testing::chain(2);
  EXPECT_EQ(fd::exact_mfd_int(one, values({7, 7})).size, 1);
  EXPECT_EQ(fd::exact_mfd_int(one, values({0, 0})).size, 0);
  EXPECT_EQ(fd::exact_mfd_int(one, values({-3, -3})).size, 1);
}

TEST(ExactMfdIntTest, IntegerWeightGap) {
  const fd::Instance gap = fd::integer_weight_gap();
  const fd::OracleResult nat = fd::exact_mfd_nat(gap.graph, gap.flow);
  const fd::OracleResult in = fd::exact_mfd_int(gap.graph, gap.flow);
  EXPECT_EQ(nat.size, 5);
  EXPECT_EQ(nat.status, fd::OracleStatus::Optimal);
  EXPECT_EQ(in.size, 4);
  // Width of the support is below 4, so optimality holds only within |w| <= ||x||.
  EXPECT_EQ(in.status, fd::OracleStatus::OptimalWithinBounds);
  EXPECT_EQ(in.weight_bound, 8);
  EXPECT_STREQ(fd::to_string(in.status), "bound-limited-complete");
  bool negative = false;
  for (const auto& p : in.decomposition.paths) negative = negative || p.weight < 0;
  EXPECT_TRUE(negative);
  EXPECT_TRUE(fd::verify_decomposition(gap.graph, gap.flow, in.decomposition.paths, fd::WeightDomain::Integer));
  EXPECT_EQ(brute_mfd(gap.graph, gap.flow, 1, fd::norm(gap.flow), 5), 5);
  EXPECT_EQ(brute_mfd(gap.graph, gap.flow, -fd::norm(gap.flow), fd::norm(gap.flow), 4), 4);
}

TEST(ExactMfdIntTest, NeverWorseThanNaturalAndMatchesBruteForce) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 25; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 4, 6);
    const fd::PseudoFlow x = fd::testing::random_flow(rng, g, 3, 1, 3);
    const fd::OracleResult nat = fd::exact_mfd_nat(g, x);
    const fd::OracleResult in = fd::exact_mfd_int(g, x);
    EXPECT_LE(in.size, nat.size);
    EXPECT_NE(in.status, fd::OracleStatus::BoundLimited);
    EXPECT_EQ(in.size, brute_mfd(g, x, -fd::norm(x), fd::norm(x), 4)) << "trial " << trial;
  }
}

TEST(ExactMccdTest, Examples) {
  const fd::Graph tri = fd::testing::triangle();
  const fd::CirculationOracleResult five = fd::exact_mccd(tri, values({5, 5, 5}), fd::WeightDomain::Natural);
  EXPECT_EQ(five.cost, 3);
  ASSERT_EQ(five.decomposition.parts.size(), 1u);
  EXPECT_EQ(five.decomposition.parts[0].weight, 5);
  EXPECT_EQ(fd::exact_mccd(tri, values({5, 5, 5}), fd::WeightDomain::Integer).cost, 3);
  EXPECT_EQ(fd::exact_mccd(tri, values({0, 0, 0}), fd::WeightDomain::Integer).cost, 0);
  EXPECT_THROW(fd::exact_mccd(tri, values({-1, -1, -1}), fd::WeightDomain::Natural), fd::InvalidInput);
  EXPECT_EQ(fd::exact_mccd(tri, values({-1, -1, -1}), fd::WeightDomain::Integer).cost, 3);
}

TEST(ExactMccdTest, BowtieNeedsBothCycles) {
  const fd::Graph eight = fd::testing::bowtie(2);
  EXPECT_EQ(fd::exact_mccd(eight, values({1, 1, 1, 3, 3, 3}), fd::WeightDomain::Natural).cost, 12);
  EXPECT_EQ(fd::exact_mccd(eight, values({2, 2, 2, 2, 2, 2}), fd::WeightDomain::Natural).cost, 12);
}

TEST(ExactMccdTest, ReductionMatchesNaturalPathCount) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 4, 6);
    const fd::PseudoFlow x = fd::testing::random_flow(rng, g, 3, 1, 3);
    const fd::ReducedInstance red = fd::reduce_flow_to_circulation(g, x);
    EXPECT_EQ(fd::exact_mccd(red.graph, red.circulation, fd::WeightDomain::Natural).cost,
              fd::exact_mfd_nat(g, x).size)
        << "trial " << trial;
  }
}

TEST(ExactMccdTest, ApproximationWithinFactor) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 15; ++trial) {
    const fd::Graph g = fd::gen_random_circulatory_graph(rng(), 3, 5, 4);
    const fd::PseudoFlow x = fd::gen_random_circulation(rng(), g, 2, 1, 3);
    if (x.is_zero()) continue;
    const fd::CirculationOracleResult opt = fd::exact_mccd(g, x, fd::WeightDomain::Integer);
    const fd::Value approx = fd::mccd_z_approx(g, x).total_cost;
    EXPECT_GE(approx, opt.cost);
    EXPECT_LE(approx, (fd::ceil_log2(fd::norm(x)) + 1) * opt.cost);
    EXPECT_GE(opt.cost, fd::mccc(g, fd::support_mask(x)).value);
  }
}

TEST(SimpleCyclesTest, Counts) {
  EXPECT_EQ(fd::enumerate_simple_cycles(fd::testing::triangle(), 100).size(), 1u);
  EXPECT_EQ(fd::enumerate_simple_cycles(fd::testing::bowtie(), 100).size(), 2u);
  // Complete digraph on 3 nodes: three 2-cycles and two 3-cycles.
  const fd::Graph k3 = fd::Graph::circulatory(
      3, {{0, 0, 1, 1}, {1, 1, 0, 1}, {2, 1, 2, 1}, {3, 2, 1, 1}, {4, 0, 2, 1}, {5, 2, 0, 1}});
  EXPECT_EQ(fd::enumerate_simple_cycles(k3, 100).size(), 5u);
  EXPECT_THROW(fd::enumerate_simple_cycles(k3, 4), fd::InvalidInput);
}

TEST(WidthBruteForceTest, Examples) {
  EXPECT_EQ(fd::exact_width_bruteforce(fd::testing::chain(3)), 1);
  EXPECT_EQ(fd::exact_width_bruteforce(fd::testing::parallel_pair()), 2);
  EXPECT_EQ(fd::exact_width_bruteforce(fd::gen_gl(1, 4).graph), 3);
  EXPECT_THROW(fd::exact_width_bruteforce(fd::gen_gl(2, 8).graph), fd::InvalidInput);
}

TEST(WidthBruteForceTest, AgreesWithTestOracle) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 6, 12);
    EXPECT_EQ(fd::exact_width_bruteforce(g), fd::testing::brute_width(g, fd::all_edges(g)));
  }
}
