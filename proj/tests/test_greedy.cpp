#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "flowdecomp/bounds.hpp"
#include "flowdecomp/greedy.hpp"
#include "flowdecomp/instances.hpp"
#include "test_support.hpp"

namespace fd = flowdecomp;
using fd::testing::values;

namespace {

// Private-edge definition checked over all s-t paths.
bool brute_funnel(const fd::Graph& g) {
  const auto paths = fd::testing::all_paths(g);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool has_private = false;
    for (fd::EdgeId e : paths[i]) {
      bool shared = false;
      for (std::size_t j = 0; j < paths.size() && !shared; ++j)
        if (j != i && std::find(paths[j].begin(), paths[j].end(), e) != paths[j].end()) shared = true;
      if (!shared) has_private = true;
    }
    if (!has_private) return false;
  }
  return true;
}

std::size_t path_len_max(const fd::Graph& g, const fd::PseudoFlow& x, bool longest) {
  std::size_t best = longest ? 0 : std::numeric_limits<std::size_t>::max();
  for (const auto& p : fd::testing::all_paths(g)) {
    bool positive = true;
    for (fd::EdgeId e : p) positive = positive && x[e] > 0;
    if (!positive) continue;
    best = longest ? std::max(best, p.size()) : std::min(best, p.size());
  }
  return best;
}

}  // namespace

TEST(HeaviestPathTest, Examples) {
  const fd::Graph one = fd::testing::chain(3);
  const fd::WeightedPath p = fd::heaviest_path(one, values({7, 7, 7}));
  EXPECT_EQ(p.weight, 7);
  EXPECT_EQ(p.edges, (std::vector<fd::EdgeId>{0, 1, 2}));
  EXPECT_THROW(fd::heaviest_path(one, values({0, 0, 0})), fd::InvalidInput);

  for (int level = 1; level <= 4; ++level) {
    const fd::GlInstance gl = fd::gen_gl(level, fd::Value{1} << (level + 1));
    const fd::WeightedPath h = fd::heaviest_path(gl.graph, gl.flow);
    EXPECT_EQ(h.weight, fd::Value{1} << (level + 1));
    EXPECT_EQ(h.edges, gl.backbone);
  }
}

TEST(HeaviestPathTest, FunnelWithCentralEdge) {
  const fd::Instance inst = fd::funnel_with_central_edge();
  EXPECT_TRUE(fd::is_flow(inst.graph, inst.flow));
  EXPECT_EQ(fd::total(inst.graph, inst.flow), 7);
  EXPECT_EQ(fd::support_width(inst.graph, inst.flow), 3);
  EXPECT_EQ(fd::testing::brute_width(inst.graph, fd::all_edges(inst.graph)), 3);
  EXPECT_EQ(fd::testing::brute_bottleneck(inst.graph, inst.flow), 2);
  EXPECT_EQ(fd::heaviest_path(inst.graph, inst.flow).weight, 2);
  const fd::LargeWeightCheck c = fd::check_large_weight_property(inst.graph, inst.flow);
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.bottleneck, 2);
  EXPECT_EQ(c.width, 3);
  EXPECT_EQ(c.total, 7);
}

TEST(HeaviestPathTest, MatchesEnumerationOnRandomFlows) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 6, 12);
    const fd::PseudoFlow x = fd::testing::random_flow(rng, g, 5, 1, 20);
    const fd::WeightedPath p = fd::heaviest_path(g, x);
    EXPECT_EQ(p.weight, fd::testing::brute_bottleneck(g, x));
    EXPECT_TRUE(fd::is_st_path(g, p.edges));
    for (fd::EdgeId e : p.edges) EXPECT_GE(x[e], p.weight);
  }
}

TEST(SaturatingPathTest, LongestAndShortest) {
  const fd::Graph one = fd::testing::chain(2);
  EXPECT_EQ(fd::saturating_longest_path(one, values({4, 4})).weight, 4);
  EXPECT_EQ(fd::saturating_shortest_path(one, values({4, 4})).weight, 4);

  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 6, 12);
    const fd::PseudoFlow x = fd::testing::random_flow(rng, g, 5, 1, 20);
    const fd::WeightedPath lp = fd::saturating_longest_path(g, x);
    const fd::WeightedPath sp = fd::saturating_shortest_path(g, x);
    EXPECT_EQ(lp.edges.size(), path_len_max(g, x, true));
    EXPECT_EQ(sp.edges.size(), path_len_max(g, x, false));
    for (const auto* p : {&lp, &sp}) {
      fd::Value m = std::numeric_limits<fd::Value>::max();
      for (fd::EdgeId e : p->edges) m = std::min(m, x[e]);
      EXPECT_EQ(p->weight, m);
    }
  }
}

TEST(SaturatingPathTest, GlStarLongestIsBackbone) {
  for (int level = 1; level <= 3; ++level) {
    const fd::GlInstance gl = fd::gen_gl_star(level, fd::Value{1} << (level + 1));
    const fd::WeightedPath p = fd::saturating_longest_path(gl.graph, gl.flow);
    EXPECT_EQ(p.edges, gl.backbone);
  }
}

TEST(SaturatingPathTest, GlStarShortestUsesWeightOneEdges) {
  const int level = 2;
  const fd::GlInstance gl = fd::gen_gl_star(level, 8);
  const fd::FlowDecomposition d = fd::greedy_decompose(gl.graph, gl.flow, fd::PathCriterion::Shortest);
  std::size_t unit = 0;
  for (const auto& p : d.paths) unit += p.weight == 1 ? 1 : 0;
  EXPECT_GE(unit, std::size_t{1} << (level + 1));
}

TEST(GreedyTest, Examples) {
  const fd::GlInstance g1 = fd::gen_gl(1, 4);
  const fd::FlowDecomposition d = fd::greedy_decompose(g1.graph, g1.flow, fd::PathCriterion::Weight);
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.method, "greedy-weight");
  EXPECT_TRUE(fd::verify_decomposition(g1.graph, g1.flow, d.paths, fd::WeightDomain::Natural));

  const fd::Graph one = fd::testing::chain(4);
  EXPECT_EQ(fd::greedy_decompose(one, values({9, 9, 9, 9}), fd::PathCriterion::Weight).size(), 1u);
  EXPECT_EQ(fd::greedy_decompose(one, values({0, 0, 0, 0}), fd::PathCriterion::Longest).size(), 0u);
  EXPECT_THROW(fd::greedy_decompose(one, values({1, -1, 1, 1}), fd::PathCriterion::Weight), fd::InvalidInput);
}

TEST(GreedyTest, CriterionNames) {
  EXPECT_STREQ(fd::to_string(fd::PathCriterion::Weight), "greedy-weight");
  EXPECT_STREQ(fd::to_string(fd::PathCriterion::Longest), "greedy-long");
  EXPECT_STREQ(fd::to_string(fd::PathCriterion::Shortest), "greedy-short");
}

TEST(GreedyTest, SaturatesAndResumsOnRandomFlows) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const fd::Graph g = fd::testing::random_dag(rng, 7, 14);
    const fd::PseudoFlow x = fd::testing::random_flow(rng, g, 6, 1, 30);
    for (auto c : {fd::PathCriterion::Weight, fd::PathCriterion::Longest, fd::PathCriterion::Shortest}) {
      const fd::FlowDecomposition d = fd::greedy_decompose(g, x, c);
      EXPECT_LE(d.size(), static_cast<std::size_t>(g.edge_count()));
      EXPECT_TRUE(fd::verify_decomposition(g, x, d.paths, fd::WeightDomain::Natural));
      fd::PseudoFlow rest = x;
      for (const auto& p : d.paths) {
        EXPECT_GE(p.weight, 1);
        bool zeroed = false;
        for (fd::EdgeId e : p.edges) {
          rest[e] -= p.weight;
          zeroed = zeroed || rest[e] == 0;
        }
        EXPECT_TRUE(zeroed);
      }
    }
  }
}

TEST(GreedyTest, SeriesParallelBound) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const fd::Instance inst = fd::gen_sp_random(seed, 20, 1, 1000);
    ASSERT_TRUE(fd::is_series_parallel(inst.graph).is_series_parallel);
    const fd::Value b = fd::support_width(inst.graph, inst.flow);
    const fd::Value total = fd::total(inst.graph, inst.flow);
    const std::size_t count = fd::greedy_decompose(inst.graph, inst.flow, fd::PathCriterion::Weight).size();
    if (b == 1) {
      EXPECT_EQ(count, 1u);
    } else {
      // Largest c with (b/(b-1))^c <= total, by repeated multiplication.
      int c = 0;
      long double power = static_cast<long double>(b) / static_cast<long double>(b - 1);
      for (long double acc = power; acc <= static_cast<long double>(total); acc *= power) ++c;
      EXPECT_EQ(fd::width_stable_bound(total, b), c + 1);
      EXPECT_LE(static_cast<fd::Value>(count), c + 1) << "seed " << seed;
    }
    fd::PseudoFlow rest = inst.flow;
    for (const auto& p : fd::greedy_decompose(inst.graph, inst.flow, fd::PathCriterion::Weight).paths) {
      EXPECT_TRUE(fd::check_large_weight_property(inst.graph, rest).holds);
      for (fd::EdgeId e : p.edges) rest[e] -= p.weight;
    }
  }
}

TEST(LargeWeightTest, Examples) {
  const fd::Graph one = fd::testing::chain(2);
  EXPECT_TRUE(fd::check_large_weight_property(one, values({5, 5})).holds);
  EXPECT_TRUE(fd::check_large_weight_property(one, values({0, 0})).holds);
}

TEST(FunnelTest, Examples) {
  const fd::FunnelResult pair = fd::is_funnel(fd::testing::parallel_pair());
  EXPECT_TRUE(pair.is_funnel);
  ASSERT_EQ(pair.private_edges.size(), 2u);
  // s->u, s->v merge at m, m forks to t twice.
  const fd::Graph g = fd::Graph::dag_st(4, {{0, 0, 1, 0}, {1, 0, 1, 0}, {2, 1, 2, 0}, {3, 1, 2, 0}}, 0, 2);
  EXPECT_FALSE(fd::is_funnel(g).is_funnel);
  EXPECT_FALSE(fd::is_funnel(fd::funnel_with_central_edge().graph).is_funnel);
  EXPECT_TRUE(fd::is_funnel(fd::testing::diamond()).is_funnel);
}

TEST(FunnelTest, AgreesWithPrivateEdgeDefinition) {
  std::mt19937_64 rng(34);
  int funnels = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int m = std::uniform_int_distribution<int>(std::max(1, 2 * (n - 2)), 10)(rng);
    const fd::Graph g = fd::testing::random_dag(rng, n, m);
    const fd::FunnelResult r = fd::is_funnel(g);
    EXPECT_EQ(r.is_funnel, brute_funnel(g)) << "trial " << trial;
    if (r.is_funnel) {
      ++funnels;
      for (const auto& [path, priv] : r.private_edges) {
        EXPECT_NE(std::find(path.begin(), path.end(), priv), path.end());
        for (const auto& [other, unused] : r.private_edges)
          if (other != path) {
            EXPECT_EQ(std::find(other.begin(), other.end(), priv), other.end());
          }
      }
    }
  }
  EXPECT_GT(funnels, 10);
}

TEST(SeriesParallelTest, Examples) {
  const auto d = fd::is_series_parallel(fd::testing::diamond());
  EXPECT_TRUE(d.is_series_parallel);
  EXPECT_EQ(d.tree.leaf_count(), 4u);
  EXPECT_TRUE(fd::is_series_parallel(fd::testing::chain(1)).is_series_parallel);
  EXPECT_TRUE(fd::is_series_parallel(fd::gen_three_partition({3, 3, 4}, 10).graph).is_series_parallel);
  EXPECT_TRUE(fd::is_series_parallel(fd::gen_three_partition({3, 3, 4, 3, 3, 4}, 10).graph).is_series_parallel);

  // Diamond plus the crossing edge u->v.
  const fd::Graph crossing =
      fd::Graph::dag_st(4, {{0, 0, 1, 0}, {1, 1, 3, 0}, {2, 0, 2, 0}, {3, 2, 3, 0}, {4, 1, 2, 0}}, 0, 3);
  EXPECT_FALSE(fd::is_series_parallel(crossing).is_series_parallel);
  EXPECT_FALSE(fd::is_series_parallel(fd::gen_gl(1, 4).graph).is_series_parallel);
}

TEST(SeriesParallelTest, TreeCoversEveryEdgeOnce) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const fd::Instance inst = fd::gen_sp_random(seed, 25, 1, 10);
    const auto r = fd::is_series_parallel(inst.graph);
    ASSERT_TRUE(r.is_series_parallel);
    std::multiset<fd::EdgeId> seen;
    for (const auto& node : r.tree.nodes)
      if (node.kind == fd::SpTree::Kind::Edge) seen.insert(node.edge);
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(inst.graph.edge_count()));
    EXPECT_EQ(std::set<fd::EdgeId>(seen.begin(), seen.end()).size(), seen.size());
  }
}

TEST(StabilityTest, Verdicts) {
  const fd::StabilityReport sp = fd::falsify_width_stability(fd::gen_sp_random(5, 15, 1, 9).graph, 50, 1);
  EXPECT_EQ(sp.verdict, fd::StabilityVerdict::StableCertified);
  EXPECT_EQ(fd::falsify_width_stability(fd::testing::chain(1), 10, 1).verdict, fd::StabilityVerdict::StableCertified);

  for (int level = 1; level <= 2; ++level) {
    const fd::GlInstance gl = fd::gen_gl(level, fd::Value{1} << (level + 1));
    const fd::StabilityReport r = fd::falsify_width_stability(gl.graph, 200, 7);
    EXPECT_EQ(r.verdict, fd::StabilityVerdict::UnstableWitnessed);
    EXPECT_TRUE(fd::reverify_witness(gl.graph, r));
    EXPECT_STREQ(fd::to_string(r.verdict), "UnstableWitnessed");
  }
}

TEST(StabilityTest, DeterministicForSeed) {
  const fd::GlInstance gl = fd::gen_gl(2, 8);
  const fd::StabilityReport a = fd::falsify_width_stability(gl.graph, 200, 11);
  const fd::StabilityReport b = fd::falsify_width_stability(gl.graph, 200, 11);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.trials_used, b.trials_used);
  EXPECT_EQ(a.smaller, b.smaller);
}

TEST(StabilityTest, ForgedWitnessIsRejected) {
  const fd::Graph d = fd::testing::diamond();
  fd::StabilityReport forged;
  forged.verdict = fd::StabilityVerdict::UnstableWitnessed;
  forged.witness = fd::StabilityReport::Witness::WidthIncrease;
  forged.smaller = values({1, 1, 0, 0});
  forged.larger = values({1, 1, 1, 1});
  EXPECT_FALSE(fd::reverify_witness(d, forged));
}
