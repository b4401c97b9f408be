#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "flowdecomp/greedy.hpp"
#include "flowdecomp/instances.hpp"
#include "test_support.hpp"

namespace fd = flowdecomp;

namespace {

fd::Value pow2(int k) { return fd::Value{1} << k; }

}  // namespace

TEST(GlTest, SizesAndTotals) {
  EXPECT_EQ(fd::gen_gl(1, 4).graph.edge_count(), 9);
  EXPECT_EQ(fd::total(fd::gen_gl(1, 4).graph, fd::gen_gl(1, 4).flow), 8);
  EXPECT_EQ(fd::gen_gl(3, 16).graph.edge_count(), 51);
  for (int level = 1; level <= 8; ++level) {
    for (fd::Value b : {pow2(level + 1), pow2(level + 1) + 5}) {
      const fd::GlInstance gl = fd::gen_gl(level, b);
      EXPECT_EQ(gl.graph.edge_count(), 7 * pow2(level) - 5);
      EXPECT_EQ(fd::classify(gl.graph, gl.flow), fd::FlowClass::Flow);
      EXPECT_EQ(fd::total(gl.graph, gl.flow), b + pow2(level + 1));
      EXPECT_EQ(gl.level, level);
      EXPECT_EQ(gl.b, b);
    }
  }
}

TEST(GlTest, BackboneAndCentralEdges) {
  for (int level = 1; level <= 6; ++level) {
    const fd::Value b = pow2(level + 1);
    const fd::GlInstance gl = fd::gen_gl(level, b);
    EXPECT_TRUE(fd::is_st_path(gl.graph, gl.backbone));
    EXPECT_EQ(gl.central_edges.size(), static_cast<std::size_t>(pow2(level) - 1));
    const std::set<fd::EdgeId> on_backbone(gl.backbone.begin(), gl.backbone.end());
    for (fd::EdgeId e : gl.central_edges) {
      EXPECT_EQ(gl.flow[e], b);
      EXPECT_TRUE(on_backbone.count(e));
    }
    for (fd::EdgeId e = 0; e < gl.graph.edge_count(); ++e) {
      if (!on_backbone.count(e)) {
        EXPECT_LT(gl.flow[e], b);
        EXPECT_GE(gl.flow[e], 1);
      }
    }
    const fd::WeightedPath first = fd::heaviest_path(gl.graph, gl.flow);
    EXPECT_EQ(first.edges, gl.backbone);
    EXPECT_EQ(first.weight, b);
  }
}

TEST(GlTest, RejectsBadParameters) {
  EXPECT_THROW(fd::gen_gl(0, 4), fd::InvalidInput);
  EXPECT_THROW(fd::gen_gl(2, 7), fd::InvalidInput);
  EXPECT_THROW(fd::gen_gl_star(1, 3), fd::InvalidInput);
}

TEST(GlTest, GreedyCount) {
  for (int level = 1; level <= 6; ++level) {
    const fd::GlInstance gl = fd::gen_gl(level, pow2(level + 1));
    const auto d = fd::greedy_decompose(gl.graph, gl.flow, fd::PathCriterion::Weight);
    EXPECT_EQ(static_cast<fd::Value>(d.size()), pow2(level + 1) + 1);
  }
}

TEST(GlWitnessTest, BaseAndFirstStep) {
  auto weights = [](const fd::FlowDecomposition& d) {
    std::vector<fd::Value> w;
    for (const auto& p : d.paths) w.push_back(p.weight);
    return w;
  };
  const fd::GlInstance g1 = fd::gen_gl(1, 4);
  const fd::FlowDecomposition w1 = fd::gl_optimal_witness(g1);
  EXPECT_EQ(w1.method, "witness-gl");
  std::vector<fd::Value> a = weights(w1);
  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, (std::vector<fd::Value>{1, 2, 2, 3}));
  EXPECT_EQ(w1.paths.back().weight, 3);
  EXPECT_TRUE(fd::verify_decomposition(g1.graph, g1.flow, w1.paths, fd::WeightDomain::Natural));

  const fd::GlInstance g2 = fd::gen_gl(2, 8);
  std::vector<fd::Value> b = weights(fd::gl_optimal_witness(g2));
  std::sort(b.begin(), b.end());
  EXPECT_EQ(b, (std::vector<fd::Value>{1, 2, 2, 3, 4, 4}));
}

TEST(GlWitnessTest, CountsAndResidualOnBackbone) {
  for (int level = 1; level <= 8; ++level) {
    const fd::GlInstance gl = fd::gen_gl(level, pow2(level + 1));
    const fd::FlowDecomposition w = fd::gl_optimal_witness(gl);
    EXPECT_EQ(w.size(), static_cast<std::size_t>(2 * level + 2));
    EXPECT_TRUE(fd::verify_decomposition(gl.graph, gl.flow, w.paths, fd::WeightDomain::Natural));
    fd::PseudoFlow rest = gl.flow;
    fd::Value nonbackbone = 0;
    for (std::size_t i = 0; i + 1 < w.paths.size(); ++i) {
      nonbackbone += w.paths[i].weight;
      for (fd::EdgeId e : w.paths[i].edges) rest[e] -= w.paths[i].weight;
    }
    EXPECT_EQ(nonbackbone, pow2(level + 2) - 3);
    const std::set<fd::EdgeId> on_backbone(gl.backbone.begin(), gl.backbone.end());
    for (fd::EdgeId e = 0; e < gl.graph.edge_count(); ++e) EXPECT_EQ(rest[e], on_backbone.count(e) ? 3 : 0);
  }
}

TEST(GlWitnessTest, RequiresTightB) {
  EXPECT_THROW(fd::gl_optimal_witness(fd::gen_gl(2, 9)), fd::InvalidInput);
  fd::GlInstance tampered = fd::gen_gl(2, 8);
  tampered.flow[0] += 1;
  EXPECT_ANY_THROW(fd::gl_optimal_witness(tampered));
}

TEST(GlStarTest, Shape) {
  const fd::GlInstance s1 = fd::gen_gl_star(1, 4);
  EXPECT_EQ(s1.graph.edge_count(), 12);
  EXPECT_EQ(s1.backbone.size(), 6u);
  for (int level = 1; level <= 6; ++level) {
    const fd::GlInstance s = fd::gen_gl_star(level, pow2(level + 1));
    EXPECT_LT(s.graph.edge_count(), 2 * (7 * pow2(level) - 5));
    EXPECT_EQ(fd::classify(s.graph, s.flow), fd::FlowClass::Flow);
    EXPECT_TRUE(fd::is_st_path(s.graph, s.backbone));
  }
}

TEST(GlStarTest, BackboneIsUniqueLongestPath) {
  for (int level = 1; level <= 3; ++level) {
    const fd::GlInstance s = fd::gen_gl_star(level, pow2(level + 1));
    std::size_t at_max = 0;
    for (const auto& p : fd::testing::all_paths(s.graph)) {
      EXPECT_LE(p.size(), s.backbone.size());
      at_max += p.size() == s.backbone.size() ? 1 : 0;
    }
    EXPECT_EQ(at_max, 1u);
  }
}

TEST(ThreePartitionTest, Shapes) {
  const fd::Instance one = fd::gen_three_partition({3, 3, 4}, 10);
  EXPECT_EQ(one.graph.edge_count(), 4);
  EXPECT_EQ(one.graph.node_count(), 3);
  EXPECT_EQ(fd::classify(one.graph, one.flow), fd::FlowClass::Flow);
  const fd::Instance two = fd::gen_three_partition({3, 3, 4, 3, 3, 4}, 10);
  EXPECT_EQ(two.graph.edge_count(), 8);
  EXPECT_EQ(fd::total(two.graph, two.flow), 20);
}

TEST(ThreePartitionTest, RejectsBadSizes) {
  EXPECT_THROW(fd::gen_three_partition({3, 3, 3}, 10), fd::InvalidInput);
  EXPECT_THROW(fd::gen_three_partition({2, 4, 4}, 10), fd::InvalidInput);
  EXPECT_THROW(fd::gen_three_partition({5, 3, 2}, 10), fd::InvalidInput);
  EXPECT_THROW(fd::gen_three_partition({3, 3}, 6), fd::InvalidInput);
}

TEST(SpRandomTest, ShapeAndDeterminism) {
  const fd::Instance single = fd::gen_sp_random(3, 1, 1, 5);
  EXPECT_EQ(single.graph.edge_count(), 1);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const fd::Instance a = fd::gen_sp_random(seed, 30, 1, 100);
    const fd::Instance b = fd::gen_sp_random(seed, 30, 1, 100);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.flow, b.flow);
    EXPECT_EQ(a.graph.edge_count(), 30);
    EXPECT_EQ(fd::classify(a.graph, a.flow), fd::FlowClass::Flow);
    EXPECT_TRUE(fd::is_series_parallel(a.graph).is_series_parallel);
    for (fd::EdgeId e = 0; e < a.graph.edge_count(); ++e) EXPECT_GT(a.flow[e], 0);
  }
}

TEST(RandomCirculationTest, Examples) {
  const fd::Graph tri = fd::testing::triangle();
  EXPECT_TRUE(fd::gen_random_circulation(1, tri, 0, 1, 5).is_zero());
  const fd::PseudoFlow one = fd::gen_random_circulation(2, tri, 1, 4, 4);
  EXPECT_TRUE(one == fd::testing::values({4, 4, 4}) || one == fd::testing::values({-4, -4, -4}));
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const fd::Graph g = fd::gen_random_circulatory_graph(seed, 6, 14, 9);
    const fd::PseudoFlow x = fd::gen_random_circulation(seed, g, 3, 1, 20);
    EXPECT_TRUE(fd::is_circulation(g, x));
    EXPECT_EQ(x, fd::gen_random_circulation(seed, g, 3, 1, 20));
  }
}

TEST(RandomDagTest, EveryEdgeUseful) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const fd::Graph g = fd::gen_random_dag(seed, 7, 15);
    EXPECT_EQ(g.edge_count(), 15);
    const auto useful = fd::st_useful_edges(g);
    EXPECT_TRUE(std::all_of(useful.begin(), useful.end(), [](bool b) { return b; }));
    const fd::PseudoFlow x = fd::gen_random_path_flow(seed, g, 4, 1, 9);
    EXPECT_TRUE(fd::is_flow(g, x));
  }
}

TEST(FixedInstancesTest, IntegerWeightGap) {
  const fd::Instance gap = fd::integer_weight_gap();
  EXPECT_EQ(fd::classify(gap.graph, gap.flow), fd::FlowClass::Flow);
  const auto paths = fd::integer_weight_gap_paths();
  EXPECT_TRUE(fd::verify_decomposition(gap.graph, gap.flow, paths, fd::WeightDomain::Integer));
  EXPECT_FALSE(fd::verify_decomposition(gap.graph, gap.flow, paths, fd::WeightDomain::Natural));
  std::vector<fd::Value> w;
  for (const auto& p : paths) w.push_back(p.weight);
  EXPECT_EQ(w, (std::vector<fd::Value>{4, 5, 8, -3}));
}
