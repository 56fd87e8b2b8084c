#include <gtest/gtest.h>

#include <vector>

#include "netrecon/error.hpp"
#include "netrecon/graph.hpp"

using namespace netrecon;

TEST(Graph, EdgelessGraphHasNoNeighbors) {
  Graph g(4);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.num_edges(), 0u);
  for (Vertex v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 0u);
}

TEST(Graph, DropsDuplicatesAndSelfLoops) {
  const std::vector<Edge> edges{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}};
  EdgeDropCounts dropped;
  const Graph g = Graph::from_edges(3, edges, &dropped);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(dropped.duplicates, 2u);
  EXPECT_EQ(dropped.self_loops, 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_FALSE(g.has_edge(2, 2));
}

TEST(Graph, AdjacencyIsSymmetricAndSorted) {
  const std::vector<Edge> edges{{3, 0}, {0, 2}, {1, 3}, {2, 3}};
  const Graph g = Graph::from_edges(4, edges);
  for (Vertex u = 0; u < 4; ++u) {
    const auto nb = g.neighbors(u);
    for (std::size_t i = 1; i < nb.size(); ++i) EXPECT_LT(nb[i - 1], nb[i]);
    for (Vertex v : nb) EXPECT_TRUE(g.has_edge(v, u));
  }
  std::size_t total = 0;
  for (auto d : g.degrees()) total += d;
  EXPECT_EQ(total, 2 * g.num_edges());
}

TEST(Graph, EdgesListedOnceInOrder) {
  const std::vector<Edge> edges{{2, 1}, {1, 0}, {3, 0}};
  const Graph g = Graph::from_edges(4, edges);
  const std::vector<Edge> expected{{0, 1}, {0, 3}, {1, 2}};
  EXPECT_EQ(g.edges(), expected);
  EXPECT_EQ(Graph::from_edges(4, g.edges()), g);
}

TEST(Graph, RejectsOutOfRangeVertices) {
  const std::vector<Edge> edges{{0, 5}};
  EXPECT_THROW(Graph::from_edges(3, edges), Error);
  Graph g(2);
  EXPECT_THROW(g.degree(2), Error);
  EXPECT_THROW(g.neighbors(7), Error);
}

TEST(Partition, RelabelsDenselyByFirstAppearance) {
  const Partition p({7, 3, 7, 9});
  EXPECT_EQ(p.num_communities(), 3u);
  EXPECT_EQ(p[0], 0u);
  EXPECT_EQ(p[1], 1u);
  EXPECT_EQ(p[2], 0u);
  EXPECT_EQ(p[3], 2u);
  EXPECT_EQ(p.sizes(), (std::vector<std::size_t>{2, 1, 1}));
}

TEST(Partition, SingletonsAndSingleBlock) {
  EXPECT_EQ(Partition::singletons(5).num_communities(), 5u);
  EXPECT_EQ(Partition::single_block(5).num_communities(), 1u);
  EXPECT_EQ(Partition::single_block(0).num_communities(), 0u);
}

TEST(AttributeMap, ValidateChecksRangeAndSize) {
  AttributeMap a{{1, 2, 3}, 3};
  EXPECT_NO_THROW(a.validate(3));
  EXPECT_THROW(a.validate(4), Error);
  a.category[1] = 4;
  EXPECT_THROW(a.validate(3), Error);
  a.category[1] = 0;
  EXPECT_THROW(a.validate(3), Error);
}
