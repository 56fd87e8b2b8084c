#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "netrecon/error.hpp"
#include "netrecon/io.hpp"

using namespace netrecon;

TEST(EdgeListIo, ReadsSimpleList) {
  std::istringstream in("0 1\n1 2\n");
  const LoadedGraph lg = read_edge_list(in);
  EXPECT_EQ(lg.graph.num_vertices(), 3u);
  EXPECT_EQ(lg.graph.num_edges(), 2u);
}

TEST(EdgeListIo, CompactsLabelsAndCountsDrops) {
  std::istringstream in("# comment\n10 30\n\n30 10\n20 20\n30 20\n");
  const LoadedGraph lg = read_edge_list(in);
  EXPECT_EQ(lg.labels, (std::vector<std::int64_t>{10, 20, 30}));
  EXPECT_EQ(lg.graph.num_edges(), 2u);
  EXPECT_EQ(lg.dropped.duplicates, 1u);
  EXPECT_EQ(lg.dropped.self_loops, 1u);
  EXPECT_TRUE(lg.graph.has_edge(0, 2));
  EXPECT_TRUE(lg.graph.has_edge(1, 2));
}

TEST(EdgeListIo, ParseErrorReportsLine) {
  std::istringstream in("0 1\n1 x\n");
  try {
    read_edge_list(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream three("0 1 2\n");
  EXPECT_THROW(read_edge_list(three), ParseError);
}

TEST(EdgeListIo, EmptyInputIsAnError) {
  std::istringstream in("# nothing\n\n");
  EXPECT_THROW(read_edge_list(in), ParseError);
}

TEST(EdgeListIo, DenseRoundTripKeepsIsolatedVertices) {
  const std::vector<Edge> edges{{0, 3}, {1, 3}};
  const Graph g = Graph::from_edges(6, edges);
  std::stringstream buf;
  write_edge_list(buf, g);
  const Graph back = read_edge_list(buf, 6);
  EXPECT_EQ(back, g);
  std::istringstream bad("0 6\n");
  EXPECT_THROW(read_edge_list(bad, 6), ParseError);
}

TEST(AttributeIo, RoundTripAndInference) {
  const AttributeMap a{{3, 1, 2, 3}, 5};
  std::stringstream buf;
  write_attributes(buf, a);
  const AttributeMap back = read_attributes(buf, 5);
  EXPECT_EQ(back.category, a.category);
  EXPECT_EQ(back.g, 5);
  std::istringstream inferred("0 2\n1 7\n");
  EXPECT_EQ(read_attributes(inferred).g, 7);
}

TEST(AttributeIo, RejectsMissingOrRepeatedVertices) {
  std::istringstream repeated("0 1\n0 2\n");
  EXPECT_THROW(read_attributes(repeated), ParseError);
  std::istringstream gap("0 1\n2 2\n");
  EXPECT_THROW(read_attributes(gap), ParseError);
}

TEST(PartitionIo, RoundTrip) {
  const Partition p({0, 1, 1, 2, 0});
  std::stringstream buf;
  write_partition(buf, p);
  EXPECT_EQ(read_partition(buf), p);
}

TEST(FileIo, MissingFileNamesPath) {
  try {
    open_input("/nonexistent/dir/graph.txt");
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/graph.txt"), std::string::npos);
  }
}
