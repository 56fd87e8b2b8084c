#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace netrecon {

using Vertex = std::uint32_t;
using Category = std::int32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct EdgeDropCounts {
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;
};

/// Immutable simple undirected graph over vertices 0..n-1, stored as sorted
/// neighbor lists in compressed-row form.
class Graph {
 public:
  Graph() = default;

  /// Edgeless graph on `n` vertices.
  explicit Graph(std::size_t n);

  /// Builds a graph from an arbitrary edge list. Self-loops and repeated
  /// edges (in either orientation) are dropped and, if `dropped` is given,
  /// counted there. Throws if an endpoint is >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          EdgeDropCounts* dropped = nullptr);

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const;

  /// Every edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  std::vector<std::size_t> degrees() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check_vertex(Vertex v) const;

  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
};

/// Category label per vertex, each in [1, g].
struct AttributeMap {
  std::vector<Category> category;
  Category g = 1;

  std::size_t size() const noexcept { return category.size(); }
  Category operator[](Vertex v) const { return category[v]; }

  /// Throws unless every label lies in [1, g] and the size matches `n`.
  void validate(std::size_t n) const;
};

/// Disjoint community assignment. Labels are kept dense: 0..k-1 in order of
/// first appearance, so every community is nonempty.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::uint32_t> labels);

  static Partition singletons(std::size_t n);
  static Partition single_block(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_communities() const noexcept { return count_; }
  std::uint32_t operator[](Vertex v) const { return labels_[v]; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }

  /// Community sizes indexed by label.
  std::vector<std::size_t> sizes() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t count_ = 0;
};

}  // namespace netrecon
