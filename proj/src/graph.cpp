#include "netrecon/graph.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "netrecon/error.hpp"

namespace netrecon {

Graph::Graph(std::size_t n) : offsets_(n + 1, 0) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, EdgeDropCounts* dropped) {
  EdgeDropCounts counts;
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                  std::to_string(e.v) + ") with n=" + std::to_string(n));
    }
    if (e.u == e.v) {
      ++counts.self_loops;
      continue;
    }
    canon.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  const auto last = std::unique(canon.begin(), canon.end());
  counts.duplicates = static_cast<std::size_t>(canon.end() - last);
  canon.erase(last, canon.end());

  Graph g(n);
  for (const Edge& e : canon) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.resize(2 * canon.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : canon) {
    g.targets_[fill[e.u]++] = e.v;
    g.targets_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  if (dropped != nullptr) *dropped = counts;
  return g;
}

void Graph::check_vertex(Vertex v) const {
  if (v >= num_vertices()) {
    throw Error("vertex " + std::to_string(v) + " out of range (n=" +
                std::to_string(num_vertices()) + ")");
  }
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  check_vertex(v);
  return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(Vertex v) const {
  check_vertex(v);
  return offsets_[v + 1] - offsets_[v];
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  // Search the shorter list.
  if (degree(u) > degree(v)) std::swap(u, v);
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(num_vertices());
  for (Vertex v = 0; v < num_vertices(); ++v) out[v] = offsets_[v + 1] - offsets_[v];
  return out;
}

void AttributeMap::validate(std::size_t n) const {
  if (g < 1) throw Error("category count must be positive");
  if (category.size() != n) {
    throw Error("attribute map covers " + std::to_string(category.size()) + " vertices, graph has " +
                std::to_string(n));
  }
  for (std::size_t v = 0; v < category.size(); ++v) {
    if (category[v] < 1 || category[v] > g) {
      throw Error("vertex " + std::to_string(v) + " has category " + std::to_string(category[v]) +
                  " outside [1, " + std::to_string(g) + "]");
    }
  }
}

Partition::Partition(std::vector<std::uint32_t> labels) : labels_(std::move(labels)) {
  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  for (auto& label : labels_) {
    auto [it, inserted] = dense.try_emplace(label, static_cast<std::uint32_t>(dense.size()));
    label = it->second;
  }
  count_ = dense.size();
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i);
  return Partition(std::move(labels));
}

Partition Partition::single_block(std::size_t n) {
  return Partition(std::vector<std::uint32_t>(n, 0));
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out(count_, 0);
  for (auto c : labels_) ++out[c];
  return out;
}

}  // namespace netrecon
