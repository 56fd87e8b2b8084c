#include "netrecon/community.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "netrecon/error.hpp"
#include "netrecon/random.hpp"

namespace netrecon {
namespace {

// Weighted multigraph used across aggregation levels.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
  std::vector<double> self;      // self-loop weight, counted once per loop
  std::vector<double> strength;  // sum of incident weights, self-loops twice

  std::size_t size() const { return adj.size(); }
};

LevelGraph level_from(const Graph& g) {
  LevelGraph lg;
  const std::size_t n = g.num_vertices();
  lg.adj.resize(n);
  lg.self.assign(n, 0.0);
  lg.strength.assign(n, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) lg.adj[v].push_back({w, 1.0});
    lg.strength[v] = static_cast<double>(g.degree(v));
  }
  return lg;
}

// Single-vertex moves until none improves. Returns the number of moves.
std::size_t local_moves(const LevelGraph& lg, std::vector<std::uint32_t>& comm, double resolution,
                        Rng& rng) {
  const std::size_t n = lg.size();
  const double two_m = std::accumulate(lg.strength.begin(), lg.strength.end(), 0.0);
  if (two_m <= 0.0) return 0;
  std::vector<double> tot(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    tot[comm[i]] += lg.strength[i];
    ++members[comm[i]];
  }
  std::vector<std::uint32_t> empty;
  for (std::uint32_t c = 0; c < n; ++c) {
    if (members[c] == 0) empty.push_back(c);
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  std::size_t total_moves = 0;
  constexpr double kEps = 1e-12;

  for (int pass = 0; pass < 1000; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t moves = 0;
    for (std::uint32_t i : order) {
      const std::uint32_t old = comm[i];
      const double ki = lg.strength[i];
      touched.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[old] -= ki;
      if (--members[old] == 0) empty.push_back(old);

      const double scale = resolution * ki / two_m;
      std::uint32_t best = old;
      double best_gain = link[old] - scale * tot[old];
      for (std::uint32_t c : touched) {
        const double gain = link[c] - scale * tot[c];
        if (c != old && gain > best_gain + kEps) {
          best = c;
          best_gain = gain;
        }
      }
      // Every option costs modularity: stand alone instead.
      if (best_gain < -kEps) best = empty.back();
      // An empty target is always the most recently emptied community.
      if (members[best] == 0) empty.pop_back();
      tot[best] += ki;
      ++members[best];
      comm[i] = best;
      if (best != old) ++moves;
      for (std::uint32_t c : touched) link[c] = 0.0;
    }
    total_moves += moves;
    if (moves == 0) break;
  }
  return total_moves;
}

// Renumbers community labels to 0..k-1; returns k.
std::uint32_t compact(std::vector<std::uint32_t>& comm) {
  std::map<std::uint32_t, std::uint32_t> dense;
  for (auto& c : comm) {
    auto [it, inserted] = dense.try_emplace(c, static_cast<std::uint32_t>(dense.size()));
    c = it->second;
  }
  return static_cast<std::uint32_t>(dense.size());
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::uint32_t k) {
  LevelGraph out;
  out.adj.resize(k);
  out.self.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  std::vector<std::map<std::uint32_t, double>> acc(k);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const std::uint32_t ci = comm[i];
    out.strength[ci] += lg.strength[i];
    out.self[ci] += lg.self[i];
    for (const auto& [j, w] : lg.adj[i]) {
      const std::uint32_t cj = comm[j];
      if (ci == cj) {
        out.self[ci] += w / 2.0;  // seen from both endpoints
      } else {
        acc[ci][cj] += w;
      }
    }
  }
  for (std::uint32_t c = 0; c < k; ++c) out.adj[c].assign(acc[c].begin(), acc[c].end());
  return out;
}

// Splits each community into the connected pieces of its induced subgraph.
std::vector<std::uint32_t> split_disconnected(const Graph& g, const std::vector<std::uint32_t>& comm) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> out(n, std::numeric_limits<std::uint32_t>::max());
  std::uint32_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (out[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    out[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (comm[w] == comm[v] && out[w] == std::numeric_limits<std::uint32_t>::max()) {
          out[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return out;
}

std::map<std::string, Detector>& registry() {
  static std::map<std::string, Detector> detectors{{"greedy-modularity", greedy_modularity}};
  return detectors;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_detector(const std::string& name, Detector detector) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(detector);
}

std::vector<std::string> detector_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

Partition detect_communities(const Graph& g, const DetectorConfig& cfg) {
  if (!(cfg.resolution > 0.0)) throw Error("resolution must be positive");
  Detector detector;
  {
    std::lock_guard lock(registry_mutex());
    const auto it = registry().find(cfg.method);
    if (it == registry().end()) throw Error("unknown community detector '" + cfg.method + "'");
    detector = it->second;
  }
  return detector(g, cfg);
}

Partition greedy_modularity(const Graph& g, const DetectorConfig& cfg) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw Error("community detection needs a nonempty graph");
  Rng rng(cfg.seed);
  std::vector<std::uint32_t> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0);
  if (g.num_edges() == 0) return Partition(std::move(assignment));

  LevelGraph level = level_from(g);
  while (true) {
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0);
    const std::size_t moves = local_moves(level, comm, cfg.resolution, rng);
    const std::uint32_t k = compact(comm);
    for (auto& a : assignment) a = comm[a];
    if (moves == 0 || k == level.size()) break;
    level = aggregate(level, comm, k);
  }

  // Polish on the original graph, alternating with splitting disconnected
  // communities, until no single vertex move helps.
  const LevelGraph base = level_from(g);
  for (int round = 0; round < 100; ++round) {
    assignment = split_disconnected(g, assignment);
    if (local_moves(base, assignment, cfg.resolution, rng) == 0) break;
  }
  return Partition(split_disconnected(g, assignment));
}

double modularity(const Graph& g, const Partition& p, double resolution) {
  if (p.size() != g.num_vertices()) throw Error("partition size does not match graph");
  const double m = static_cast<double>(g.num_edges());
  if (m == 0.0) throw Error("modularity is undefined for a graph without edges");
  std::vector<double> internal(p.num_communities(), 0.0);
  std::vector<double> degree(p.num_communities(), 0.0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    degree[p[v]] += static_cast<double>(g.degree(v));
    for (Vertex w : g.neighbors(v)) {
      if (v < w && p[v] == p[w]) internal[p[v]] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    const double frac = degree[c] / (2.0 * m);
    q += internal[c] / m - resolution * frac * frac;
  }
  return q;
}

}  // namespace netrecon
