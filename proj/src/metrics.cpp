#include "netrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "netrecon/error.hpp"

namespace netrecon {

double coalescing_precision(const CoalesceLog& log, const SealedTruth& truth) {
  if (log.events.empty()) throw Error("coalescing precision is undefined without merges");
  std::size_t correct = 0;
  for (const auto& e : log.events) {
    const Vertex id = truth.vertex_of.at(e.first.at(0));
    auto same = [&](OccId o) { return truth.vertex_of.at(o) == id; };
    if (std::all_of(e.first.begin(), e.first.end(), same) &&
        std::all_of(e.second.begin(), e.second.end(), same)) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(log.events.size());
}

ProjectionMap project(std::span<const std::vector<OccId>> members, const SampleForest& forest,
                      const SealedTruth& truth) {
  ProjectionMap out;
  out.underlying.reserve(members.size());
  std::map<Vertex, std::size_t> counts;
  for (const auto& group : members) {
    if (group.empty()) throw Error("reconstructed vertex without members");
    const auto resp = std::find_if(group.begin(), group.end(),
                                   [&](OccId o) { return forest.occurrences.at(o).is_respondent(); });
    if (resp != group.end()) {
      out.underlying.push_back(truth.vertex_of.at(*resp));
      continue;
    }
    counts.clear();
    for (OccId o : group) ++counts[truth.vertex_of.at(o)];
    // std::map iterates ascending, so the first maximum is the smallest id.
    Vertex best = counts.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [v, c] : counts) {
      if (c > best_count) {
        best = v;
        best_count = c;
      }
    }
    out.underlying.push_back(best);
  }
  return out;
}

double community_precision(const Partition& reconstructed, const Partition& underlying,
                           const ProjectionMap& projection) {
  if (projection.underlying.size() != reconstructed.size()) {
    throw Error("projection does not cover the reconstructed partition");
  }
  std::vector<std::vector<Vertex>> communities(reconstructed.num_communities());
  for (Vertex v = 0; v < reconstructed.size(); ++v) communities[reconstructed[v]].push_back(v);
  std::size_t pairs = 0;
  std::size_t agree = 0;
  for (const auto& c : communities) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        const Vertex a = projection.underlying[c[i]];
        const Vertex b = projection.underlying[c[j]];
        if (a == b) continue;
        ++pairs;
        if (underlying[a] == underlying[b]) ++agree;
      }
    }
  }
  if (pairs == 0) throw Error("community precision is undefined: no co-membered pairs");
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw Error("nmi needs partitions of the same element set");
  if (a.size() == 0) throw Error("nmi of empty partitions");
  const double n = static_cast<double>(a.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
  for (Vertex v = 0; v < a.size(); ++v) ++joint[{a[v], b[v]}];
  auto entropy = [&](const Partition& p) {
    double h = 0.0;
    for (std::size_t s : p.sizes()) {
      const double q = static_cast<double>(s) / n;
      h -= q * std::log(q);
    }
    return h;
  };
  const double ha = entropy(a);
  const double hb = entropy(b);
  const bool a_flat = a.num_communities() == 1;
  const bool b_flat = b.num_communities() == 1;
  if (a_flat && b_flat) return 1.0;
  if (a_flat || b_flat) return 0.0;
  const auto sa = a.sizes();
  const auto sb = b.sizes();
  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    const double pij = static_cast<double>(count) / n;
    mi += pij * std::log(pij * n * n / (static_cast<double>(sa[key.first]) * static_cast<double>(sb[key.second])));
  }
  return std::clamp(mi / ((ha + hb) / 2.0), 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman needs lists of equal length");
  if (x.size() < 2) throw Error("spearman needs at least two items");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("spearman is undefined for a constant list");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

VertexProperties vertex_properties(const Graph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) throw Error("partition size does not match graph");
  VertexProperties out;
  const std::size_t n = g.num_vertices();
  out.degree.resize(n);
  out.k_out.resize(n);
  out.embeddedness.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    std::size_t outside = 0;
    for (Vertex w : g.neighbors(v)) outside += p[w] != p[v] ? 1 : 0;
    const std::size_t d = g.degree(v);
    out.degree[v] = static_cast<double>(d);
    out.k_out[v] = static_cast<double>(outside);
    out.embeddedness[v] = d == 0 ? 1.0 : static_cast<double>(d - outside) / static_cast<double>(d);
  }
  return out;
}

Correspondence representatives(const ProjectionMap& projection,
                               std::span<const std::vector<OccId>> members, const SampleForest& forest,
                               const SealedTruth& truth) {
  if (members.size() != projection.underlying.size()) {
    throw Error("projection does not match the reconstructed vertices");
  }
  struct Best {
    Vertex local;
    bool respondent;
    std::size_t hits;
  };
  std::map<Vertex, Best> best;
  for (Vertex r = 0; r < projection.underlying.size(); ++r) {
    const Vertex u = projection.underlying[r];
    std::size_t hits = 0;
    bool respondent = false;
    for (OccId o : members[r]) {
      hits += truth.vertex_of.at(o) == u ? 1 : 0;
      respondent = respondent || forest.occurrences.at(o).is_respondent();
    }
    const Best candidate{r, respondent, hits};
    auto [it, inserted] = best.try_emplace(u, candidate);
    if (inserted) continue;
    const Best& cur = it->second;
    // Later candidates have larger ids, so equality keeps the current one.
    if (std::pair(candidate.respondent, candidate.hits) > std::pair(cur.respondent, cur.hits)) {
      it->second = candidate;
    }
  }
  Correspondence out;
  for (const auto& [u, b] : best) out.pairs.push_back({u, b.local});
  return out;
}

Correspondence correspondence(const TrueNetwork& tn) {
  Correspondence out;
  for (Vertex i = 0; i < tn.underlying.size(); ++i) out.pairs.push_back({tn.underlying[i], i});
  return out;
}

Correspondence identity_correspondence(std::size_t n) {
  Correspondence out;
  out.pairs.reserve(n);
  for (Vertex v = 0; v < n; ++v) out.pairs.push_back({v, v});
  return out;
}

std::vector<std::pair<Vertex, Vertex>> match(const Correspondence& a, const Correspondence& b) {
  std::vector<std::pair<Vertex, Vertex>> out;
  auto i = a.pairs.begin();
  auto j = b.pairs.begin();
  while (i != a.pairs.end() && j != b.pairs.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      out.push_back({i->second, j->second});
      ++i;
      ++j;
    }
  }
  return out;
}

Partition restrict_partition(const Partition& p, std::span<const Vertex> vertices) {
  std::vector<std::uint32_t> labels;
  labels.reserve(vertices.size());
  for (Vertex v : vertices) labels.push_back(p[v]);
  return Partition(std::move(labels));
}

double aligned_nmi(const Partition& a, const Correspondence& ca, const Partition& b,
                   const Correspondence& cb) {
  const auto pairs = match(ca, cb);
  std::vector<Vertex> la;
  std::vector<Vertex> lb;
  for (const auto& [x, y] : pairs) {
    la.push_back(x);
    lb.push_back(y);
  }
  return nmi(restrict_partition(a, la), restrict_partition(b, lb));
}

double rank_correlation(RankedProperty property, const VertexProperties& a, const Correspondence& ca,
                        const VertexProperties& b, const Correspondence& cb) {
  auto pick = [&](const VertexProperties& p) -> const std::vector<double>& {
    switch (property) {
      case RankedProperty::degree:
        return p.degree;
      case RankedProperty::k_out:
        return p.k_out;
      case RankedProperty::embeddedness:
        return p.embeddedness;
    }
    return p.degree;
  };
  const auto& va = pick(a);
  const auto& vb = pick(b);
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [i, j] : match(ca, cb)) {
    x.push_back(va.at(i));
    y.push_back(vb.at(j));
  }
  return spearman(x, y);
}

}  // namespace netrecon
