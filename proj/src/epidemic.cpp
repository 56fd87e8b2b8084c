#include "netrecon/epidemic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "netrecon/error.hpp"
#include "netrecon/random.hpp"

namespace netrecon {

void SirParams::validate() const {
  if (!(init_frac > 0.0 && init_frac <= 1.0)) throw Error("init_frac must lie in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("beta must lie in [0, 1]");
  if (infectious_steps < 1) throw Error("infectious_steps must be at least 1");
  if (runs < 1) throw Error("runs must be at least 1");
}

std::size_t initial_infected_count(std::size_t n, std::size_t immunized, const SirParams& params) {
  const auto wanted = static_cast<std::size_t>(std::llround(params.init_frac * static_cast<double>(n)));
  return std::min(std::max<std::size_t>(1, wanted), n - immunized);
}

std::size_t sir_run(const Graph& g, std::span<const Vertex> immunized, const SirParams& params,
                    std::uint64_t seed, SirTrace* trace) {
  params.validate();
  const std::size_t n = g.num_vertices();
  std::vector<bool> blocked(n, false);
  std::size_t blocked_count = 0;
  for (Vertex v : immunized) {
    if (v >= n) throw Error("immunized vertex out of range");
    if (!blocked[v]) ++blocked_count;
    blocked[v] = true;
  }
  if (blocked_count == n) throw Error("every vertex is immunized");

  Rng rng(seed);
  std::vector<Vertex> susceptible;
  susceptible.reserve(n - blocked_count);
  for (Vertex v = 0; v < n; ++v) {
    if (!blocked[v]) susceptible.push_back(v);
  }
  const std::size_t initial = initial_infected_count(n, blocked_count, params);
  // Partial Fisher-Yates: the first `initial` entries are a uniform subset.
  for (std::size_t i = 0; i < initial; ++i) {
    std::swap(susceptible[i], susceptible[i + uniform_index(rng, susceptible.size() - i)]);
  }

  std::vector<std::uint32_t> infected_at(n, kNeverInfected);
  std::vector<Vertex> infectious(susceptible.begin(), susceptible.begin() + static_cast<std::ptrdiff_t>(initial));
  std::sort(infectious.begin(), infectious.end());
  for (Vertex v : infectious) infected_at[v] = 0;
  std::size_t total = initial;
  std::uint32_t step = 0;
  std::vector<Vertex> next;
  std::vector<Vertex> fresh;
  while (!infectious.empty()) {
    ++step;
    fresh.clear();
    for (Vertex v : infectious) {
      for (Vertex w : g.neighbors(v)) {
        if (blocked[w] || infected_at[w] != kNeverInfected) continue;
        if (bernoulli(rng, params.beta)) {
          infected_at[w] = step;
          fresh.push_back(w);
        }
      }
    }
    // Infectious set for the next step: still within their period, plus
    // this step's new cases. Kept sorted for a fixed transmission order.
    next.clear();
    for (Vertex v : infectious) {
      if (step - infected_at[v] < params.infectious_steps) next.push_back(v);
    }
    total += fresh.size();
    next.insert(next.end(), fresh.begin(), fresh.end());
    std::sort(next.begin(), next.end());
    infectious.swap(next);
  }
  if (trace != nullptr) {
    trace->infected_at = std::move(infected_at);
    trace->last_step = step;
  }
  return total;
}

namespace {

double property_value(const VertexProperties& p, RankedProperty property, Vertex v) {
  switch (property) {
    case RankedProperty::degree:
      return p.degree[v];
    case RankedProperty::k_out:
      return p.k_out[v];
    case RankedProperty::embeddedness:
      return -p.embeddedness[v];
  }
  return 0.0;
}

void check_budget(std::size_t budget, std::size_t pool) {
  if (budget > pool) throw Error("immunization budget exceeds the candidate pool");
}

}  // namespace

std::vector<Vertex> select_immunized(const StrategySpec& strategy, const Graph& underlying,
                                     const Partition& underlying_partition,
                                     std::span<const EnsembleMember> ensemble, std::uint64_t seed) {
  const std::size_t n = underlying.num_vertices();
  Rng rng(seed);

  if (strategy.kind == StrategyKind::random_whole) {
    check_budget(strategy.budget, n);
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < strategy.budget; ++i) {
      std::swap(all[i], all[i + uniform_index(rng, n - i)]);
    }
    all.resize(strategy.budget);
    return all;
  }

  if (strategy.kind == StrategyKind::underlying_top) {
    check_budget(strategy.budget, n);
    const auto props = vertex_properties(underlying, underlying_partition);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      return property_value(props, strategy.property, a) > property_value(props, strategy.property, b);
    });
    order.resize(strategy.budget);
    return order;
  }

  if (ensemble.empty()) throw Error("reconstructed strategies need a nonempty ensemble");
  std::vector<std::size_t> frequency(n, 0);
  std::vector<double> sum(n, 0.0);
  for (const auto& member : ensemble) {
    const auto props = vertex_properties(member.graph, member.partition);
    for (const auto& [u, local] : member.correspondence.pairs) {
      if (u >= n) throw Error("ensemble maps to a vertex outside the underlying network");
      ++frequency[u];
      sum[u] += property_value(props, strategy.property, local);
    }
  }
  std::vector<Vertex> pool;
  for (Vertex v = 0; v < n; ++v) {
    if (frequency[v] > 0) pool.push_back(v);
  }
  check_budget(strategy.budget, pool.size());

  if (strategy.kind == StrategyKind::reconstructed_top) {
    std::vector<double> mean(n, 0.0);
    for (Vertex v : pool) mean[v] = sum[v] / static_cast<double>(frequency[v]);
    std::stable_sort(pool.begin(), pool.end(), [&](Vertex a, Vertex b) {
      if (mean[a] != mean[b]) return mean[a] > mean[b];
      return frequency[a] > frequency[b];
    });
  } else {
    std::vector<std::uint64_t> tiebreak(n);
    for (Vertex v : pool) tiebreak[v] = rng();
    std::sort(pool.begin(), pool.end(), [&](Vertex a, Vertex b) {
      if (frequency[a] != frequency[b]) return frequency[a] > frequency[b];
      if (tiebreak[a] != tiebreak[b]) return tiebreak[a] < tiebreak[b];
      return a < b;
    });
  }
  pool.resize(strategy.budget);
  return pool;
}

EpidemicSummary evaluate_immunization(const Graph& g, std::span<const Vertex> immunized,
                                      const SirParams& params, std::size_t threads) {
  params.validate();
  std::vector<double> sizes(params.runs, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < params.runs; r = next++) {
      sizes[r] = static_cast<double>(sir_run(g, immunized, params, derive_seed(params.seed, "sir", "", r)));
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, params.runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  EpidemicSummary s;
  s.runs = params.runs;
  s.mean = std::accumulate(sizes.begin(), sizes.end(), 0.0) / static_cast<double>(s.runs);
  if (s.runs > 1) {
    double ss = 0.0;
    for (double x : sizes) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.runs - 1));
  }
  return s;
}

}  // namespace netrecon
