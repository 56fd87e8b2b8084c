#include "netrecon/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "netrecon/error.hpp"
#include "netrecon/random.hpp"

namespace netrecon {

void LfrParams::validate() const {
  if (n < 2) throw Error("LFR: n must be at least 2");
  if (!(k_avg > 0.0) || k_avg > static_cast<double>(k_max) || k_max >= n) {
    throw Error("LFR: need 0 < k_avg <= k_max < n");
  }
  if (k_avg < 2.0) throw Error("LFR: k_avg must be at least 2 (minimum degree)");
  if (c_min < 1 || c_min > c_max || c_max > n) throw Error("LFR: need 1 <= c_min <= c_max <= n");
  if (!(mu >= 0.0 && mu < 1.0)) throw Error("LFR: mu must be in [0, 1)");
  if (!(tau1 > 0.0) || !(tau2 >= 0.0)) throw Error("LFR: exponents must be positive");
}

namespace {

// Integral of x^s over [a, b].
double power_integral(double s, double a, double b) {
  if (std::abs(s + 1.0) < 1e-12) return std::log(b / a);
  return (std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0);
}

double power_law_mean(double tau, double a, double b) {
  return power_integral(1.0 - tau, a, b) / power_integral(-tau, a, b);
}

double sample_power_law(Rng& rng, double tau, double a, double b) {
  const double u = uniform01(rng);
  const double s = 1.0 - tau;
  if (std::abs(s) < 1e-12) return a * std::pow(b / a, u);
  const double as = std::pow(a, s);
  const double bs = std::pow(b, s);
  return std::pow(as + u * (bs - as), 1.0 / s);
}

// Lower cutoff of the continuous degree law such that its mean is k_avg.
double solve_degree_cutoff(const LfrParams& p) {
  const double hi_end = static_cast<double>(p.k_max) + 0.5;
  double lo = 1.5;
  double hi = hi_end - 1e-9;
  if (power_law_mean(p.tau1, hi, hi_end) < p.k_avg) {
    throw Error("LFR: k_avg " + std::to_string(p.k_avg) + " not reachable with k_max " +
                std::to_string(p.k_max));
  }
  if (power_law_mean(p.tau1, lo, hi_end) >= p.k_avg) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power_law_mean(p.tau1, mid, hi_end) < p.k_avg ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t randomized_round(Rng& rng, double x) {
  const double fl = std::floor(x);
  return static_cast<std::size_t>(fl) + (bernoulli(rng, x - fl) ? 1 : 0);
}

std::vector<std::size_t> sample_community_sizes(const LfrParams& p, Rng& rng) {
  const std::size_t min_count = (p.n + p.c_max - 1) / p.c_max;
  const std::size_t max_count = p.n / p.c_min;
  if (min_count > max_count) {
    throw Error("LFR: no number of communities with sizes in [" + std::to_string(p.c_min) + ", " +
                std::to_string(p.c_max) + "] sums to n=" + std::to_string(p.n));
  }
  std::vector<double> weights;
  for (std::size_t s = p.c_min; s <= p.c_max; ++s) {
    weights.push_back(std::pow(static_cast<double>(s), -p.tau2));
  }
  std::discrete_distribution<std::size_t> size_dist(weights.begin(), weights.end());

  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  while (total < p.n || sizes.size() < min_count) {
    sizes.push_back(p.c_min + size_dist(rng));
    total += sizes.back();
  }
  while (sizes.size() > max_count) {
    total -= sizes.back();
    sizes.pop_back();
  }

  // Balance the total to exactly n, one unit at a time, within the bounds.
  std::vector<std::size_t> eligible;
  while (total != p.n) {
    const bool grow = total < p.n;
    eligible.clear();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (grow ? sizes[i] < p.c_max : sizes[i] > p.c_min) eligible.push_back(i);
    }
    const std::size_t pick = eligible[uniform_index(rng, eligible.size())];
    if (grow) {
      ++sizes[pick];
      ++total;
    } else {
      --sizes[pick];
      --total;
    }
  }
  return sizes;
}

std::uint64_t edge_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class EdgeSet {
 public:
  bool contains(Vertex a, Vertex b) const { return keys_.count(edge_key(a, b)) != 0; }
  bool insert(Vertex a, Vertex b) { return keys_.insert(edge_key(a, b)).second; }
  void erase(Vertex a, Vertex b) { keys_.erase(edge_key(a, b)); }

 private:
  std::unordered_set<std::uint64_t> keys_;
};

// Degree-preserving double-edge swaps on edges[first..], keeping the graph simple.
template <typename Valid>
void randomize_edges(std::vector<Edge>& edges, std::size_t first, EdgeSet& set, Rng& rng,
                     std::size_t attempts, Valid valid) {
  const std::size_t count = edges.size() - first;
  if (count < 2) return;
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t i = first + uniform_index(rng, count);
    const std::size_t j = first + uniform_index(rng, count);
    if (i == j) continue;
    Edge e1 = edges[i];
    Edge e2 = edges[j];
    if (bernoulli(rng, 0.5)) std::swap(e2.u, e2.v);
    const Edge n1{e1.u, e2.v};
    const Edge n2{e2.u, e1.v};
    if (n1.u == n1.v || n2.u == n2.v || !valid(n1) || !valid(n2)) continue;
    if (set.contains(n1.u, n1.v) || set.contains(n2.u, n2.v) || edge_key(n1.u, n1.v) == edge_key(n2.u, n2.v)) {
      continue;
    }
    set.erase(e1.u, e1.v);
    set.erase(e2.u, e2.v);
    set.insert(n1.u, n1.v);
    set.insert(n2.u, n2.v);
    edges[i] = n1;
    edges[j] = n2;
  }
}

// Havel-Hakimi on one community with random tie-breaking. Stubs that cannot
// be realized are dropped.
void wire_internal(const std::vector<Vertex>& members, std::vector<std::size_t> residual,
                   std::vector<Edge>& edges, EdgeSet& set, Rng& rng) {
  const std::size_t s = members.size();
  std::vector<std::uint64_t> tiebreak(s);
  std::vector<std::size_t> order(s);
  while (true) {
    for (auto& t : tiebreak) t = rng();
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return residual[a] != residual[b] ? residual[a] > residual[b] : tiebreak[a] < tiebreak[b];
    });
    const std::size_t head = order[0];
    if (residual[head] == 0) break;
    std::size_t need = residual[head];
    residual[head] = 0;
    for (std::size_t k = 1; k < s && need > 0; ++k) {
      const std::size_t other = order[k];
      if (residual[other] == 0) break;
      --residual[other];
      --need;
      set.insert(members[head], members[other]);
      edges.push_back({members[head], members[other]});
    }
  }
}

}  // namespace

LfrNetwork generate_lfr_like(const LfrParams& params) {
  params.validate();
  Rng rng(params.seed);
  const std::size_t n = params.n;

  const double cutoff = solve_degree_cutoff(params);
  const double upper = static_cast<double>(params.k_max) + 0.5;
  std::vector<std::size_t> degree(n);
  double degree_sum = 0.0;
  for (auto& k : degree) {
    const double x = sample_power_law(rng, params.tau1, cutoff, upper);
    k = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(x)), 2, params.k_max);
    degree_sum += static_cast<double>(k);
  }

  const auto sizes = sample_community_sizes(params, rng);
  const std::size_t num_comms = sizes.size();

  // Place vertices in decreasing desired internal degree; each goes to a
  // random community with room in which its internal degree fits, or the
  // largest community with room otherwise.
  std::vector<Vertex> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::shuffle(by_degree.begin(), by_degree.end(), rng);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](Vertex a, Vertex b) { return degree[a] > degree[b]; });
  std::vector<std::size_t> free_slots(sizes);
  std::vector<std::uint32_t> community(n);
  std::vector<std::vector<Vertex>> members(num_comms);
  std::vector<std::size_t> candidates;
  for (Vertex v : by_degree) {
    const double want_internal = (1.0 - params.mu) * static_cast<double>(degree[v]);
    candidates.clear();
    std::size_t largest = num_comms;
    for (std::size_t c = 0; c < num_comms; ++c) {
      if (free_slots[c] == 0) continue;
      if (static_cast<double>(sizes[c] - 1) >= want_internal) candidates.push_back(c);
      if (largest == num_comms || sizes[c] > sizes[largest]) largest = c;
    }
    const std::size_t c = candidates.empty() ? largest : candidates[uniform_index(rng, candidates.size())];
    --free_slots[c];
    community[v] = static_cast<std::uint32_t>(c);
    members[c].push_back(v);
  }

  // Split each degree into internal and external stubs.
  std::vector<std::size_t> internal(n);
  std::vector<std::size_t> external(n);
  for (Vertex v = 0; v < n; ++v) {
    const std::size_t cap = sizes[community[v]] - 1;
    std::size_t in = randomized_round(rng, (1.0 - params.mu) * static_cast<double>(degree[v]));
    std::size_t out = degree[v] - std::min(in, degree[v]);
    if (in > cap) {
      in = cap;
      out = randomized_round(rng, params.mu / (1.0 - params.mu) * static_cast<double>(cap));
    }
    internal[v] = in;
    external[v] = out;
  }
  // Parity: internal stub counts must be even per community, external overall.
  for (std::size_t c = 0; c < num_comms; ++c) {
    std::size_t sum = 0;
    for (Vertex v : members[c]) sum += internal[v];
    if (sum % 2 == 0) continue;
    Vertex v = members[c][uniform_index(rng, members[c].size())];
    if (internal[v] > 0) {
      --internal[v];
      ++external[v];
    } else {
      ++internal[v];
      if (external[v] > 0) --external[v];
    }
  }
  std::size_t external_sum = std::accumulate(external.begin(), external.end(), std::size_t{0});
  if (external_sum % 2 == 1) {
    std::vector<Vertex> with_external;
    for (Vertex v = 0; v < n; ++v) {
      if (external[v] > 0) with_external.push_back(v);
    }
    --external[with_external[uniform_index(rng, with_external.size())]];
    --external_sum;
  }

  std::vector<Edge> edges;
  EdgeSet set;
  for (std::size_t c = 0; c < num_comms; ++c) {
    const std::size_t first = edges.size();
    std::vector<std::size_t> residual;
    residual.reserve(members[c].size());
    for (Vertex v : members[c]) residual.push_back(internal[v]);
    wire_internal(members[c], std::move(residual), edges, set, rng);
    randomize_edges(edges, first, set, rng, 10 * (edges.size() - first),
                    [](const Edge&) { return true; });
  }

  // External stubs: random matching across communities, bad pairs repaired
  // by swapping with an already placed external edge, dropped otherwise.
  std::vector<Vertex> stubs;
  stubs.reserve(external_sum);
  for (Vertex v = 0; v < n; ++v) stubs.insert(stubs.end(), external[v], v);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  const std::size_t first_external = edges.size();
  auto valid_cross = [&](Vertex a, Vertex b) {
    return a != b && community[a] != community[b] && !set.contains(a, b);
  };
  std::vector<Edge> bad;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const Vertex a = stubs[i];
    const Vertex b = stubs[i + 1];
    if (valid_cross(a, b)) {
      set.insert(a, b);
      edges.push_back({a, b});
    } else {
      bad.push_back({a, b});
    }
  }
  for (const Edge& e : bad) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const std::size_t placed = edges.size() - first_external;
      if (placed == 0) break;
      const std::size_t j = first_external + uniform_index(rng, placed);
      Edge other = edges[j];
      if (bernoulli(rng, 0.5)) std::swap(other.u, other.v);
      set.erase(other.u, other.v);
      if (valid_cross(e.u, other.u) && valid_cross(e.v, other.v) &&
          edge_key(e.u, other.u) != edge_key(e.v, other.v)) {
        set.insert(e.u, other.u);
        set.insert(e.v, other.v);
        edges[j] = {e.u, other.u};
        edges.push_back({e.v, other.v});
        break;
      }
      set.insert(other.u, other.v);
    }
  }
  randomize_edges(edges, first_external, set, rng, 10 * (edges.size() - first_external),
                  [&](const Edge& e) { return community[e.u] != community[e.v]; });

  LfrNetwork out;
  out.graph = Graph::from_edges(n, edges);
  out.communities = Partition(std::move(community));
  out.target_mean_degree = degree_sum / static_cast<double>(n);
  return out;
}

double realized_mixing(const Graph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) throw Error("partition size does not match graph");
  double sum = 0.0;
  std::size_t counted = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto nb = g.neighbors(v);
    if (nb.empty()) continue;
    std::size_t cross = 0;
    for (Vertex w : nb) cross += p[w] != p[v] ? 1 : 0;
    sum += static_cast<double>(cross) / static_cast<double>(nb.size());
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

CategoryDistribution::CategoryDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  if (p_.empty()) throw Error("category distribution needs at least one category");
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) throw Error("category probabilities must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error("category probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
  uniform_ = std::all_of(p_.begin(), p_.end(), [&](double x) { return x == p_.front(); });
  cumulative_.resize(p_.size() + 1, 0.0);
  for (std::size_t k = 0; k < p_.size(); ++k) cumulative_[k + 1] = cumulative_[k] + p_[k];
}

CategoryDistribution CategoryDistribution::uniform(Category g) {
  if (g < 1) throw Error("category count must be positive");
  return CategoryDistribution(std::vector<double>(static_cast<std::size_t>(g), 1.0 / g));
}

CategoryDistribution CategoryDistribution::normal(Category g) {
  if (g < 1) throw Error("category count must be positive");
  const double mean = (g + 1) / 2.0;
  const double sigma = g / 6.0;
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0))); };
  std::vector<double> p(static_cast<std::size_t>(g));
  double total = 0.0;
  for (Category k = 1; k <= g; ++k) {
    p[static_cast<std::size_t>(k - 1)] = cdf(k + 0.5) - cdf(k - 0.5);
    total += p[static_cast<std::size_t>(k - 1)];
  }
  for (double& x : p) x /= total;
  // Push the renormalization residue into the modal bin so the sum check holds.
  const double residue = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  p[static_cast<std::size_t>((g - 1) / 2)] += residue;
  return CategoryDistribution(std::move(p));
}

double CategoryDistribution::probability(Category k) const {
  if (k < 1 || k > g()) return 0.0;
  return p_[static_cast<std::size_t>(k - 1)];
}

double CategoryDistribution::mass(Category lo, Category hi) const {
  lo = std::max<Category>(lo, 1);
  hi = std::min<Category>(hi, g());
  if (lo > hi) return 0.0;
  if (uniform_) return static_cast<double>(hi - lo + 1) / static_cast<double>(g());
  // Summed directly for short ranges so single-category masses are exact.
  if (hi - lo < 64) {
    double s = 0.0;
    for (Category k = lo; k <= hi; ++k) s += p_[static_cast<std::size_t>(k - 1)];
    return s;
  }
  return cumulative_[static_cast<std::size_t>(hi)] - cumulative_[static_cast<std::size_t>(lo - 1)];
}

CategoryDistribution make_distribution(AttributeShape shape, Category g) {
  return shape == AttributeShape::uniform ? CategoryDistribution::uniform(g)
                                          : CategoryDistribution::normal(g);
}

AttributeMap assign_attributes(const Graph& g, const CategoryDistribution& dist, std::uint64_t seed) {
  Rng rng(seed);
  const auto p = dist.probabilities();
  std::discrete_distribution<Category> draw(p.begin(), p.end());
  AttributeMap a;
  a.g = dist.g();
  a.category.resize(g.num_vertices());
  for (auto& c : a.category) c = draw(rng) + 1;
  return a;
}

AttributeMap assign_distinct_attributes(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  AttributeMap a;
  a.g = static_cast<Category>(g.num_vertices());
  a.category.resize(g.num_vertices());
  std::iota(a.category.begin(), a.category.end(), 1);
  std::shuffle(a.category.begin(), a.category.end(), rng);
  return a;
}

std::int64_t edge_discrepancy(const Graph& g, const AttributeMap& a) {
  std::int64_t sum = 0;
  for (const Edge& e : g.edges()) sum += std::abs(a[e.u] - a[e.v]);
  return sum;
}

AttributeMap make_assortative(const Graph& g, AttributeMap a, std::size_t attempts,
                              std::uint64_t seed) {
  a.validate(g.num_vertices());
  const std::size_t n = g.num_vertices();
  if (n < 2) return a;
  Rng rng(seed);
  // Change in the discrepancy of v's edges if v took category `to`; the
  // edge to `partner` is unaffected by the swap and skipped.
  auto local_delta = [&](Vertex v, Category to, Vertex partner) {
    std::int64_t d = 0;
    for (Vertex w : g.neighbors(v)) {
      if (w == partner) continue;
      d += std::abs(to - a[w]) - std::abs(a[v] - a[w]);
    }
    return d;
  };
  for (std::size_t t = 0; t < attempts; ++t) {
    const auto u = static_cast<Vertex>(uniform_index(rng, n));
    const auto v = static_cast<Vertex>(uniform_index(rng, n));
    if (u == v || a[u] == a[v]) continue;
    const std::int64_t delta = local_delta(u, a[v], v) + local_delta(v, a[u], u);
    if (delta <= 0) std::swap(a.category[u], a.category[v]);
  }
  return a;
}

}  // namespace netrecon
