#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netrecon/graph.hpp"

namespace netrecon {

/// Parameters of the LFR-like benchmark generator.
struct LfrParams {
  std::size_t n = 1000;
  double k_avg = 20.0;
  std::size_t k_max = 50;
  double mu = 0.1;
  double tau1 = 2.0;
  double tau2 = 1.0;
  std::size_t c_min = 20;
  std::size_t c_max = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LfrNetwork {
  Graph graph;
  Partition communities;
  /// Mean degree the degree sampler targeted before community capacity
  /// limits were applied.
  double target_mean_degree = 0.0;
};

/// Community-structured benchmark graph.
///
/// Community sizes are drawn from a power law with exponent tau2 on
/// [c_min, c_max] and balanced to sum to n. Degrees come from a power law
/// with exponent tau1 on [k_lo, k_max], where k_lo is solved so the mean is
/// k_avg. Vertices are placed into communities in decreasing degree order,
/// each degree is split into an internal part (1-mu)k and an external part
/// using randomized rounding, and an internal part that does not fit in the
/// community (more than size-1) is capped, with the external part scaled to
/// keep the vertex's mixing fraction. Internal stubs are wired per community
/// by Havel-Hakimi followed by degree-preserving swaps; external stubs by
/// random matching across communities with swap repair.
LfrNetwork generate_lfr_like(const LfrParams& params);

/// Mean over vertices with positive degree of (cross-community degree / degree).
double realized_mixing(const Graph& g, const Partition& p);

/// Probability of each category 1..g.
class CategoryDistribution {
 public:
  /// Takes probabilities for categories 1..g (index 0 is category 1).
  /// Throws if any is negative or the sum is not 1 within 1e-12.
  explicit CategoryDistribution(std::vector<double> probabilities);

  static CategoryDistribution uniform(Category g);
  /// Normal with mean (g+1)/2 and sigma g/6, integrated over unit bins,
  /// truncated to [1, g] and renormalized.
  static CategoryDistribution normal(Category g);

  Category g() const noexcept { return static_cast<Category>(p_.size()); }
  /// True when every category has the same probability. Masses are then
  /// computed as count / g so ratios of them are exact rationals.
  bool is_uniform() const noexcept { return uniform_; }
  double probability(Category k) const;
  /// Total probability of categories lo..hi inclusive (0 when lo > hi).
  double mass(Category lo, Category hi) const;
  std::span<const double> probabilities() const noexcept { return p_; }

 private:
  std::vector<double> p_;
  std::vector<double> cumulative_;  // cumulative_[k] = P(category <= k)
  bool uniform_ = false;
};

enum class AttributeShape { uniform, normal };

CategoryDistribution make_distribution(AttributeShape shape, Category g);

/// Independent category draw per vertex.
AttributeMap assign_attributes(const Graph& g, const CategoryDistribution& dist, std::uint64_t seed);

/// Random permutation of 1..n over the vertices, so every vertex has its own category.
AttributeMap assign_distinct_attributes(const Graph& g, std::uint64_t seed);

/// Sum over edges of |a_u - a_v|.
std::int64_t edge_discrepancy(const Graph& g, const AttributeMap& a);

/// Tries `attempts` swaps of the categories of two random vertices, keeping
/// each swap iff edge_discrepancy does not increase.
AttributeMap make_assortative(const Graph& g, AttributeMap a, std::size_t attempts,
                              std::uint64_t seed);

}  // namespace netrecon
