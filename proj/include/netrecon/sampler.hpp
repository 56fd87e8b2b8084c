#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "netrecon/graph.hpp"

namespace netrecon {

/// Closed interval of categories [lo, hi].
struct Description {
  Category lo = 1;
  Category hi = 1;

  static Description exact(Category c) { return {c, c}; }

  bool contains(Category c) const noexcept { return lo <= c && c <= hi; }
  Category width() const noexcept { return hi - lo + 1; }
  std::optional<Description> intersect(const Description& other) const noexcept {
    const Description d{std::max(lo, other.lo), std::min(hi, other.hi)};
    if (d.lo > d.hi) return std::nullopt;
    return d;
  }

  friend bool operator==(const Description&, const Description&) = default;
};

using OccId = std::uint32_t;
inline constexpr OccId kNoParent = std::numeric_limits<OccId>::max();

enum class OccKind : std::uint8_t { respondent, friend_ };

/// One node of a sample tree. A respondent's label is its exact category
/// (lo == hi); a friend's label is the description its respondent gave.
struct Occurrence {
  std::uint32_t tree = 0;
  OccKind kind = OccKind::respondent;
  OccId parent = kNoParent;
  Description label;

  bool is_respondent() const noexcept { return kind == OccKind::respondent; }
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

/// The observable part of a sample: occurrence ids are indices into
/// `occurrences`. Carries no underlying vertex ids.
struct SampleForest {
  std::vector<Occurrence> occurrences;
  std::size_t num_trees = 0;

  std::size_t size() const noexcept { return occurrences.size(); }
  std::size_t num_respondents() const noexcept;
  std::size_t num_friends() const noexcept { return size() - num_respondents(); }

  friend bool operator==(const SampleForest&, const SampleForest&) = default;
};

/// Ground truth for evaluation only: the underlying vertex of each occurrence.
struct SealedTruth {
  std::vector<Vertex> vertex_of;

  friend bool operator==(const SealedTruth&, const SealedTruth&) = default;
};

struct Sample {
  SampleForest forest;
  SealedTruth truth;
};

enum class PathMethod { random, high_degree };

struct PathSample {
  std::vector<std::vector<Vertex>> paths;
  /// Set when high-degree seeding ran out of degree >= 5 vertices and fell
  /// back to unrestricted seeds.
  bool seed_fallback = false;

  std::size_t total() const noexcept;
};

/// Vertex-disjoint respondent paths with exactly `respondents` vertices in
/// total. Random method: seeds and successors uniform. High-degree method:
/// seeds uniform over unused vertices of degree >= 5, successor is the
/// highest-degree unused neighbor (ties uniform).
PathSample sample_paths(const Graph& g, PathMethod method, std::size_t respondents,
                        std::uint64_t seed);

/// Turns paths into sample trees: each respondent names a uniform random
/// subset of min(max_friends, degree) neighbors, each described by a
/// uniformly placed window of min(width, g) categories containing its true
/// category.
Sample elicit_friends(const Graph& g, const AttributeMap& a, const PathSample& paths,
                      std::size_t max_friends, Category width, std::uint64_t seed);

struct SampleSpec {
  PathMethod method = PathMethod::random;
  std::size_t max_friends = 5;
  Category width = 1;
};

/// Both phases with seeds derived from `seed`.
Sample draw_sample(const Graph& g, const AttributeMap& a, const SampleSpec& spec,
                   std::size_t respondents, std::uint64_t seed);

/// Smallest respondent budget whose sample covers at least `target` distinct
/// underlying vertices (or all of n_r = n), and that sample. The covered count
/// is nondecreasing in the budget for a fixed seed, so this is a bisection.
struct SizedSample {
  Sample sample;
  std::size_t respondents = 0;
  std::size_t true_size = 0;
};
SizedSample draw_sample_for_true_size(const Graph& g, const AttributeMap& a, const SampleSpec& spec,
                                      std::size_t target, std::uint64_t seed);

/// Sample trees with duplicates merged using the sealed truth.
struct TrueNetwork {
  Graph graph;
  /// Underlying vertex of each true-network vertex, ascending.
  std::vector<Vertex> underlying;
  /// True-network vertex of each occurrence.
  std::vector<Vertex> vertex_of_occurrence;
};
TrueNetwork true_network(const SampleForest& forest, const SealedTruth& truth);

/// Number of distinct underlying vertices in a sample.
std::size_t distinct_vertices(const SealedTruth& truth);

/// "tree-id occ-id kind parent-occ-id payload" per line, kind R or F, parent
/// -1 for roots, payload the exact category (R) or "lo..hi" (F).
void write_forest(std::ostream& out, const SampleForest& forest);
SampleForest read_forest(std::istream& in);

/// "occ-id vertex" per line.
void write_truth(std::ostream& out, const SealedTruth& truth);
SealedTruth read_truth(std::istream& in);

}  // namespace netrecon
