#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "netrecon/graph.hpp"
#include "netrecon/reconstruct.hpp"
#include "netrecon/sampler.hpp"

namespace netrecon {

/// Fraction of merge events whose two groups all belong to one underlying
/// vertex. Throws on an empty log.
double coalescing_precision(const CoalesceLog& log, const SealedTruth& truth);

/// Underlying vertex attributed to each reconstructed vertex: the
/// respondent's vertex for groups containing one, otherwise the most common
/// vertex among members (ties to the smallest id).
struct ProjectionMap {
  std::vector<Vertex> underlying;
};

ProjectionMap project(std::span<const std::vector<OccId>> members, const SampleForest& forest,
                      const SealedTruth& truth);

/// Among reconstructed pairs in the same community whose projections
/// differ, the fraction whose projections share an underlying community.
/// Throws when there is no such pair.
double community_precision(const Partition& reconstructed, const Partition& underlying,
                           const ProjectionMap& projection);

/// Normalized mutual information I(X;Y) / ((H(X)+H(Y))/2), natural logs.
/// 1 when both partitions are a single block, 0 when exactly one is.
double nmi(const Partition& a, const Partition& b);

/// Average ranks (1-based, ties share the mean of their positions).
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws for fewer than two items
/// or a constant list.
double spearman(std::span<const double> x, std::span<const double> y);

struct VertexProperties {
  std::vector<double> degree;
  std::vector<double> k_out;
  /// (degree - k_out) / degree; 1 for isolated vertices.
  std::vector<double> embeddedness;
};

VertexProperties vertex_properties(const Graph& g, const Partition& p);

/// Pairs (underlying vertex, local vertex) sorted by underlying id, each
/// underlying id at most once. Relates a reconstructed or true network to
/// the underlying one.
struct Correspondence {
  std::vector<std::pair<Vertex, Vertex>> pairs;
};

/// One reconstructed vertex per projected underlying vertex: respondent
/// groups first, then the group with the most members of that vertex, then
/// the smallest id.
Correspondence representatives(const ProjectionMap& projection,
                               std::span<const std::vector<OccId>> members, const SampleForest& forest,
                               const SealedTruth& truth);

Correspondence correspondence(const TrueNetwork& tn);

/// Underlying vertices 0..n-1 mapped to themselves.
Correspondence identity_correspondence(std::size_t n);

/// Local vertex pairs (in a, in b) for underlying vertices present in both.
std::vector<std::pair<Vertex, Vertex>> match(const Correspondence& a, const Correspondence& b);

/// Partition of the listed vertices, in list order.
Partition restrict_partition(const Partition& p, std::span<const Vertex> vertices);

/// NMI of two partitions over the underlying vertices both sides cover.
double aligned_nmi(const Partition& a, const Correspondence& ca, const Partition& b,
                   const Correspondence& cb);

enum class RankedProperty { degree, k_out, embeddedness };

/// Spearman correlation of one property between two networks over their
/// common underlying vertices.
double rank_correlation(RankedProperty property, const VertexProperties& a, const Correspondence& ca,
                        const VertexProperties& b, const Correspondence& cb);

}  // namespace netrecon
