#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "netrecon/error.hpp"
#include "netrecon/graph.hpp"
#include "netrecon/netgen.hpp"
#include "netrecon/sampler.hpp"

namespace netrecon {

/// Probability that a random member of the population fits `d`.
/// Throws for an empty description (lo > hi).
double pr_description(const Description& d, const CategoryDistribution& dist);

struct CoalesceEvent {
  std::vector<OccId> first;
  std::vector<OccId> second;
  double probability = 0.0;
};

struct CoalesceLog {
  std::vector<CoalesceEvent> events;
};

/// Output of reconstruction. Reconstructed vertices are numbered in
/// ascending order of group id.
struct Reconstruction {
  Graph graph;
  /// Reconstructed vertex of each occurrence.
  std::vector<Vertex> provenance;
  /// Member occurrences of each reconstructed vertex, ascending.
  std::vector<std::vector<OccId>> members;
  /// Exact category (respondent groups) or intersected description.
  std::vector<Description> labels;
  std::vector<bool> has_respondent;
  CoalesceLog log;
  /// Bernoulli trials performed.
  std::uint64_t attempts = 0;
};

/// Raised when coalescing cannot reach the target size; carries the state
/// reached so far.
class ReconstructionIncomplete : public Error {
 public:
  ReconstructionIncomplete(const std::string& what, Reconstruction partial)
      : Error(what), partial_(std::move(partial)) {}

  const Reconstruction& partial() const noexcept { return partial_; }

 private:
  Reconstruction partial_;
};

/// Group id = id of the surviving occurrence: the respondent of a group that
/// has one, otherwise the smallest member id.
using GroupId = OccId;

/// Groups of coalesced occurrences and the edges between them.
class ReconState {
 public:
  ReconState(const SampleForest& forest, const CategoryDistribution& dist, std::size_t target_size);

  std::size_t size() const noexcept { return alive_count_; }
  std::size_t target_size() const noexcept { return target_; }
  std::size_t num_occurrences() const noexcept { return alive_.size(); }

  bool alive(GroupId g) const { return alive_.at(g); }
  bool is_respondent(GroupId g) const { return respondent_.at(g); }
  const Description& label(GroupId g) const { return label_.at(g); }
  std::span<const OccId> members(GroupId g) const { return members_.at(g); }
  std::span<const GroupId> neighbors(GroupId g) const { return adjacency_.at(g); }
  bool adjacent(GroupId a, GroupId b) const;
  bool share_respondent_neighbor(GroupId a, GroupId b) const;

  /// Probability that two live groups are the same individual:
  ///  - two respondents: 0
  ///  - respondent r, friend f: 0 if adjacent or r's category is outside f's
  ///    description, else min(1, 1 / (n_t Pr(d_f)))
  ///  - two friends: 0 if they share a respondent neighbor or their
  ///    descriptions are disjoint, else
  ///    min(1, Pr(d_u & d_v) / (n_t Pr(d_u) Pr(d_v)))
  /// Throws if u == v or either group is not alive.
  double pair_probability(GroupId u, GroupId v) const;

  /// Merges two groups and returns the survivor (the respondent group, or
  /// the smaller id for two friends). Throws if pair_probability(u, v) is 0.
  GroupId merge(GroupId u, GroupId v);

  Reconstruction snapshot() const;

 private:
  const CategoryDistribution* dist_;
  std::size_t target_;
  std::size_t alive_count_;
  std::vector<bool> alive_;
  std::vector<bool> respondent_;
  std::vector<Description> label_;
  std::vector<std::vector<OccId>> members_;
  std::vector<std::vector<GroupId>> adjacency_;  // sorted
};

struct ReconstructionOptions {
  std::size_t target_size = 0;
  std::uint64_t seed = 1;
  /// 0 selects 1000 x occurrence count.
  std::uint64_t max_attempts = 0;
};

/// Repeatedly draws a uniform pair among live pairs of positive probability
/// and merges it with that probability, until target_size groups remain.
/// Never reads underlying identities. Throws ReconstructionIncomplete when
/// attempts run out or no positive pair is left.
Reconstruction reconstruct(const SampleForest& forest, const CategoryDistribution& dist,
                           const ReconstructionOptions& options);

/// "group-id occ-id" per line, group ids being reconstructed vertex ids.
void write_provenance(std::ostream& out, const Reconstruction& r);
/// Reads provenance lines back into per-vertex member lists.
std::vector<std::vector<OccId>> read_provenance(std::istream& in);

/// CSV: event,first,second,probability; member lists joined with ';'.
void write_coalesce_log(std::ostream& out, const CoalesceLog& log);
CoalesceLog read_coalesce_log(std::istream& in);

}  // namespace netrecon
