#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "netrecon/metrics.hpp"
#include "netrecon/netgen.hpp"
#include "netrecon/random.hpp"
#include "netrecon/reconstruct.hpp"
#include "netrecon/sampler.hpp"

using namespace netrecon;

namespace {

Occurrence respondent(std::uint32_t tree, OccId parent, Category c) {
  return {tree, OccKind::respondent, parent, Description::exact(c)};
}

Occurrence friend_of(std::uint32_t tree, OccId parent, Description d) {
  return {tree, OccKind::friend_, parent, d};
}

// Two single-respondent trees, each with one friend, plus `padding`
// isolated respondents so the target size can be large.
SampleForest two_friend_forest(Description a, Description b, std::size_t padding) {
  SampleForest f;
  f.occurrences = {respondent(0, kNoParent, 1), friend_of(0, 0, a), respondent(1, kNoParent, 2),
                   friend_of(1, 2, b)};
  f.num_trees = 2;
  for (std::size_t i = 0; i < padding; ++i) {
    f.occurrences.push_back(respondent(static_cast<std::uint32_t>(f.num_trees), kNoParent, 5));
    ++f.num_trees;
  }
  return f;
}

// Checks the group invariants: members partition the occurrences, at most
// one respondent per group, nonempty labels, simple symmetric adjacency.
void expect_state_invariants(const ReconState& s) {
  std::vector<int> covered(s.num_occurrences(), 0);
  std::size_t alive = 0;
  for (GroupId gid = 0; gid < s.num_occurrences(); ++gid) {
    if (!s.alive(gid)) continue;
    ++alive;
    const auto members = s.members(gid);
    ASSERT_FALSE(members.empty());
    EXPECT_TRUE(std::is_sorted(members.begin(), members.end()));
    EXPECT_TRUE(std::binary_search(members.begin(), members.end(), gid));
    if (!s.is_respondent(gid)) EXPECT_EQ(members.front(), gid);
    for (OccId o : members) ++covered[o];
    EXPECT_LE(s.label(gid).lo, s.label(gid).hi);
    const auto nb = s.neighbors(gid);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_NE(nb[i], gid);
      EXPECT_TRUE(s.alive(nb[i]));
      if (i > 0) EXPECT_LT(nb[i - 1], nb[i]);
      EXPECT_TRUE(s.adjacent(nb[i], gid));
    }
  }
  EXPECT_EQ(alive, s.size());
  for (int c : covered) EXPECT_EQ(c, 1);
}

struct SampledCase {
  LfrNetwork net;
  AttributeMap attrs;
  Sample sample;
};

SampledCase sampled_case(std::uint64_t seed, Category g, Category width, std::size_t respondents) {
  SampledCase c{generate_lfr_like(LfrParams{200, 8.0, 16, 0.2, 2.0, 1.0, 20, 40, seed}), {}, {}};
  c.attrs = g == 0 ? assign_distinct_attributes(c.net.graph, seed + 1)
                   : assign_attributes(c.net.graph, CategoryDistribution::uniform(g), seed + 1);
  c.sample = draw_sample(c.net.graph, c.attrs, SampleSpec{PathMethod::random, 5, width}, respondents, seed + 2);
  return c;
}

}  // namespace

TEST(PrDescription, UniformWindow) {
  const auto dist = CategoryDistribution::uniform(50);
  EXPECT_EQ(pr_description({34, 36}, dist), 3.0 / 50.0);
  EXPECT_DOUBLE_EQ(pr_description({1, 50}, dist), 1.0);
  EXPECT_THROW(pr_description({5, 4}, dist), Error);
}

TEST(PrDescription, ZeroSupport) {
  const CategoryDistribution dist({1.0, 0.0, 0.0});
  EXPECT_EQ(pr_description({2, 3}, dist), 0.0);
}

TEST(PairProbability, WorkedExampleIsExact) {
  const auto dist = CategoryDistribution::uniform(50);
  const SampleForest f = two_friend_forest({33, 34}, {34, 36}, 8);
  for (std::size_t nt : {9u, 10u, 12u}) {
    const ReconState s(f, dist, nt);
    EXPECT_EQ(s.pair_probability(1, 3), 50.0 / (6.0 * static_cast<double>(nt)));
    EXPECT_EQ(s.pair_probability(3, 1), s.pair_probability(1, 3));
  }
  const ReconState small(two_friend_forest({33, 34}, {34, 36}, 0), dist, 4);
  EXPECT_EQ(small.pair_probability(1, 3), 1.0);
}

TEST(PairProbability, ZeroRules) {
  const auto dist = CategoryDistribution::uniform(50);
  SampleForest f;
  f.occurrences = {respondent(0, kNoParent, 10), friend_of(0, 0, {11, 12}), respondent(1, kNoParent, 20),
                   friend_of(1, 2, {9, 11}),     friend_of(1, 2, {10, 10}), friend_of(0, 0, {40, 41})};
  f.num_trees = 2;
  const ReconState s(f, dist, 4);
  EXPECT_EQ(s.pair_probability(0, 2), 0.0);  // two respondents
  EXPECT_EQ(s.pair_probability(0, 1), 0.0);  // adjacent and category outside
  EXPECT_EQ(s.pair_probability(2, 1), 0.0);  // category 20 outside 11..12
  EXPECT_GT(s.pair_probability(0, 3), 0.0);  // 10 in 9..11
  EXPECT_EQ(s.pair_probability(3, 4), 0.0);  // friends of the same respondent
  EXPECT_EQ(s.pair_probability(1, 4), 0.0);  // disjoint descriptions
  EXPECT_GT(s.pair_probability(1, 3), 0.0);  // overlap at 11
  EXPECT_THROW(s.pair_probability(1, 1), Error);
  EXPECT_THROW(ReconState(f, dist, 7), Error);
}

TEST(PairProbability, RespondentFriendValue) {
  const auto dist = CategoryDistribution::uniform(50);
  SampleForest f = two_friend_forest({33, 34}, {34, 36}, 10);
  const ReconState s(f, dist, 12);
  // Respondent 2 has category 2; friend 1 is 33..34, so zero. Use padding.
  EXPECT_EQ(s.pair_probability(2, 1), 0.0);
  SampleForest g = f;
  g.occurrences[1].label = {1, 4};
  const ReconState t(g, dist, 14);
  EXPECT_EQ(t.pair_probability(2, 1), 50.0 / (14.0 * 4.0));
}

TEST(PairProbability, NonUniformDistribution) {
  std::vector<double> p(10, 0.05);
  p[0] = 0.55;
  const CategoryDistribution dist(p);
  const SampleForest f = two_friend_forest({1, 2}, {2, 3}, 20);
  const ReconState s(f, dist, 20);
  const double expected = 0.05 / (20.0 * 0.6 * 0.1);
  EXPECT_NEAR(s.pair_probability(1, 3), std::min(1.0, expected), 1e-15);
}

TEST(ReconState, MergeRules) {
  const auto dist = CategoryDistribution::uniform(50);
  SampleForest f;
  f.occurrences = {respondent(0, kNoParent, 10), friend_of(0, 0, {11, 13}), respondent(1, kNoParent, 12),
                   friend_of(1, 2, {9, 11}), friend_of(1, 2, {12, 14})};
  f.num_trees = 2;
  ReconState s(f, dist, 2);
  // Friends 1 and 3 intersect in {11}.
  EXPECT_EQ(s.merge(3, 1), 1u);
  EXPECT_EQ(s.label(1), (Description{11, 11}));
  EXPECT_FALSE(s.alive(3));
  EXPECT_TRUE(s.adjacent(1, 0));
  EXPECT_TRUE(s.adjacent(1, 2));
  expect_state_invariants(s);
  // The merged friend now neighbors both respondents.
  EXPECT_EQ(s.pair_probability(1, 4), 0.0);
  // Respondent 2 absorbs friend 1? It is adjacent, so that is ruled out.
  EXPECT_EQ(s.pair_probability(2, 1), 0.0);
  EXPECT_THROW(s.merge(2, 1), Error);
  // Respondent 0 (category 10) is not in 12..14.
  EXPECT_EQ(s.pair_probability(0, 4), 0.0);
}

TEST(ReconState, RespondentSurvivesMerge) {
  const auto dist = CategoryDistribution::uniform(50);
  SampleForest f;
  f.occurrences = {respondent(0, kNoParent, 10), friend_of(0, 0, {20, 21}), respondent(1, kNoParent, 20)};
  f.num_trees = 2;
  ReconState s(f, dist, 2);
  EXPECT_EQ(s.merge(1, 2), 2u);
  EXPECT_TRUE(s.is_respondent(2));
  EXPECT_EQ(s.label(2), Description::exact(20));
  EXPECT_TRUE(s.adjacent(0, 2));
  expect_state_invariants(s);
}

TEST(ReconState, SymmetryAndInvariantsAlongRandomMerges) {
  const SampledCase c = sampled_case(5, 8, 2, 15);
  const auto dist = CategoryDistribution::uniform(8);
  ReconState s(c.sample.forest, dist, 1);
  Rng rng(3);
  for (int step = 0; step < 25; ++step) {
    std::vector<std::pair<GroupId, GroupId>> positive;
    for (GroupId u = 0; u < s.num_occurrences(); ++u) {
      if (!s.alive(u)) continue;
      for (GroupId v = u + 1; v < s.num_occurrences(); ++v) {
        if (!s.alive(v)) continue;
        const double p = s.pair_probability(u, v);
        EXPECT_EQ(p, s.pair_probability(v, u));
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        if (p > 0) positive.emplace_back(u, v);
      }
    }
    if (positive.empty()) break;
    const auto [u, v] = positive[uniform_index(rng, positive.size())];
    s.merge(u, v);
    expect_state_invariants(s);
  }
}

TEST(Reconstruct, PerfectInformationGivesPerfectPrecision) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SampledCase c = sampled_case(seed, 0, 1, 16);
    const TrueNetwork tn = true_network(c.sample.forest, c.sample.truth);
    const auto dist = CategoryDistribution::uniform(200);
    const Reconstruction r = reconstruct(c.sample.forest, dist, {tn.graph.num_vertices(), seed, 0});
    EXPECT_EQ(r.graph.num_vertices(), tn.graph.num_vertices());
    if (!r.log.events.empty()) EXPECT_EQ(coalescing_precision(r.log, c.sample.truth), 1.0);
    // Every reconstructed vertex is one true vertex, so the edge sets agree.
    for (const Edge& e : r.graph.edges()) {
      const Vertex a = tn.vertex_of_occurrence[r.members[e.u].front()];
      const Vertex b = tn.vertex_of_occurrence[r.members[e.v].front()];
      EXPECT_TRUE(tn.graph.has_edge(a, b));
    }
  }
}

TEST(Reconstruct, TargetEqualToOccurrencesMergesNothing) {
  const SampledCase c = sampled_case(2, 10, 1, 10);
  const Reconstruction r =
      reconstruct(c.sample.forest, CategoryDistribution::uniform(10), {c.sample.forest.size(), 1, 0});
  EXPECT_TRUE(r.log.events.empty());
  EXPECT_EQ(r.graph.num_vertices(), c.sample.forest.size());
  std::size_t tree_edges = 0;
  for (const auto& occ : c.sample.forest.occurrences) tree_edges += occ.parent != kNoParent;
  EXPECT_EQ(r.graph.num_edges(), tree_edges);
}

TEST(Reconstruct, LogCountMatchesSizeReductionAndProvenanceIsConsistent) {
  const SampledCase c = sampled_case(3, 40, 1, 20);
  const TrueNetwork tn = true_network(c.sample.forest, c.sample.truth);
  const Reconstruction r =
      reconstruct(c.sample.forest, CategoryDistribution::uniform(40), {tn.graph.num_vertices(), 4, 0});
  EXPECT_EQ(r.log.events.size(), c.sample.forest.size() - r.graph.num_vertices());
  ASSERT_EQ(r.provenance.size(), c.sample.forest.size());
  for (Vertex v = 0; v < r.members.size(); ++v) {
    for (OccId o : r.members[v]) EXPECT_EQ(r.provenance[o], v);
    EXPECT_TRUE(std::is_sorted(r.members[v].begin(), r.members[v].end()));
    std::size_t respondents = 0;
    for (OccId o : r.members[v]) respondents += c.sample.forest.occurrences[o].is_respondent();
    EXPECT_LE(respondents, 1u);
    EXPECT_EQ(r.has_respondent[v], respondents == 1);
  }
  EXPECT_GE(r.attempts, r.log.events.size());
}

TEST(Reconstruct, Deterministic) {
  const SampledCase c = sampled_case(4, 30, 2, 20);
  const auto dist = CategoryDistribution::uniform(30);
  const TrueNetwork tn = true_network(c.sample.forest, c.sample.truth);
  const Reconstruction a = reconstruct(c.sample.forest, dist, {tn.graph.num_vertices(), 9, 0});
  const Reconstruction b = reconstruct(c.sample.forest, dist, {tn.graph.num_vertices(), 9, 0});
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.provenance, b.provenance);
  EXPECT_EQ(a.attempts, b.attempts);
}

TEST(Reconstruct, ImpossibleTargetThrowsWithPartialState) {
  // Two respondents can never be merged.
  SampleForest f;
  f.occurrences = {respondent(0, kNoParent, 1), respondent(1, kNoParent, 1)};
  f.num_trees = 2;
  try {
    reconstruct(f, CategoryDistribution::uniform(2), {1, 1, 0});
    FAIL() << "expected ReconstructionIncomplete";
  } catch (const ReconstructionIncomplete& e) {
    EXPECT_EQ(e.partial().graph.num_vertices(), 2u);
    EXPECT_TRUE(e.partial().log.events.empty());
  }
}

TEST(ReconstructIo, ProvenanceAndLogRoundTrip) {
  const SampledCase c = sampled_case(7, 20, 1, 15);
  const auto dist = CategoryDistribution::uniform(20);
  const TrueNetwork tn = true_network(c.sample.forest, c.sample.truth);
  const Reconstruction r = reconstruct(c.sample.forest, dist, {tn.graph.num_vertices(), 3, 0});
  std::stringstream pbuf, lbuf;
  write_provenance(pbuf, r);
  write_coalesce_log(lbuf, r.log);
  EXPECT_EQ(read_provenance(pbuf), r.members);
  const CoalesceLog back = read_coalesce_log(lbuf);
  ASSERT_EQ(back.events.size(), r.log.events.size());
  for (std::size_t i = 0; i < back.events.size(); ++i) {
    EXPECT_EQ(back.events[i].first, r.log.events[i].first);
    EXPECT_EQ(back.events[i].second, r.log.events[i].second);
    EXPECT_EQ(back.events[i].probability, r.log.events[i].probability);
  }
}
