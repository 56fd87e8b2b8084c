#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "netrecon/error.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/random.hpp"

using namespace netrecon;

namespace {

CoalesceEvent event(std::vector<OccId> a, std::vector<OccId> b) { return {std::move(a), std::move(b), 0.5}; }

// NMI from its definition with explicit probability tables.
double nmi_oracle(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  const double n = static_cast<double>(a.size());
  std::map<std::uint32_t, double> pa, pb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1 / n;
    pb[b[i]] += 1 / n;
    pab[{a[i], b[i]}] += 1 / n;
  }
  double ha = 0, hb = 0, mi = 0;
  for (auto [k, p] : pa) ha -= p * std::log(p);
  for (auto [k, p] : pb) hb -= p * std::log(p);
  for (auto [k, p] : pab) mi += p * std::log(p / (pa[k.first] * pb[k.second]));
  if (pa.size() == 1 && pb.size() == 1) return 1.0;
  if (pa.size() == 1 || pb.size() == 1) return 0.0;
  return mi / ((ha + hb) / 2);
}

// Spearman via O(n^2) rank counting and the Pearson formula.
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1) / 2;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST(CoalescingPrecision, HandFixture) {
  const SealedTruth truth{{2, 2, 23, 23, 31, 31, 27, 28}};
  CoalesceLog log;
  log.events = {event({0}, {1}), event({2}, {3}), event({4}, {5}), event({6}, {7})};
  EXPECT_EQ(coalescing_precision(log, truth), 0.75);
}

TEST(CoalescingPrecision, GroupEventsNeedOneVertexThroughout) {
  const SealedTruth truth{{1, 1, 1, 2}};
  CoalesceLog log;
  log.events = {event({0, 1}, {2}), event({0, 1, 2}, {3})};
  EXPECT_EQ(coalescing_precision(log, truth), 0.5);
  EXPECT_THROW(coalescing_precision(CoalesceLog{}, truth), Error);
}

TEST(CoalescingPrecision, RandomLogsMatchRecount) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    SealedTruth truth;
    for (int i = 0; i < 12; ++i) truth.vertex_of.push_back(static_cast<Vertex>(uniform_index(rng, 4)));
    CoalesceLog log;
    std::size_t correct = 0;
    for (int e = 0; e < 5; ++e) {
      const OccId a = static_cast<OccId>(uniform_index(rng, 12));
      const OccId b = static_cast<OccId>(uniform_index(rng, 12));
      log.events.push_back(event({a}, {b}));
      correct += truth.vertex_of[a] == truth.vertex_of[b];
    }
    EXPECT_DOUBLE_EQ(coalescing_precision(log, truth), static_cast<double>(correct) / 5.0);
  }
}

TEST(Projection, RespondentWinsElseMajority) {
  SampleForest forest;
  forest.num_trees = 1;
  const Description d{1, 1};
  forest.occurrences = {{0, OccKind::respondent, kNoParent, d}, {0, OccKind::friend_, 0, d},
                        {0, OccKind::friend_, 0, d},         {0, OccKind::friend_, 0, d},
                        {0, OccKind::friend_, 0, d},         {0, OccKind::friend_, 0, d}};
  const SealedTruth truth{{9, 4, 4, 9, 4, 9}};
  const std::vector<std::vector<OccId>> members{{0, 1, 2}, {3, 4}, {5}, {1, 2, 3}};
  const ProjectionMap p = project(members, forest, truth);
  EXPECT_EQ(p.underlying, (std::vector<Vertex>{9, 4, 9, 4}));
}

TEST(CommunityPrecision, HandExample) {
  // Reconstructed community {0,1,2,3}; projections 10, 11, 12, 10.
  // Pairs with different projections: (0,1),(0,2),(1,2),(1,3),(2,3) = 5.
  // Underlying communities: 10,11 together; 12 alone.
  const Partition recon({0, 0, 0, 0});
  std::vector<std::uint32_t> under(13, 5);
  under[12] = 6;
  const ProjectionMap proj{{10, 11, 12, 10}};
  EXPECT_DOUBLE_EQ(community_precision(recon, Partition(under), proj), 2.0 / 5.0);
}

TEST(CommunityPrecision, SixPairExample) {
  // Two reconstructed communities of sizes 3 and 2; one pair agrees in the
  // first, one in the second.
  const Partition recon({0, 0, 0, 1, 1, 1});
  const Partition under({0, 1, 2, 0, 1, 2, 3});
  const ProjectionMap proj{{0, 1, 3, 2, 6, 5}};
  // Community 0: projections 0,1,3 -> communities 0,1,0: one of three pairs.
  // Community 1: projections 2,6,5 -> communities 2,3,2: one of three pairs.
  EXPECT_DOUBLE_EQ(community_precision(recon, under, proj), 2.0 / 6.0);
}

TEST(CommunityPrecision, ErrorsWithoutPairs) {
  EXPECT_THROW(community_precision(Partition({0, 1}), Partition({0, 0}), ProjectionMap{{0, 1}}), Error);
  EXPECT_THROW(community_precision(Partition({0, 0}), Partition({0, 0}), ProjectionMap{{1, 1}}), Error);
}

TEST(Nmi, HandExamples) {
  const Partition a({0, 0, 1, 1});
  EXPECT_NEAR(nmi(a, Partition({5, 5, 7, 7})), 1.0, 1e-15);
  EXPECT_NEAR(nmi(a, Partition({0, 1, 0, 1})), 0.0, 1e-15);
  EXPECT_EQ(nmi(Partition::single_block(4), Partition::single_block(4)), 1.0);
  EXPECT_EQ(nmi(Partition::single_block(4), a), 0.0);
  EXPECT_THROW(nmi(a, Partition({0, 0, 1})), Error);
  EXPECT_THROW(nmi(Partition(), Partition()), Error);
}

TEST(Nmi, MatchesDefinitionOnRandomInstances) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 10);
    std::vector<std::uint32_t> a(n), b(n);
    for (auto& x : a) x = static_cast<std::uint32_t>(uniform_index(rng, 4));
    for (auto& x : b) x = static_cast<std::uint32_t>(uniform_index(rng, 4));
    const double got = nmi(Partition(a), Partition(b));
    EXPECT_NEAR(got, nmi_oracle(a, b), 1e-12);
    EXPECT_NEAR(got, nmi(Partition(b), Partition(a)), 1e-12);
  }
}

TEST(Spearman, ExtremesTiesAndErrors) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{10, 20, 30, 40, 50};
  const std::vector<double> down{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, up), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, down), -1.0, 1e-15);
  const std::vector<double> tied{1, 2, 2, 3};
  EXPECT_EQ(average_ranks(tied), (std::vector<double>{1, 2.5, 2.5, 4}));
  const std::vector<double> one{1};
  const std::vector<double> flat{2, 2, 2, 2, 2};
  EXPECT_THROW(spearman(one, one), Error);
  EXPECT_THROW(spearman(x, flat), Error);
  EXPECT_THROW(spearman(x, tied), Error);
}

TEST(Spearman, MatchesOracleAndIsMonotoneInvariant) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 5));
    for (auto& v : y) v = static_cast<double>(uniform_index(rng, 5));
    const bool flat_x = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    const bool flat_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (flat_x || flat_y) continue;
    const double got = spearman(x, y);
    EXPECT_NEAR(got, spearman_oracle(x, y), 1e-12);
    std::vector<double> cubed(n);
    for (std::size_t i = 0; i < n; ++i) cubed[i] = std::exp(x[i]) * 3 - 1;
    EXPECT_NEAR(spearman(cubed, y), got, 1e-12);
  }
}

TEST(VertexProperties, HandValuesAndIdentity) {
  // Vertex 0 has neighbors 1..5; 1,2,3 share its community.
  std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
  const Graph g = Graph::from_edges(7, edges);
  const Partition p({0, 0, 0, 0, 1, 1, 2});
  const VertexProperties vp = vertex_properties(g, p);
  EXPECT_EQ(vp.degree[0], 5.0);
  EXPECT_EQ(vp.k_out[0], 2.0);
  EXPECT_DOUBLE_EQ(vp.embeddedness[0], 0.6);
  EXPECT_EQ(vp.k_out[1], 0.0);
  EXPECT_EQ(vp.embeddedness[1], 1.0);
  EXPECT_EQ(vp.embeddedness[6], 1.0);

  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    std::vector<Edge> random_edges;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (uniform01(rng) < 0.4) random_edges.push_back({a, b});
    const Graph h = Graph::from_edges(n, random_edges);
    std::vector<std::uint32_t> labels(n);
    for (auto& l : labels) l = static_cast<std::uint32_t>(uniform_index(rng, 3));
    const Partition q(labels);
    const VertexProperties props = vertex_properties(h, q);
    for (Vertex v = 0; v < n; ++v) {
      std::size_t out = 0;
      for (Vertex w : h.neighbors(v)) out += q[w] != q[v];
      EXPECT_EQ(props.k_out[v], static_cast<double>(out));
      EXPECT_EQ(props.degree[v], props.k_out[v] + props.degree[v] * props.embeddedness[v]);
    }
  }
}

TEST(Correspondence, RepresentativesPreferRespondentsThenHits) {
  SampleForest forest;
  forest.num_trees = 1;
  const Description d{1, 1};
  forest.occurrences = {{0, OccKind::friend_, kNoParent, d}, {0, OccKind::friend_, kNoParent, d},
                        {0, OccKind::respondent, kNoParent, d}, {0, OccKind::friend_, 2, d},
                        {0, OccKind::friend_, 2, d}};
  const SealedTruth truth{{7, 7, 7, 3, 3}};
  // Group 0 has two hits on 7, group 1 holds the respondent of 7.
  // Groups 2 and 3 both project to 3 with one hit each.
  const std::vector<std::vector<OccId>> members{{0, 1}, {2}, {3}, {4}};
  const ProjectionMap proj = project(members, forest, truth);
  const Correspondence c = representatives(proj, members, forest, truth);
  EXPECT_EQ(c.pairs, (std::vector<std::pair<Vertex, Vertex>>{{3, 2}, {7, 1}}));
}

TEST(Correspondence, MatchAndAlignedMetrics) {
  const Correspondence a{{{1, 0}, {4, 1}, {6, 2}}};
  const Correspondence b{{{0, 3}, {4, 0}, {6, 1}}};
  EXPECT_EQ(match(a, b), (std::vector<std::pair<Vertex, Vertex>>{{1, 0}, {2, 1}}));
  EXPECT_EQ(identity_correspondence(3).pairs, (std::vector<std::pair<Vertex, Vertex>>{{0, 0}, {1, 1}, {2, 2}}));

  const std::vector<Vertex> keep{2, 0};
  EXPECT_EQ(restrict_partition(Partition({0, 1, 2}), keep), Partition({0, 1}));

  const Partition pa({0, 0, 1, 1});
  const Correspondence ca = identity_correspondence(4);
  const Partition pb({1, 1, 0, 0});
  EXPECT_NEAR(aligned_nmi(pa, ca, pb, ca), 1.0, 1e-15);

  VertexProperties va{{1, 2, 3, 4}, {0, 0, 0, 0}, {1, 1, 1, 1}};
  VertexProperties vb{{4, 3, 2, 1}, {0, 0, 0, 0}, {1, 1, 1, 1}};
  EXPECT_NEAR(rank_correlation(RankedProperty::degree, va, ca, vb, ca), -1.0, 1e-15);
  const Correspondence shifted{{{0, 3}, {1, 2}, {2, 1}, {3, 0}}};
  EXPECT_NEAR(rank_correlation(RankedProperty::degree, va, ca, vb, shifted), 1.0, 1e-15);
}
