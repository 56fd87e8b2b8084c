#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "netrecon/community.hpp"
#include "netrecon/epidemic.hpp"
#include "netrecon/error.hpp"
#include "netrecon/random.hpp"

using namespace netrecon;

namespace {

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph::from_edges(n, edges);
}

// Preferential attachment with two links per new vertex.
Graph hub_graph(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
  std::vector<Vertex> ends{0, 1, 1, 2, 0, 2};
  for (Vertex v = 3; v < n; ++v) {
    std::set<Vertex> targets;
    while (targets.size() < 2) targets.insert(ends[uniform_index(rng, ends.size())]);
    for (Vertex t : targets) {
      edges.push_back({v, t});
      ends.push_back(v);
      ends.push_back(t);
    }
  }
  return Graph::from_edges(n, edges);
}

SirParams params(double beta, std::size_t runs = 1) {
  SirParams p;
  p.beta = beta;
  p.runs = runs;
  return p;
}

EnsembleMember identity_member(const Graph& g) {
  return {g, detect_communities(g), identity_correspondence(g.num_vertices())};
}

}  // namespace

TEST(Sir, InitialCount) {
  const SirParams p;
  EXPECT_EQ(initial_infected_count(1460, 0, p), 3u);
  EXPECT_EQ(initial_infected_count(10, 0, p), 1u);
  EXPECT_EQ(initial_infected_count(10, 10 - 1, p), 1u);
  SirParams all = p;
  all.init_frac = 1.0;
  EXPECT_EQ(initial_infected_count(10, 4, all), 6u);
}

TEST(Sir, TrivialDynamics) {
  SirParams p = params(0.5);
  p.init_frac = 0.1;
  EXPECT_EQ(sir_run(Graph(50), {}, p, 1), 5u);
  EXPECT_EQ(sir_run(path_graph(50), {}, params(0.0), 3), 1u);
  EXPECT_EQ(sir_run(path_graph(30), {}, params(1.0), 4), 30u);
}

TEST(Sir, TraceFollowsSynchronousSteps) {
  SirTrace trace;
  const Graph g = path_graph(10);
  sir_run(g, {}, params(1.0), 7, &trace);
  Vertex source = 0;
  for (Vertex v = 0; v < 10; ++v)
    if (trace.infected_at[v] == 0) source = v;
  for (Vertex v = 0; v < 10; ++v) {
    const std::uint32_t dist = v > source ? v - source : source - v;
    EXPECT_EQ(trace.infected_at[v], dist);
  }
  EXPECT_GE(trace.last_step, std::max<std::uint32_t>(source, 9 - source));
}

TEST(Sir, InfectiousPeriodLimitsTransmission) {
  // beta = 1 reaches each neighbor at the first opportunity; a vertex with
  // infectious period k has k chances per neighbor.
  SirParams p = params(1.0);
  p.infectious_steps = 1;
  EXPECT_EQ(sir_run(path_graph(12), {}, p, 5), 12u);
}

TEST(Sir, ImmunizedVerticesNeverInfected) {
  const Graph g = hub_graph(300, 2);
  std::vector<Vertex> immune{0, 1, 2, 10, 20};
  SirParams p = params(0.5);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SirTrace trace;
    const std::size_t size = sir_run(g, immune, p, seed, &trace);
    for (Vertex v : immune) EXPECT_EQ(trace.infected_at[v], kNeverInfected);
    EXPECT_GE(size, initial_infected_count(300, immune.size(), p));
    EXPECT_LE(size, 300u - immune.size());
    const auto infected =
        std::count_if(trace.infected_at.begin(), trace.infected_at.end(), [](auto s) { return s != kNeverInfected; });
    EXPECT_EQ(static_cast<std::size_t>(infected), size);
  }
}

TEST(Sir, PathImmunizationBlocksSpread) {
  // Immunizing the middle of a path confines the outbreak to one side.
  const Graph g = path_graph(21);
  const std::vector<Vertex> immune{10};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) EXPECT_EQ(sir_run(g, immune, params(1.0), seed), 10u);
}

TEST(Sir, DeterministicPerSeed) {
  const Graph g = hub_graph(300, 3);
  EXPECT_EQ(sir_run(g, {}, params(0.2), 11), sir_run(g, {}, params(0.2), 11));
}

TEST(Sir, Errors) {
  const Graph g = path_graph(3);
  const std::vector<Vertex> all{0, 1, 2};
  const std::vector<Vertex> bad{5};
  EXPECT_THROW(sir_run(g, all, params(0.1), 1), Error);
  EXPECT_THROW(sir_run(g, bad, params(0.1), 1), Error);
  EXPECT_THROW(sir_run(g, {}, params(1.5), 1), Error);
  SirParams zero_runs = params(0.1);
  zero_runs.runs = 0;
  EXPECT_THROW(zero_runs.validate(), Error);
}

TEST(Evaluate, MonotoneInBeta) {
  const Graph g = hub_graph(400, 4);
  double previous = 0.0;
  for (double beta : {0.02, 0.05, 0.1, 0.2}) {
    const EpidemicSummary s = evaluate_immunization(g, {}, params(beta, 500));
    EXPECT_GT(s.mean, previous);
    previous = s.mean;
  }
}

TEST(Evaluate, SingleRunAndThreadIndependence) {
  const Graph g = hub_graph(300, 5);
  const EpidemicSummary one = evaluate_immunization(g, {}, params(0.1, 1));
  EXPECT_EQ(one.stddev, 0.0);
  EXPECT_EQ(one.runs, 1u);
  const EpidemicSummary a = evaluate_immunization(g, {}, params(0.1, 60), 1);
  const EpidemicSummary b = evaluate_immunization(g, {}, params(0.1, 60), 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stddev, b.stddev);
}

TEST(Strategy, UnderlyingTopPicksHub) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < 9; ++v) edges.push_back({9, v});
  edges.push_back({0, 1});
  const Graph g = Graph::from_edges(10, edges);
  const Partition p = detect_communities(g);
  const auto chosen = select_immunized({StrategyKind::underlying_top, RankedProperty::degree, 1, 0}, g, p, {}, 1);
  EXPECT_EQ(chosen, (std::vector<Vertex>{9}));
  const auto two = select_immunized({StrategyKind::underlying_top, RankedProperty::degree, 3, 0}, g, p, {}, 1);
  EXPECT_EQ(two, (std::vector<Vertex>{9, 0, 1}));
}

TEST(Strategy, IdenticalEnsembleAgreesWithUnderlying) {
  const Graph g = hub_graph(200, 6);
  const Partition p = detect_communities(g);
  const std::vector<EnsembleMember> ensemble(3, identity_member(g));
  for (RankedProperty prop : {RankedProperty::degree, RankedProperty::k_out, RankedProperty::embeddedness}) {
    const auto direct = select_immunized({StrategyKind::underlying_top, prop, 10, 0}, g, p, {}, 1);
    const auto via = select_immunized({StrategyKind::reconstructed_top, prop, 10, 3}, g, p, ensemble, 1);
    EXPECT_EQ(direct, via);
  }
}

TEST(Strategy, FrequencyPrefersCommonVertices) {
  const Graph g = path_graph(6);
  const Graph local = path_graph(3);
  EnsembleMember a{local, Partition::single_block(3), Correspondence{{{0, 0}, {1, 1}, {2, 2}}}};
  EnsembleMember b{local, Partition::single_block(3), Correspondence{{{2, 0}, {3, 1}, {4, 2}}}};
  EnsembleMember c{local, Partition::single_block(3), Correspondence{{{2, 0}, {4, 1}, {5, 2}}}};
  const std::vector<EnsembleMember> ens{a, b, c};
  const auto chosen = select_immunized({StrategyKind::reconstructed_frequency, RankedProperty::degree, 2, 3}, g,
                                       Partition::single_block(6), ens, 3);
  ASSERT_EQ(chosen.size(), 2u);
  EXPECT_EQ(chosen[0], 2u);  // seen three times
  EXPECT_EQ(chosen[1], 4u);  // seen twice
  EXPECT_THROW(select_immunized({StrategyKind::reconstructed_frequency, RankedProperty::degree, 7, 3}, g,
                                Partition::single_block(6), ens, 3),
               Error);
  EXPECT_THROW(select_immunized({StrategyKind::reconstructed_top, RankedProperty::degree, 1, 3}, g,
                                Partition::single_block(6), {}, 3),
               Error);
}

TEST(Strategy, RandomWholeHasBudgetSizeDistinctVertices) {
  const Graph g = hub_graph(1000, 7);
  const std::size_t budget = 10;  // 1% of n
  const auto chosen =
      select_immunized({StrategyKind::random_whole, RankedProperty::degree, budget, 0}, g, Partition::single_block(1000), {}, 4);
  EXPECT_EQ(chosen.size(), budget);
  EXPECT_EQ(std::set<Vertex>(chosen.begin(), chosen.end()).size(), budget);
}

TEST(Strategy, DegreeTargetingBeatsRandom) {
  const Graph g = hub_graph(1000, 8);
  const Partition p = detect_communities(g);
  const std::size_t budget = 50;
  const auto top = select_immunized({StrategyKind::underlying_top, RankedProperty::degree, budget, 0}, g, p, {}, 1);
  const auto rnd = select_immunized({StrategyKind::random_whole, RankedProperty::degree, budget, 0}, g, p, {}, 1);
  const SirParams sp = params(0.15, 200);
  EXPECT_LT(evaluate_immunization(g, top, sp).mean, evaluate_immunization(g, rnd, sp).mean);
}
