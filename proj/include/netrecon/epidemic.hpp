#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "netrecon/graph.hpp"
#include "netrecon/metrics.hpp"

namespace netrecon {

struct SirParams {
  double init_frac = 0.002;
  double beta = 0.08;
  std::uint32_t infectious_steps = 4;
  std::size_t runs = 200;
  std::uint64_t seed = 1;

  /// Throws unless 0 < init_frac <= 1, 0 <= beta <= 1, infectious_steps >= 1
  /// and runs >= 1.
  void validate() const;
};

inline constexpr std::uint32_t kNeverInfected = std::numeric_limits<std::uint32_t>::max();

/// Step at which each vertex was infected (0 for initial cases).
struct SirTrace {
  std::vector<std::uint32_t> infected_at;
  std::uint32_t last_step = 0;
};

/// max(1, round(init_frac * n)), capped by the number of susceptibles.
std::size_t initial_infected_count(std::size_t n, std::size_t immunized, const SirParams& params);

/// Discrete-time synchronous SIR. A vertex infected at step s transmits at
/// steps s+1 .. s+infectious_steps, each time to each susceptible neighbor
/// independently with probability beta. Returns the number ever infected.
/// Throws if every vertex is immunized or an immunized id is out of range.
std::size_t sir_run(const Graph& g, std::span<const Vertex> immunized, const SirParams& params,
                    std::uint64_t seed, SirTrace* trace = nullptr);

enum class StrategyKind { underlying_top, reconstructed_top, random_whole, reconstructed_frequency };

/// Degree and k_out rank descending; embeddedness ranks ascending.
struct StrategySpec {
  StrategyKind kind = StrategyKind::underlying_top;
  RankedProperty property = RankedProperty::degree;
  std::size_t budget = 0;
  std::size_t ensemble_size = 100;
};

/// One reconstruction with its detected partition and its mapping onto
/// underlying vertices.
struct EnsembleMember {
  Graph graph;
  Partition partition;
  Correspondence correspondence;
};

/// Underlying vertices to immunize, in rank order (random order for
/// random_whole). Reconstructed strategies consider only vertices seen in at
/// least one member; property ties go to the more frequent vertex, then the
/// smaller id; frequency ties are broken at random. Throws if the budget
/// exceeds the candidate pool or a reconstructed strategy gets no ensemble.
std::vector<Vertex> select_immunized(const StrategySpec& strategy, const Graph& underlying,
                                     const Partition& underlying_partition,
                                     std::span<const EnsembleMember> ensemble, std::uint64_t seed);

struct EpidemicSummary {
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single run.
  double stddev = 0.0;
  std::size_t runs = 0;
};

/// params.runs SIR runs with seeds derived from params.seed and the run
/// index, reduced in run order, so the result does not depend on `threads`.
EpidemicSummary evaluate_immunization(const Graph& g, std::span<const Vertex> immunized,
                                      const SirParams& params, std::size_t threads = 1);

}  // namespace netrecon
