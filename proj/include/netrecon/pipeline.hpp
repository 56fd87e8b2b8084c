#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netrecon/config.hpp"
#include "netrecon/epidemic.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/netgen.hpp"
#include "netrecon/reconstruct.hpp"
#include "netrecon/sampler.hpp"

namespace netrecon {

/// One combination of sweep-axis values.
struct SweepPoint {
  double mu = 0.1;
  /// 0 stands for the underlying vertex count.
  std::size_t g = 0;
  AttributeShape distribution = AttributeShape::uniform;
  bool assortative = false;
  PathMethod method = PathMethod::random;
  std::size_t f = 5;
  Category c = 1;
  double nt_fraction = 0.08;
};

/// Cartesian product of the sweep axes, mu varying slowest.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

struct Underlying {
  Graph graph;
  /// Generator communities; absent for a loaded network.
  std::optional<Partition> ground_truth;
};

struct SampledData {
  Sample sample;
  std::size_t respondents = 0;
  TrueNetwork true_net;
  std::size_t n_t = 0;
};

/// Builds every per-repetition artifact. Each stage seeds itself from the
/// master seed, the stage name, the parameters that stage depends on, and
/// the repetition index, so results do not depend on sweep order or
/// scheduling.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  const ExperimentConfig& config() const noexcept { return cfg_; }

  Underlying network(const SweepPoint& p, std::size_t rep) const;
  /// Vertex count of the underlying network.
  std::size_t underlying_size() const noexcept;
  Category categories(const SweepPoint& p, std::size_t n) const;
  CategoryDistribution distribution(const SweepPoint& p, std::size_t n) const;
  AttributeMap attributes(const Graph& g, const SweepPoint& p, std::size_t rep) const;
  SampledData sample(const Graph& g, const AttributeMap& a, const SweepPoint& p, std::size_t rep) const;
  Reconstruction reconstruct(const SampleForest& forest, const CategoryDistribution& dist,
                             std::size_t n_t, const SweepPoint& p, std::size_t rep) const;
  /// `role` names the network ("underlying", "true", "reconstructed").
  Partition detect(const Graph& g, const std::string& role, const SweepPoint& p, std::size_t rep) const;

  std::string network_key(const SweepPoint& p) const;
  std::string attribute_key(const SweepPoint& p) const;
  std::string sample_key(const SweepPoint& p) const;
  std::string full_key(const SweepPoint& p) const;

 private:
  ExperimentConfig cfg_;
  std::optional<Graph> loaded_;
  std::string network_name_;
};

struct RankValue {
  RankedProperty property = RankedProperty::degree;
  /// "reconstructed" or "true".
  std::string network;
  std::optional<double> spearman;
  std::string status = "ok";
};

/// Metrics of one repetition at one sweep point. Optional values are absent
/// when a stage or metric failed; the matching status says why.
struct ReplicateResult {
  std::size_t n = 0;
  std::size_t respondents = 0;
  std::size_t occurrences = 0;
  std::size_t true_size = 0;
  std::size_t n_t = 0;
  std::size_t merges = 0;
  std::uint64_t attempts = 0;
  std::optional<double> coalescing_precision;
  std::optional<double> community_precision;
  std::optional<double> nmi;
  std::size_t reconstructed_communities = 0;
  std::size_t true_communities = 0;
  std::vector<RankValue> ranks;
  std::string precision_status = "ok";
  std::string community_status = "ok";
};

ReplicateResult run_replicate(const Experiment& ex, const SweepPoint& p, std::size_t rep);

struct EpidemicResult {
  StrategyChoice strategy;
  double budget_fraction = 0.0;
  std::size_t budget = 0;
  std::size_t ensemble_built = 0;
  std::optional<EpidemicSummary> summary;
  std::string status = "ok";
};

/// Immunization comparison at one sweep point on the repetition-0 network,
/// with an ensemble of cfg.ensemble independent samples and reconstructions.
std::vector<EpidemicResult> run_epidemic(const Experiment& ex, const SweepPoint& p, std::size_t jobs);

/// Same on a given network and attribute labeling.
std::vector<EpidemicResult> run_epidemic_on(const Experiment& ex, const SweepPoint& p, const Graph& g,
                                            const AttributeMap& a, std::size_t jobs);

/// Runs fn(0..count-1) on up to `jobs` threads. fn must not throw.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Writes precision.csv, community.csv, rank.csv and epidemic.csv (as
/// enabled) into cfg.out. Rows are ordered by sweep point, then repetition.
void run_pipeline(const ExperimentConfig& cfg, std::size_t jobs = 1);

/// Stage names accepted by run_stage.
const std::vector<std::string>& stage_names();

/// Runs one stage on the files in `dir`, using the first sweep point and
/// repetition `rep`. Throws Error naming the missing or malformed file.
void run_stage(const ExperimentConfig& cfg, const std::string& stage, const std::filesystem::path& dir,
               std::size_t rep = 0, std::size_t jobs = 1);

/// Writes the vertex count as a "# vertices N" comment before the edges so
/// isolated vertices survive a round trip.
void save_graph(const std::filesystem::path& path, const Graph& g);
Graph load_graph(const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

}  // namespace netrecon
