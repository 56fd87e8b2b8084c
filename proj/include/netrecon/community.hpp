#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "netrecon/graph.hpp"

namespace netrecon {

struct DetectorConfig {
  /// Key into the detector registry.
  std::string method = "greedy-modularity";
  double resolution = 1.0;
  std::uint64_t seed = 1;
};

using Detector = std::function<Partition(const Graph&, const DetectorConfig&)>;

/// Adds or replaces a detector under `name`.
void register_detector(const std::string& name, Detector detector);
std::vector<std::string> detector_names();

/// Runs the detector named by cfg.method. Isolated vertices come back as
/// singletons and no community spans two connected components.
Partition detect_communities(const Graph& g, const DetectorConfig& cfg = {});

/// Multi-level greedy modularity optimization: local vertex moves with
/// aggregation, a final round of single-vertex moves on the original graph,
/// then disconnected communities are split into their connected parts.
Partition greedy_modularity(const Graph& g, const DetectorConfig& cfg);

/// Newman-Girvan modularity sum_c (e_c/m - resolution (d_c/2m)^2).
/// Throws when the graph has no edges.
double modularity(const Graph& g, const Partition& p, double resolution = 1.0);

}  // namespace netrecon
