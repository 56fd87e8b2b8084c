#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "netrecon/epidemic.hpp"
#include "netrecon/netgen.hpp"
#include "netrecon/sampler.hpp"

namespace netrecon {

enum class NetworkSource { synthetic, file };

/// How the reconstruction target n_t is set once a sample is drawn.
enum class NtRule { true_network_size, fraction_of_n };

struct StrategyChoice {
  StrategyKind kind = StrategyKind::reconstructed_top;
  RankedProperty property = RankedProperty::degree;
};

/// Flat key=value experiment description. List-valued keys are sweep axes;
/// every combination of their values is one sweep point.
struct ExperimentConfig {
  NetworkSource source = NetworkSource::synthetic;
  std::filesystem::path edge_list;
  /// Synthetic network parameters; `mu` and `seed` are overridden per point.
  LfrParams lfr{1460, 20.0, 30, 0.1, 3.0, 1.0, 10, 20, 1};

  std::vector<double> mu{0.1};
  /// 0 stands for "n", the underlying vertex count.
  std::vector<std::size_t> g{0};
  std::vector<AttributeShape> distribution{AttributeShape::uniform};
  std::vector<bool> assortative{false};
  /// 0 selects 100 x n.
  std::size_t assortative_attempts = 0;

  std::vector<PathMethod> method{PathMethod::random};
  std::vector<std::size_t> f{5};
  std::vector<Category> c{1};
  std::vector<double> nt_fraction{0.08};
  /// Respondent budget as a fraction of n. 0 selects the smallest budget
  /// whose true network reaches nt_fraction x n.
  double nr_fraction = 0.0;
  NtRule nt_rule = NtRule::true_network_size;

  std::size_t repetitions = 20;
  std::size_t ensemble = 100;
  std::string detector = "greedy-modularity";
  double resolution = 1.0;

  bool precision_table = true;
  bool community_table = true;
  bool rank_table = true;
  bool epidemic_table = false;
  SirParams sir;
  std::vector<StrategyChoice> strategies{
      {StrategyKind::reconstructed_top, RankedProperty::degree},
      {StrategyKind::reconstructed_frequency, RankedProperty::degree},
      {StrategyKind::random_whole, RankedProperty::degree}};
  /// Immunization budgets as fractions of n.
  std::vector<double> budgets{0.01};

  std::uint64_t seed = 1;
  std::filesystem::path out = "results";

  /// Throws Error describing the first violated constraint.
  void validate() const;
};

/// Parses "key = value" lines; '#' starts a comment, lists are
/// comma-separated. Unknown keys and malformed values raise ParseError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(write_config(cfg)) reproduces cfg.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

std::string to_string(PathMethod m);
std::string to_string(AttributeShape s);
std::string to_string(StrategyKind k);
std::string to_string(RankedProperty p);

}  // namespace netrecon
