#include "netrecon/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "netrecon/community.hpp"
#include "netrecon/error.hpp"
#include "netrecon/io.hpp"

namespace netrecon {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value, std::size_t line) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    std::string item = trim(value.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) throw ParseError("empty list item", line);
    items.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("expected a number, got '" + s + "'", line);
  return v;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected a nonnegative integer, got '" + s + "'", line);
  }
  return v;
}

bool parse_bool(const std::string& s, std::size_t line) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ParseError("expected a boolean, got '" + s + "'", line);
}

PathMethod parse_method(const std::string& s, std::size_t line) {
  if (s == "rpm" || s == "random") return PathMethod::random;
  if (s == "hpm" || s == "high-degree") return PathMethod::high_degree;
  throw ParseError("unknown sampling method '" + s + "'", line);
}

AttributeShape parse_shape(const std::string& s, std::size_t line) {
  if (s == "uniform") return AttributeShape::uniform;
  if (s == "normal") return AttributeShape::normal;
  throw ParseError("unknown distribution '" + s + "'", line);
}

RankedProperty parse_property(const std::string& s, std::size_t line) {
  if (s == "degree") return RankedProperty::degree;
  if (s == "k_out" || s == "kout") return RankedProperty::k_out;
  if (s == "embeddedness" || s == "embeddedness-low") return RankedProperty::embeddedness;
  throw ParseError("unknown vertex property '" + s + "'", line);
}

StrategyChoice parse_strategy(const std::string& s, std::size_t line) {
  StrategyChoice choice;
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  if (kind == "underlying-top") {
    choice.kind = StrategyKind::underlying_top;
  } else if (kind == "reconstructed-top") {
    choice.kind = StrategyKind::reconstructed_top;
  } else if (kind == "random-whole") {
    choice.kind = StrategyKind::random_whole;
  } else if (kind == "reconstructed-frequency-random" || kind == "reconstructed-frequency") {
    choice.kind = StrategyKind::reconstructed_frequency;
  } else {
    throw ParseError("unknown strategy '" + kind + "'", line);
  }
  if (colon != std::string::npos) choice.property = parse_property(s.substr(colon + 1), line);
  return choice;
}

template <class T, class F>
std::vector<T> parse_each(const std::string& value, std::size_t line, F parse) {
  std::vector<T> out;
  for (const auto& item : split_list(value, line)) out.push_back(parse(item, line));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& values, F show) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ", ";
    s += show(values[i]);
  }
  return s;
}

}  // namespace

std::string to_string(PathMethod m) { return m == PathMethod::random ? "rpm" : "hpm"; }

std::string to_string(AttributeShape s) { return s == AttributeShape::uniform ? "uniform" : "normal"; }

std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::underlying_top:
      return "underlying-top";
    case StrategyKind::reconstructed_top:
      return "reconstructed-top";
    case StrategyKind::random_whole:
      return "random-whole";
    case StrategyKind::reconstructed_frequency:
      return "reconstructed-frequency-random";
  }
  return "?";
}

std::string to_string(RankedProperty p) {
  switch (p) {
    case RankedProperty::degree:
      return "degree";
    case RankedProperty::k_out:
      return "k_out";
    case RankedProperty::embeddedness:
      return "embeddedness";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (source == NetworkSource::file && edge_list.empty()) throw Error("network = file needs edge_list");
  if (source == NetworkSource::synthetic) {
    LfrParams p = lfr;
    for (double m : mu) {
      p.mu = m;
      p.validate();
    }
  }
  if (mu.empty() || g.empty() || distribution.empty() || assortative.empty() || method.empty() ||
      f.empty() || c.empty() || nt_fraction.empty()) {
    throw Error("sweep lists must be nonempty");
  }
  for (Category w : c) {
    if (w < 1) throw Error("description width c must be at least 1");
  }
  for (double x : nt_fraction) {
    if (!(x > 0.0 && x <= 1.0)) throw Error("nt_fraction must lie in (0, 1]");
  }
  if (!(nr_fraction >= 0.0 && nr_fraction <= 1.0)) throw Error("nr_fraction must lie in [0, 1]");
  if (repetitions < 1) throw Error("repetitions must be at least 1");
  if (!(resolution > 0.0)) throw Error("resolution must be positive");
  const auto names = detector_names();
  if (std::find(names.begin(), names.end(), detector) == names.end()) {
    throw Error("unknown community detector '" + detector + "'");
  }
  if (epidemic_table) {
    sir.validate();
    if (ensemble < 1) throw Error("ensemble must be at least 1");
    if (strategies.empty() || budgets.empty()) throw Error("epidemic table needs strategies and budgets");
    for (double b : budgets) {
      if (!(b > 0.0 && b < 1.0)) throw Error("budgets must lie in (0, 1)");
    }
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, std::size_t)>;
  const std::map<std::string, Setter> setters{
      {"network",
       [&](const std::string& v, std::size_t l) {
         if (v == "lfr" || v == "synthetic") {
           cfg.source = NetworkSource::synthetic;
         } else if (v == "file") {
           cfg.source = NetworkSource::file;
         } else {
           throw ParseError("network must be lfr or file", l);
         }
       }},
      {"edge_list", [&](const std::string& v, std::size_t) { cfg.edge_list = v; }},
      {"n", [&](const std::string& v, std::size_t l) { cfg.lfr.n = parse_u64(v, l); }},
      {"k_avg", [&](const std::string& v, std::size_t l) { cfg.lfr.k_avg = parse_double(v, l); }},
      {"k_max", [&](const std::string& v, std::size_t l) { cfg.lfr.k_max = parse_u64(v, l); }},
      {"tau1", [&](const std::string& v, std::size_t l) { cfg.lfr.tau1 = parse_double(v, l); }},
      {"tau2", [&](const std::string& v, std::size_t l) { cfg.lfr.tau2 = parse_double(v, l); }},
      {"c_min", [&](const std::string& v, std::size_t l) { cfg.lfr.c_min = parse_u64(v, l); }},
      {"c_max", [&](const std::string& v, std::size_t l) { cfg.lfr.c_max = parse_u64(v, l); }},
      {"mu", [&](const std::string& v, std::size_t l) { cfg.mu = parse_each<double>(v, l, parse_double); }},
      {"g",
       [&](const std::string& v, std::size_t l) {
         cfg.g = parse_each<std::size_t>(v, l, [](const std::string& s, std::size_t line) -> std::size_t {
           if (s == "n") return 0;
           const auto x = parse_u64(s, line);
           if (x == 0) throw ParseError("g must be positive", line);
           return x;
         });
       }},
      {"distribution",
       [&](const std::string& v, std::size_t l) { cfg.distribution = parse_each<AttributeShape>(v, l, parse_shape); }},
      {"assortative",
       [&](const std::string& v, std::size_t l) { cfg.assortative = parse_each<bool>(v, l, parse_bool); }},
      {"assortative_attempts",
       [&](const std::string& v, std::size_t l) { cfg.assortative_attempts = parse_u64(v, l); }},
      {"method", [&](const std::string& v, std::size_t l) { cfg.method = parse_each<PathMethod>(v, l, parse_method); }},
      {"f", [&](const std::string& v, std::size_t l) { cfg.f = parse_each<std::size_t>(v, l, parse_u64); }},
      {"c",
       [&](const std::string& v, std::size_t l) {
         cfg.c = parse_each<Category>(v, l, [](const std::string& s, std::size_t line) {
           return static_cast<Category>(parse_u64(s, line));
         });
       }},
      {"nt_fraction",
       [&](const std::string& v, std::size_t l) { cfg.nt_fraction = parse_each<double>(v, l, parse_double); }},
      {"nr_fraction", [&](const std::string& v, std::size_t l) { cfg.nr_fraction = parse_double(v, l); }},
      {"nt_rule",
       [&](const std::string& v, std::size_t l) {
         if (v == "true-network-size") {
           cfg.nt_rule = NtRule::true_network_size;
         } else if (v == "fraction-of-n") {
           cfg.nt_rule = NtRule::fraction_of_n;
         } else {
           throw ParseError("nt_rule must be true-network-size or fraction-of-n", l);
         }
       }},
      {"repetitions", [&](const std::string& v, std::size_t l) { cfg.repetitions = parse_u64(v, l); }},
      {"ensemble", [&](const std::string& v, std::size_t l) { cfg.ensemble = parse_u64(v, l); }},
      {"detector", [&](const std::string& v, std::size_t) { cfg.detector = v; }},
      {"resolution", [&](const std::string& v, std::size_t l) { cfg.resolution = parse_double(v, l); }},
      {"tables",
       [&](const std::string& v, std::size_t l) {
         cfg.precision_table = cfg.community_table = cfg.rank_table = cfg.epidemic_table = false;
         for (const auto& t : split_list(v, l)) {
           if (t == "precision") {
             cfg.precision_table = true;
           } else if (t == "community") {
             cfg.community_table = true;
           } else if (t == "rank") {
             cfg.rank_table = true;
           } else if (t == "epidemic") {
             cfg.epidemic_table = true;
           } else {
             throw ParseError("unknown table '" + t + "'", l);
           }
         }
       }},
      {"sir_init_frac", [&](const std::string& v, std::size_t l) { cfg.sir.init_frac = parse_double(v, l); }},
      {"sir_beta", [&](const std::string& v, std::size_t l) { cfg.sir.beta = parse_double(v, l); }},
      {"sir_steps",
       [&](const std::string& v, std::size_t l) { cfg.sir.infectious_steps = static_cast<std::uint32_t>(parse_u64(v, l)); }},
      {"sir_runs", [&](const std::string& v, std::size_t l) { cfg.sir.runs = parse_u64(v, l); }},
      {"strategies",
       [&](const std::string& v, std::size_t l) { cfg.strategies = parse_each<StrategyChoice>(v, l, parse_strategy); }},
      {"budgets", [&](const std::string& v, std::size_t l) { cfg.budgets = parse_each<double>(v, l, parse_double); }},
      {"seed", [&](const std::string& v, std::size_t l) { cfg.seed = parse_u64(v, l); }},
      {"out", [&](const std::string& v, std::size_t) { cfg.out = v; }},
  };

  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
    it->second(value, line_no);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  out << "network = " << (cfg.source == NetworkSource::synthetic ? "lfr" : "file") << '\n';
  if (!cfg.edge_list.empty()) out << "edge_list = " << cfg.edge_list.string() << '\n';
  out << "n = " << cfg.lfr.n << '\n'
      << "k_avg = " << fmt(cfg.lfr.k_avg) << '\n'
      << "k_max = " << cfg.lfr.k_max << '\n'
      << "tau1 = " << fmt(cfg.lfr.tau1) << '\n'
      << "tau2 = " << fmt(cfg.lfr.tau2) << '\n'
      << "c_min = " << cfg.lfr.c_min << '\n'
      << "c_max = " << cfg.lfr.c_max << '\n'
      << "mu = " << join(cfg.mu, fmt) << '\n'
      << "g = " << join(cfg.g, [](std::size_t x) { return x == 0 ? std::string("n") : std::to_string(x); }) << '\n'
      << "distribution = " << join(cfg.distribution, [](AttributeShape s) { return to_string(s); }) << '\n'
      << "assortative = " << join(cfg.assortative, [](bool b) { return std::string(b ? "true" : "false"); }) << '\n'
      << "assortative_attempts = " << cfg.assortative_attempts << '\n'
      << "method = " << join(cfg.method, [](PathMethod m) { return to_string(m); }) << '\n'
      << "f = " << join(cfg.f, [](std::size_t x) { return std::to_string(x); }) << '\n'
      << "c = " << join(cfg.c, [](Category x) { return std::to_string(x); }) << '\n'
      << "nt_fraction = " << join(cfg.nt_fraction, fmt) << '\n'
      << "nr_fraction = " << fmt(cfg.nr_fraction) << '\n'
      << "nt_rule = " << (cfg.nt_rule == NtRule::true_network_size ? "true-network-size" : "fraction-of-n") << '\n'
      << "repetitions = " << cfg.repetitions << '\n'
      << "ensemble = " << cfg.ensemble << '\n'
      << "detector = " << cfg.detector << '\n'
      << "resolution = " << fmt(cfg.resolution) << '\n';
  std::vector<std::string> tables;
  if (cfg.precision_table) tables.push_back("precision");
  if (cfg.community_table) tables.push_back("community");
  if (cfg.rank_table) tables.push_back("rank");
  if (cfg.epidemic_table) tables.push_back("epidemic");
  if (!tables.empty()) out << "tables = " << join(tables, [](const std::string& s) { return s; }) << '\n';
  out << "sir_init_frac = " << fmt(cfg.sir.init_frac) << '\n'
      << "sir_beta = " << fmt(cfg.sir.beta) << '\n'
      << "sir_steps = " << cfg.sir.infectious_steps << '\n'
      << "sir_runs = " << cfg.sir.runs << '\n'
      << "strategies = "
      << join(cfg.strategies,
              [](const StrategyChoice& s) {
                return to_string(s.kind) + ":" +
                       (s.property == RankedProperty::embeddedness ? "embeddedness-low" : to_string(s.property));
              })
      << '\n'
      << "budgets = " << join(cfg.budgets, fmt) << '\n'
      << "seed = " << cfg.seed << '\n'
      << "out = " << cfg.out.string() << '\n';
}

}  // namespace netrecon
