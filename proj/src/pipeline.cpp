#include "netrecon/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "netrecon/community.hpp"
#include "netrecon/error.hpp"
#include "netrecon/io.hpp"
#include "netrecon/random.hpp"

namespace netrecon {
namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  for (double mu : cfg.mu)
    for (std::size_t g : cfg.g)
      for (AttributeShape d : cfg.distribution)
        for (bool assortative : cfg.assortative)
          for (PathMethod m : cfg.method)
            for (std::size_t f : cfg.f)
              for (Category c : cfg.c)
                for (double nt : cfg.nt_fraction) points.push_back({mu, g, d, assortative, m, f, c, nt});
  return points;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

void save_graph(const fs::path& path, const Graph& g) {
  auto out = open_output(path);
  out << "# vertices " << g.num_vertices() << '\n';
  write_edge_list(out, g);
  if (!out) throw Error("failed writing " + path.string());
}

Graph load_graph(const fs::path& path) {
  auto in = open_input(path);
  try {
    std::string first;
    std::getline(in, first);
    std::size_t n = 0;
    if (std::sscanf(first.c_str(), "# vertices %zu", &n) == 1) return read_edge_list(in, n);
    in.clear();
    in.seekg(0);
    return read_edge_list(in).graph;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Experiment

Experiment::Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.source == NetworkSource::file) {
    auto in = open_input(cfg_.edge_list);
    try {
      loaded_ = read_edge_list(in).graph;
    } catch (const Error& e) {
      throw Error(cfg_.edge_list.string() + ": " + e.what());
    }
    network_name_ = cfg_.edge_list.stem().string();
  } else {
    network_name_ = "lfr";
  }
}

std::size_t Experiment::underlying_size() const noexcept {
  return loaded_ ? loaded_->num_vertices() : cfg_.lfr.n;
}

std::string Experiment::network_key(const SweepPoint& p) const {
  if (loaded_) return "file=" + network_name_;
  const auto& l = cfg_.lfr;
  std::ostringstream key;
  key << "lfr:n=" << l.n << ";k=" << format_number(l.k_avg) << ";kmax=" << l.k_max
      << ";tau1=" << format_number(l.tau1) << ";tau2=" << format_number(l.tau2) << ";cmin=" << l.c_min
      << ";cmax=" << l.c_max << ";mu=" << format_number(p.mu);
  return key.str();
}

std::string Experiment::attribute_key(const SweepPoint& p) const {
  return network_key(p) + ";g=" + std::to_string(p.g) + ";dist=" + to_string(p.distribution) +
         ";assort=" + (p.assortative ? "1" : "0") + ";attempts=" + std::to_string(cfg_.assortative_attempts);
}

std::string Experiment::sample_key(const SweepPoint& p) const {
  return network_key(p) + ";method=" + to_string(p.method) + ";f=" + std::to_string(p.f) +
         ";c=" + std::to_string(p.c) + ";nt=" + format_number(p.nt_fraction) +
         ";nr=" + format_number(cfg_.nr_fraction);
}

std::string Experiment::full_key(const SweepPoint& p) const {
  return attribute_key(p) + "|" + sample_key(p) + ";rule=" +
         (cfg_.nt_rule == NtRule::true_network_size ? "true" : "fraction");
}

Underlying Experiment::network(const SweepPoint& p, std::size_t rep) const {
  if (loaded_) return {*loaded_, std::nullopt};
  LfrParams params = cfg_.lfr;
  params.mu = p.mu;
  params.seed = derive_seed(cfg_.seed, "network", network_key(p), rep);
  LfrNetwork net = generate_lfr_like(params);
  return {std::move(net.graph), std::move(net.communities)};
}

Category Experiment::categories(const SweepPoint& p, std::size_t n) const {
  return static_cast<Category>(p.g == 0 ? n : p.g);
}

CategoryDistribution Experiment::distribution(const SweepPoint& p, std::size_t n) const {
  return make_distribution(p.distribution, categories(p, n));
}

AttributeMap Experiment::attributes(const Graph& g, const SweepPoint& p, std::size_t rep) const {
  const std::size_t n = g.num_vertices();
  AttributeMap a = assign_attributes(g, distribution(p, n), derive_seed(cfg_.seed, "attributes", attribute_key(p), rep));
  if (p.assortative) {
    const std::size_t attempts = cfg_.assortative_attempts == 0 ? 100 * n : cfg_.assortative_attempts;
    a = make_assortative(g, std::move(a), attempts, derive_seed(cfg_.seed, "assortative", attribute_key(p), rep));
  }
  return a;
}

SampledData Experiment::sample(const Graph& g, const AttributeMap& a, const SweepPoint& p, std::size_t rep) const {
  const std::size_t n = g.num_vertices();
  const SampleSpec spec{p.method, p.f, p.c};
  const std::uint64_t seed = derive_seed(cfg_.seed, "sample", sample_key(p), rep);
  const auto target = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.nt_fraction * static_cast<double>(n))));
  SampledData out;
  if (cfg_.nr_fraction > 0.0) {
    out.respondents = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg_.nr_fraction * static_cast<double>(n))));
    out.sample = draw_sample(g, a, spec, out.respondents, seed);
  } else {
    SizedSample sized = draw_sample_for_true_size(g, a, spec, target, seed);
    out.sample = std::move(sized.sample);
    out.respondents = sized.respondents;
  }
  out.true_net = true_network(out.sample.forest, out.sample.truth);
  const std::size_t true_size = out.true_net.underlying.size();
  out.n_t = cfg_.nt_rule == NtRule::true_network_size ? true_size : std::min(target, out.sample.forest.size());
  return out;
}

Reconstruction Experiment::reconstruct(const SampleForest& forest, const CategoryDistribution& dist,
                                       std::size_t n_t, const SweepPoint& p, std::size_t rep) const {
  ReconstructionOptions options;
  options.target_size = n_t;
  options.seed = derive_seed(cfg_.seed, "reconstruct", full_key(p), rep);
  return netrecon::reconstruct(forest, dist, options);
}

Partition Experiment::detect(const Graph& g, const std::string& role, const SweepPoint& p, std::size_t rep) const {
  DetectorConfig dc;
  dc.method = cfg_.detector;
  dc.resolution = cfg_.resolution;
  const std::string key = role == "underlying" ? network_key(p) : full_key(p);
  dc.seed = derive_seed(cfg_.seed, "detect-" + role, key, rep);
  return detect_communities(g, dc);
}

// ---------------------------------------------------------------------------
// Per-repetition metrics

namespace {

constexpr RankedProperty kProperties[] = {RankedProperty::degree, RankedProperty::k_out,
                                          RankedProperty::embeddedness};

struct Evaluation {
  std::optional<double> community_precision;
  std::optional<double> nmi;
  std::vector<RankValue> ranks;
  std::string community_status = "ok";
};

template <class F>
std::optional<double> attempt(F fn, std::string& status) {
  try {
    return fn();
  } catch (const std::exception& e) {
    if (status == "ok") {
      status = e.what();
    } else {
      status += "; " + std::string(e.what());
    }
    return std::nullopt;
  }
}

// Metrics that need the detected partitions. Each argument may be absent;
// metrics whose inputs are missing are skipped.
struct EvaluationInputs {
  const Graph* underlying = nullptr;
  const Partition* underlying_reference = nullptr;
  const Partition* underlying_detected = nullptr;
  const Graph* reconstructed = nullptr;
  const Partition* reconstructed_partition = nullptr;
  const ProjectionMap* projection = nullptr;
  const Correspondence* reconstructed_corr = nullptr;
  const Graph* true_graph = nullptr;
  const Partition* true_partition = nullptr;
  const Correspondence* true_corr = nullptr;
};

Evaluation evaluate(const EvaluationInputs& in) {
  Evaluation ev;
  if (in.reconstructed_partition && in.underlying_reference && in.projection) {
    ev.community_precision = attempt(
        [&] { return community_precision(*in.reconstructed_partition, *in.underlying_reference, *in.projection); },
        ev.community_status);
  }
  if (in.reconstructed_partition && in.reconstructed_corr && in.true_partition && in.true_corr) {
    ev.nmi = attempt(
        [&] { return aligned_nmi(*in.true_partition, *in.true_corr, *in.reconstructed_partition, *in.reconstructed_corr); },
        ev.community_status);
  }
  if (in.underlying && in.underlying_detected) {
    const auto base = vertex_properties(*in.underlying, *in.underlying_detected);
    const auto base_corr = identity_correspondence(in.underlying->num_vertices());
    auto add = [&](const std::string& name, const Graph* g, const Partition* p, const Correspondence* c) {
      if (!g || !p || !c) return;
      const auto props = vertex_properties(*g, *p);
      for (RankedProperty prop : kProperties) {
        RankValue rv{prop, name, std::nullopt, "ok"};
        rv.spearman = attempt([&] { return rank_correlation(prop, props, *c, base, base_corr); }, rv.status);
        ev.ranks.push_back(std::move(rv));
      }
    };
    add("reconstructed", in.reconstructed, in.reconstructed_partition, in.reconstructed_corr);
    add("true", in.true_graph, in.true_partition, in.true_corr);
  }
  return ev;
}

std::vector<RankValue> failed_ranks(const std::string& status) {
  std::vector<RankValue> out;
  for (const char* net : {"reconstructed", "true"}) {
    for (RankedProperty p : kProperties) out.push_back({p, net, std::nullopt, status});
  }
  return out;
}

}  // namespace

ReplicateResult run_replicate(const Experiment& ex, const SweepPoint& p, std::size_t rep) {
  const auto& cfg = ex.config();
  ReplicateResult r;
  try {
    const Underlying u = ex.network(p, rep);
    r.n = u.graph.num_vertices();
    const AttributeMap a = ex.attributes(u.graph, p, rep);
    const CategoryDistribution dist = ex.distribution(p, r.n);
    const SampledData s = ex.sample(u.graph, a, p, rep);
    const auto& forest = s.sample.forest;
    const auto& truth = s.sample.truth;
    r.respondents = s.respondents;
    r.occurrences = forest.size();
    r.true_size = s.true_net.underlying.size();
    r.n_t = s.n_t;
    const Reconstruction rec = ex.reconstruct(forest, dist, s.n_t, p, rep);
    r.merges = rec.log.events.size();
    r.attempts = rec.attempts;
    r.coalescing_precision = attempt([&] { return coalescing_precision(rec.log, truth); }, r.precision_status);

    if (cfg.community_table || cfg.rank_table) {
      const Partition detected = ex.detect(u.graph, "underlying", p, rep);
      const Partition& reference = u.ground_truth ? *u.ground_truth : detected;
      const Partition recon_part = ex.detect(rec.graph, "reconstructed", p, rep);
      const Partition true_part = ex.detect(s.true_net.graph, "true", p, rep);
      const ProjectionMap proj = project(rec.members, forest, truth);
      const Correspondence recon_corr = representatives(proj, rec.members, forest, truth);
      const Correspondence true_corr = correspondence(s.true_net);
      r.reconstructed_communities = recon_part.num_communities();
      r.true_communities = true_part.num_communities();
      EvaluationInputs in;
      in.underlying = &u.graph;
      in.underlying_reference = &reference;
      in.underlying_detected = &detected;
      in.reconstructed = &rec.graph;
      in.reconstructed_partition = &recon_part;
      in.projection = &proj;
      in.reconstructed_corr = &recon_corr;
      in.true_graph = &s.true_net.graph;
      in.true_partition = &true_part;
      in.true_corr = &true_corr;
      Evaluation ev = evaluate(in);
      r.community_precision = ev.community_precision;
      r.nmi = ev.nmi;
      r.ranks = std::move(ev.ranks);
      r.community_status = ev.community_status;
    }
  } catch (const std::exception& e) {
    r.precision_status = e.what();
    r.community_status = e.what();
    r.ranks = failed_ranks(e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Epidemic comparison

std::vector<EpidemicResult> run_epidemic_on(const Experiment& ex, const SweepPoint& p, const Graph& g,
                                            const AttributeMap& a, std::size_t jobs) {
  const auto& cfg = ex.config();
  const std::size_t n = g.num_vertices();
  std::vector<EpidemicResult> results;
  for (double b : cfg.budgets) {
    for (const auto& s : cfg.strategies) {
      EpidemicResult r;
      r.strategy = s;
      r.budget_fraction = b;
      r.budget = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(b * static_cast<double>(n))));
      results.push_back(r);
    }
  }
  try {
    const CategoryDistribution dist = ex.distribution(p, n);
    const bool needs_ensemble = std::any_of(cfg.strategies.begin(), cfg.strategies.end(), [](const StrategyChoice& s) {
      return s.kind == StrategyKind::reconstructed_top || s.kind == StrategyKind::reconstructed_frequency;
    });
    std::vector<std::optional<EnsembleMember>> slots(needs_ensemble ? cfg.ensemble : 0);
    parallel_for(slots.size(), jobs, [&](std::size_t i) {
      try {
        const SampledData s = ex.sample(g, a, p, i);
        Reconstruction rec = ex.reconstruct(s.sample.forest, dist, s.n_t, p, i);
        Partition part = ex.detect(rec.graph, "reconstructed", p, i);
        const ProjectionMap proj = project(rec.members, s.sample.forest, s.sample.truth);
        Correspondence corr = representatives(proj, rec.members, s.sample.forest, s.sample.truth);
        slots[i] = EnsembleMember{std::move(rec.graph), std::move(part), std::move(corr)};
      } catch (const std::exception&) {
        // A failed member is left out; the row reports the built count.
      }
    });
    std::vector<EnsembleMember> ensemble;
    for (auto& m : slots) {
      if (m) ensemble.push_back(std::move(*m));
    }
    const Partition detected = ex.detect(g, "underlying", p, 0);
    const std::string key = ex.full_key(p);
    for (auto& r : results) {
      r.ensemble_built = ensemble.size();
      try {
        StrategySpec spec{r.strategy.kind, r.strategy.property, r.budget, cfg.ensemble};
        const std::string budget_key = ";budget=" + format_number(r.budget_fraction);
        const std::string strategy_key =
            key + budget_key + ";strategy=" + to_string(r.strategy.kind) + ":" + to_string(r.strategy.property);
        const auto immunized =
            select_immunized(spec, g, detected, ensemble, derive_seed(cfg.seed, "immunize", strategy_key, 0));
        SirParams sir = cfg.sir;
        sir.seed = derive_seed(cfg.seed, "sir", key + budget_key, 0);
        r.summary = evaluate_immunization(g, immunized, sir, jobs);
        if (needs_ensemble && ensemble.size() < cfg.ensemble) {
          r.status = "ensemble " + std::to_string(ensemble.size()) + "/" + std::to_string(cfg.ensemble);
        }
      } catch (const std::exception& e) {
        r.status = e.what();
      }
    }
  } catch (const std::exception& e) {
    for (auto& r : results) r.status = e.what();
  }
  return results;
}

std::vector<EpidemicResult> run_epidemic(const Experiment& ex, const SweepPoint& p, std::size_t jobs) {
  try {
    const Underlying u = ex.network(p, 0);
    const AttributeMap a = ex.attributes(u.graph, p, 0);
    return run_epidemic_on(ex, p, u.graph, a, jobs);
  } catch (const std::exception& e) {
    std::vector<EpidemicResult> results;
    for (double b : ex.config().budgets) {
      for (const auto& s : ex.config().strategies) {
        EpidemicResult r;
        r.strategy = s;
        r.budget_fraction = b;
        r.status = e.what();
        results.push_back(r);
      }
    }
    return results;
  }
}

// ---------------------------------------------------------------------------
// Tables

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : path_(path), out_(open_output(path)) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << csv_cell(cells[i]);
    }
    out_ << '\n';
  }

  ~CsvWriter() { out_.flush(); }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

const std::vector<std::string> kKeyHeader{"network", "mu", "g", "distribution", "assortative",
                                          "method", "f", "c", "nt_fraction"};

std::vector<std::string> key_cells(const Experiment& ex, const SweepPoint& p) {
  const bool synthetic = ex.config().source == NetworkSource::synthetic;
  return {synthetic ? std::string("lfr") : ex.config().edge_list.stem().string(),
          synthetic ? format_number(p.mu) : std::string(),
          std::to_string(ex.categories(p, ex.underlying_size())),
          to_string(p.distribution),
          p.assortative ? "true" : "false",
          to_string(p.method),
          std::to_string(p.f),
          std::to_string(p.c),
          format_number(p.nt_fraction)};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

void run_pipeline(const ExperimentConfig& cfg, std::size_t jobs) {
  cfg.validate();
  const Experiment ex(cfg);
  const auto points = sweep_points(cfg);
  fs::create_directories(cfg.out);
  {
    auto out = open_output(cfg.out / "config.txt");
    write_config(out, cfg);
  }

  if (cfg.precision_table || cfg.community_table || cfg.rank_table) {
    const std::size_t reps = cfg.repetitions;
    std::vector<ReplicateResult> results(points.size() * reps);
    parallel_for(results.size(), jobs, [&](std::size_t i) { results[i] = run_replicate(ex, points[i / reps], i % reps); });

    if (cfg.precision_table) {
      CsvWriter w(cfg.out / "precision.csv");
      w.row(concat(kKeyHeader, {"rep", "n", "respondents", "occurrences", "true_size", "n_t", "merges", "attempts",
                                "coalescing_precision", "status"}));
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        w.row(concat(key_cells(ex, points[i / reps]),
                     {std::to_string(i % reps), std::to_string(r.n), std::to_string(r.respondents),
                      std::to_string(r.occurrences), std::to_string(r.true_size), std::to_string(r.n_t),
                      std::to_string(r.merges), std::to_string(r.attempts), opt(r.coalescing_precision),
                      r.precision_status}));
      }
    }
    if (cfg.community_table) {
      CsvWriter w(cfg.out / "community.csv");
      w.row(concat(kKeyHeader, {"rep", "reconstructed_communities", "true_communities", "community_precision", "nmi",
                                "status"}));
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        w.row(concat(key_cells(ex, points[i / reps]),
                     {std::to_string(i % reps), std::to_string(r.reconstructed_communities),
                      std::to_string(r.true_communities), opt(r.community_precision), opt(r.nmi),
                      r.community_status}));
      }
    }
    if (cfg.rank_table) {
      CsvWriter w(cfg.out / "rank.csv");
      w.row(concat(kKeyHeader, {"rep", "compared", "property", "spearman", "status"}));
      for (std::size_t i = 0; i < results.size(); ++i) {
        for (const auto& rv : results[i].ranks) {
          w.row(concat(key_cells(ex, points[i / reps]),
                       {std::to_string(i % reps), rv.network, to_string(rv.property), opt(rv.spearman), rv.status}));
        }
      }
    }
  }

  if (cfg.epidemic_table) {
    CsvWriter w(cfg.out / "epidemic.csv");
    w.row(concat(kKeyHeader, {"strategy", "property", "budget_fraction", "budget", "ensemble", "mean_size",
                              "stddev", "runs", "status"}));
    for (const auto& p : points) {
      for (const auto& r : run_epidemic(ex, p, jobs)) {
        w.row(concat(key_cells(ex, p),
                     {to_string(r.strategy.kind), to_string(r.strategy.property), format_number(r.budget_fraction),
                      std::to_string(r.budget), std::to_string(r.ensemble_built),
                      r.summary ? format_number(r.summary->mean) : std::string(),
                      r.summary ? format_number(r.summary->stddev) : std::string(),
                      r.summary ? std::to_string(r.summary->runs) : std::string(), r.status}));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Standalone stages

namespace {

template <class F>
auto read_file(const fs::path& path, F fn) {
  auto in = open_input(path);
  try {
    return fn(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

template <class F>
void write_file(const fs::path& path, F fn) {
  auto out = open_output(path);
  fn(out);
  if (!out) throw Error("failed writing " + path.string());
}

struct SampleInfo {
  Category g = 1;
  AttributeShape distribution = AttributeShape::uniform;
  std::size_t n_t = 0;
};

void write_sample_info(std::ostream& out, const SampleInfo& info, const SampledData& s) {
  out << "g = " << info.g << '\n'
      << "distribution = " << to_string(info.distribution) << '\n'
      << "respondents = " << s.respondents << '\n'
      << "occurrences = " << s.sample.forest.size() << '\n'
      << "true_size = " << s.true_net.underlying.size() << '\n'
      << "n_t = " << info.n_t << '\n';
}

SampleInfo read_sample_info(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing key '" + key + "'", 0);
    return it->second;
  };
  SampleInfo info;
  info.g = static_cast<Category>(detail::parse_int(need("g"), 0));
  const std::string d = need("distribution");
  if (d == "uniform") {
    info.distribution = AttributeShape::uniform;
  } else if (d == "normal") {
    info.distribution = AttributeShape::normal;
  } else {
    throw ParseError("unknown distribution '" + d + "'", 0);
  }
  const auto nt = detail::parse_int(need("n_t"), 0);
  if (nt < 1 || info.g < 1) throw ParseError("g and n_t must be positive", 0);
  info.n_t = static_cast<std::size_t>(nt);
  return info;
}

void write_true_vertices(std::ostream& out, const TrueNetwork& tn) {
  for (std::size_t i = 0; i < tn.underlying.size(); ++i) out << i << ' ' << tn.underlying[i] << '\n';
}

Correspondence read_true_vertices(std::istream& in) {
  Correspondence c;
  std::string line;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::tokenize(line, tokens)) continue;
    if (tokens.size() != 2) throw ParseError("expected 'vertex underlying-vertex'", line_no);
    const auto local = detail::parse_int(tokens[0], line_no);
    const auto under = detail::parse_int(tokens[1], line_no);
    if (local < 0 || under < 0) throw ParseError("negative vertex id", line_no);
    c.pairs.push_back({static_cast<Vertex>(under), static_cast<Vertex>(local)});
  }
  std::sort(c.pairs.begin(), c.pairs.end());
  return c;
}

Partition read_partition_file(const fs::path& path) {
  return read_file(path, [](std::istream& in) { return read_partition(in); });
}

AttributeMap read_attribute_file(const fs::path& path, Category g) {
  return read_file(path, [g](std::istream& in) { return read_attributes(in, g); });
}

void stage_generate(const Experiment& ex, const SweepPoint& p, const fs::path& dir, std::size_t rep) {
  const Underlying u = ex.network(p, rep);
  save_graph(dir / "network.txt", u.graph);
  if (u.ground_truth) {
    write_file(dir / "communities.txt", [&](std::ostream& out) { write_partition(out, *u.ground_truth); });
  }
  const AttributeMap a = ex.attributes(u.graph, p, rep);
  write_file(dir / "attributes.txt", [&](std::ostream& out) { write_attributes(out, a); });
}

void stage_sample(const Experiment& ex, const SweepPoint& p, const fs::path& dir, std::size_t rep) {
  const Graph g = load_graph(dir / "network.txt");
  const Category cats = ex.categories(p, g.num_vertices());
  const AttributeMap a = read_attribute_file(dir / "attributes.txt", cats);
  a.validate(g.num_vertices());
  const SampledData s = ex.sample(g, a, p, rep);
  write_file(dir / "forest.txt", [&](std::ostream& out) { write_forest(out, s.sample.forest); });
  write_file(dir / "truth.txt", [&](std::ostream& out) { write_truth(out, s.sample.truth); });
  write_file(dir / "sample.info", [&](std::ostream& out) {
    write_sample_info(out, SampleInfo{cats, p.distribution, s.n_t}, s);
  });
  save_graph(dir / "true_network.txt", s.true_net.graph);
  write_file(dir / "true_network_vertices.txt", [&](std::ostream& out) { write_true_vertices(out, s.true_net); });
}

void stage_reconstruct(const Experiment& ex, const SweepPoint& p, const fs::path& dir, std::size_t rep) {
  const SampleForest forest = read_file(dir / "forest.txt", [](std::istream& in) { return read_forest(in); });
  const SampleInfo info = read_file(dir / "sample.info", [](std::istream& in) { return read_sample_info(in); });
  const CategoryDistribution dist = make_distribution(info.distribution, info.g);
  const Reconstruction rec = ex.reconstruct(forest, dist, info.n_t, p, rep);
  save_graph(dir / "reconstructed.txt", rec.graph);
  write_file(dir / "provenance.txt", [&](std::ostream& out) { write_provenance(out, rec); });
  write_file(dir / "coalesce_log.csv", [&](std::ostream& out) { write_coalesce_log(out, rec.log); });
}

void stage_communities(const Experiment& ex, const SweepPoint& p, const fs::path& dir, std::size_t rep) {
  const std::pair<const char*, const char*> roles[] = {
      {"network", "underlying"}, {"true_network", "true"}, {"reconstructed", "reconstructed"}};
  bool any = false;
  for (const auto& [file, role] : roles) {
    const fs::path in = dir / (std::string(file) + ".txt");
    if (!fs::exists(in)) continue;
    any = true;
    const Partition part = ex.detect(load_graph(in), role, p, rep);
    write_file(dir / (std::string(file) + ".partition.txt"), [&](std::ostream& out) { write_partition(out, part); });
  }
  if (!any) throw Error("no network files in " + dir.string());
}

void stage_metrics(const fs::path& dir) {
  auto has = [&](std::initializer_list<const char*> names) {
    return std::all_of(names.begin(), names.end(), [&](const char* f) { return fs::exists(dir / f); });
  };
  const SealedTruth truth = read_file(dir / "truth.txt", [](std::istream& in) { return read_truth(in); });
  const CoalesceLog log = read_file(dir / "coalesce_log.csv", [](std::istream& in) { return read_coalesce_log(in); });

  std::vector<std::vector<std::string>> rows;
  auto emit = [&](const std::string& name, const std::function<double()>& fn) {
    std::string status = "ok";
    const auto v = attempt(fn, status);
    rows.push_back({name, opt(v), status});
  };
  emit("coalescing_precision", [&] { return coalescing_precision(log, truth); });

  std::optional<SampleForest> forest;
  std::optional<std::vector<std::vector<OccId>>> members;
  std::optional<ProjectionMap> proj;
  std::optional<Correspondence> recon_corr;
  if (has({"forest.txt", "provenance.txt"})) {
    forest = read_file(dir / "forest.txt", [](std::istream& in) { return read_forest(in); });
    members = read_file(dir / "provenance.txt", [](std::istream& in) { return read_provenance(in); });
    proj = project(*members, *forest, truth);
    recon_corr = representatives(*proj, *members, *forest, truth);
  }

  std::optional<Graph> underlying;
  std::optional<Partition> underlying_detected;
  std::optional<Partition> reference;
  if (has({"network.txt", "network.partition.txt"})) {
    underlying = load_graph(dir / "network.txt");
    underlying_detected = read_partition_file(dir / "network.partition.txt");
    reference = underlying_detected;
  }
  if (has({"communities.txt"})) reference = read_partition_file(dir / "communities.txt");

  std::optional<Graph> recon_graph;
  std::optional<Partition> recon_part;
  if (has({"reconstructed.txt", "reconstructed.partition.txt"})) {
    recon_graph = load_graph(dir / "reconstructed.txt");
    recon_part = read_partition_file(dir / "reconstructed.partition.txt");
  }
  std::optional<Graph> true_graph;
  std::optional<Partition> true_part;
  std::optional<Correspondence> true_corr;
  if (has({"true_network.txt", "true_network.partition.txt", "true_network_vertices.txt"})) {
    true_graph = load_graph(dir / "true_network.txt");
    true_part = read_partition_file(dir / "true_network.partition.txt");
    true_corr = read_file(dir / "true_network_vertices.txt", [](std::istream& in) { return read_true_vertices(in); });
  }

  auto ptr = [](auto& o) { return o ? &*o : nullptr; };
  EvaluationInputs in;
  in.underlying = ptr(underlying);
  in.underlying_reference = ptr(reference);
  in.underlying_detected = ptr(underlying_detected);
  in.reconstructed = ptr(recon_graph);
  in.reconstructed_partition = ptr(recon_part);
  in.projection = ptr(proj);
  in.reconstructed_corr = ptr(recon_corr);
  in.true_graph = ptr(true_graph);
  in.true_partition = ptr(true_part);
  in.true_corr = ptr(true_corr);
  const Evaluation ev = evaluate(in);
  if (in.reconstructed_partition && in.underlying_reference && in.projection) {
    rows.push_back({"community_precision", opt(ev.community_precision), ev.community_status});
  }
  if (in.reconstructed_partition && in.reconstructed_corr && in.true_partition && in.true_corr) {
    rows.push_back({"nmi", opt(ev.nmi), ev.community_status});
  }
  for (const auto& rv : ev.ranks) {
    rows.push_back({"spearman_" + rv.network + "_" + to_string(rv.property), opt(rv.spearman), rv.status});
  }

  CsvWriter w(dir / "metrics.csv");
  w.row({"metric", "value", "status"});
  for (const auto& r : rows) w.row(r);
}

void stage_epidemic(const Experiment& ex, const SweepPoint& p, const fs::path& dir, std::size_t jobs) {
  const Graph g = load_graph(dir / "network.txt");
  const AttributeMap a = read_attribute_file(dir / "attributes.txt", ex.categories(p, g.num_vertices()));
  a.validate(g.num_vertices());
  CsvWriter w(dir / "epidemic.csv");
  w.row({"strategy", "property", "budget_fraction", "budget", "ensemble", "mean_size", "stddev", "runs", "status"});
  for (const auto& r : run_epidemic_on(ex, p, g, a, jobs)) {
    w.row({to_string(r.strategy.kind), to_string(r.strategy.property), format_number(r.budget_fraction),
           std::to_string(r.budget), std::to_string(r.ensemble_built),
           r.summary ? format_number(r.summary->mean) : std::string(),
           r.summary ? format_number(r.summary->stddev) : std::string(),
           r.summary ? std::to_string(r.summary->runs) : std::string(), r.status});
  }
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"generate", "sample", "reconstruct", "communities", "metrics", "epidemic"};
  return names;
}

void run_stage(const ExperimentConfig& cfg, const std::string& stage, const fs::path& dir, std::size_t rep,
               std::size_t jobs) {
  const auto& names = stage_names();
  if (std::find(names.begin(), names.end(), stage) == names.end()) throw Error("unknown stage '" + stage + "'");
  cfg.validate();
  fs::create_directories(dir);
  const Experiment ex(cfg);
  const SweepPoint p = sweep_points(cfg).at(0);
  if (stage == "generate") {
    stage_generate(ex, p, dir, rep);
  } else if (stage == "sample") {
    stage_sample(ex, p, dir, rep);
  } else if (stage == "reconstruct") {
    stage_reconstruct(ex, p, dir, rep);
  } else if (stage == "communities") {
    stage_communities(ex, p, dir, rep);
  } else if (stage == "metrics") {
    stage_metrics(dir);
  } else {
    stage_epidemic(ex, p, dir, jobs);
  }
}

}  // namespace netrecon
