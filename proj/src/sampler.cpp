#include "netrecon/sampler.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "netrecon/error.hpp"
#include "netrecon/io.hpp"
#include "netrecon/random.hpp"

namespace netrecon {

std::size_t SampleForest::num_respondents() const noexcept {
  return static_cast<std::size_t>(std::count_if(occurrences.begin(), occurrences.end(),
                                                [](const Occurrence& o) { return o.is_respondent(); }));
}

std::size_t PathSample::total() const noexcept {
  std::size_t t = 0;
  for (const auto& p : paths) t += p.size();
  return t;
}

namespace {

// Set of vertices supporting O(1) insert, erase and uniform sampling.
class VertexPool {
 public:
  explicit VertexPool(std::size_t n) : pos_(n, kAbsent) {}

  void insert(Vertex v) {
    if (pos_[v] != kAbsent) return;
    pos_[v] = items_.size();
    items_.push_back(v);
  }
  void erase(Vertex v) {
    const std::size_t i = pos_[v];
    if (i == kAbsent) return;
    items_[i] = items_.back();
    pos_[items_[i]] = i;
    items_.pop_back();
    pos_[v] = kAbsent;
  }
  bool empty() const noexcept { return items_.empty(); }
  Vertex sample(Rng& rng) const { return items_[uniform_index(rng, items_.size())]; }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<Vertex> items_;
  std::vector<std::size_t> pos_;
};

constexpr std::size_t kHighDegreeSeedMin = 5;

}  // namespace

PathSample sample_paths(const Graph& g, PathMethod method, std::size_t respondents,
                        std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  if (respondents > n) {
    throw Error("respondent budget " + std::to_string(respondents) + " exceeds n=" + std::to_string(n));
  }
  Rng rng(seed);
  VertexPool unused(n);
  VertexPool seed_pool(n);
  for (Vertex v = 0; v < n; ++v) {
    unused.insert(v);
    if (g.degree(v) >= kHighDegreeSeedMin) seed_pool.insert(v);
  }
  std::vector<bool> used(n, false);
  auto take = [&](Vertex v) {
    used[v] = true;
    unused.erase(v);
    seed_pool.erase(v);
  };

  PathSample out;
  std::size_t total = 0;
  std::vector<Vertex> eligible;
  while (total < respondents) {
    Vertex s;
    if (method == PathMethod::high_degree) {
      if (seed_pool.empty()) {
        out.seed_fallback = true;
        s = unused.sample(rng);
      } else {
        s = seed_pool.sample(rng);
      }
    } else {
      s = unused.sample(rng);
    }
    take(s);
    out.paths.push_back({s});
    ++total;
    while (total < respondents) {
      const Vertex v = out.paths.back().back();
      eligible.clear();
      for (Vertex w : g.neighbors(v)) {
        if (!used[w]) eligible.push_back(w);
      }
      if (eligible.empty()) break;
      Vertex next;
      if (method == PathMethod::random) {
        next = eligible[uniform_index(rng, eligible.size())];
      } else {
        std::size_t best = 0;
        for (Vertex w : eligible) best = std::max(best, g.degree(w));
        std::erase_if(eligible, [&](Vertex w) { return g.degree(w) != best; });
        next = eligible[uniform_index(rng, eligible.size())];
      }
      take(next);
      out.paths.back().push_back(next);
      ++total;
    }
  }
  return out;
}

Sample elicit_friends(const Graph& g, const AttributeMap& a, const PathSample& paths,
                      std::size_t max_friends, Category width, std::uint64_t seed) {
  a.validate(g.num_vertices());
  if (width < 1) throw Error("description width must be at least 1");
  Rng rng(seed);
  const Category w = std::min(width, a.g);
  Sample out;
  std::vector<Vertex> pool;
  for (std::size_t t = 0; t < paths.paths.size(); ++t) {
    OccId previous = kNoParent;
    for (Vertex v : paths.paths[t]) {
      const auto id = static_cast<OccId>(out.forest.occurrences.size());
      out.forest.occurrences.push_back(
          {static_cast<std::uint32_t>(t), OccKind::respondent, previous, Description::exact(a[v])});
      out.truth.vertex_of.push_back(v);
      previous = id;

      const auto nb = g.neighbors(v);
      pool.assign(nb.begin(), nb.end());
      const std::size_t k = std::min(max_friends, pool.size());
      // Partial Fisher-Yates: the first k entries become a uniform subset.
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
      }
      for (std::size_t i = 0; i < k; ++i) {
        const Vertex f = pool[i];
        const Category c = a[f];
        const Category lo_min = std::max<Category>(1, c - w + 1);
        const Category lo_max = std::min<Category>(c, a.g - w + 1);
        const Category lo =
            lo_min + static_cast<Category>(uniform_index(rng, static_cast<std::size_t>(lo_max - lo_min + 1)));
        out.forest.occurrences.push_back(
            {static_cast<std::uint32_t>(t), OccKind::friend_, id, Description{lo, lo + w - 1}});
        out.truth.vertex_of.push_back(f);
      }
    }
  }
  out.forest.num_trees = paths.paths.size();
  return out;
}

Sample draw_sample(const Graph& g, const AttributeMap& a, const SampleSpec& spec,
                   std::size_t respondents, std::uint64_t seed) {
  const auto paths = sample_paths(g, spec.method, respondents, derive_seed(seed, "paths", "", 0));
  return elicit_friends(g, a, paths, spec.max_friends, spec.width, derive_seed(seed, "friends", "", 0));
}

std::size_t distinct_vertices(const SealedTruth& truth) {
  std::vector<Vertex> ids = truth.vertex_of;
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

SizedSample draw_sample_for_true_size(const Graph& g, const AttributeMap& a, const SampleSpec& spec,
                                      std::size_t target, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw Error("cannot sample an empty graph");
  std::size_t lo = 1;
  std::size_t hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (distinct_vertices(draw_sample(g, a, spec, mid, seed).truth) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  SizedSample out;
  out.sample = draw_sample(g, a, spec, lo, seed);
  out.respondents = lo;
  out.true_size = distinct_vertices(out.sample.truth);
  return out;
}

TrueNetwork true_network(const SampleForest& forest, const SealedTruth& truth) {
  if (truth.vertex_of.size() != forest.size()) throw Error("truth table does not match forest size");
  TrueNetwork out;
  out.underlying = truth.vertex_of;
  std::sort(out.underlying.begin(), out.underlying.end());
  out.underlying.erase(std::unique(out.underlying.begin(), out.underlying.end()), out.underlying.end());
  auto local = [&](Vertex u) {
    return static_cast<Vertex>(std::lower_bound(out.underlying.begin(), out.underlying.end(), u) -
                               out.underlying.begin());
  };
  out.vertex_of_occurrence.reserve(forest.size());
  for (Vertex u : truth.vertex_of) out.vertex_of_occurrence.push_back(local(u));
  std::vector<Edge> edges;
  for (OccId o = 0; o < forest.size(); ++o) {
    const OccId parent = forest.occurrences[o].parent;
    if (parent == kNoParent) continue;
    edges.push_back({out.vertex_of_occurrence[o], out.vertex_of_occurrence[parent]});
  }
  out.graph = Graph::from_edges(out.underlying.size(), edges);
  return out;
}

void write_forest(std::ostream& out, const SampleForest& forest) {
  for (OccId o = 0; o < forest.size(); ++o) {
    const Occurrence& occ = forest.occurrences[o];
    out << occ.tree << ' ' << o << ' ' << (occ.is_respondent() ? 'R' : 'F') << ' ';
    if (occ.parent == kNoParent) {
      out << -1;
    } else {
      out << occ.parent;
    }
    out << ' ';
    if (occ.is_respondent()) {
      out << occ.label.lo;
    } else {
      out << occ.label.lo << ".." << occ.label.hi;
    }
    out << '\n';
  }
}

SampleForest read_forest(std::istream& in) {
  SampleForest forest;
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  std::uint32_t max_tree = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::tokenize(line, tokens)) continue;
    if (tokens.size() != 5) throw ParseError("forest line needs 5 fields", line_no);
    Occurrence occ;
    const auto tree = detail::parse_int(tokens[0], line_no);
    const auto id = detail::parse_int(tokens[1], line_no);
    const auto parent = detail::parse_int(tokens[3], line_no);
    if (tree < 0) throw ParseError("negative tree id", line_no);
    if (id != static_cast<std::int64_t>(forest.size())) {
      throw ParseError("occurrence ids must be consecutive from 0", line_no);
    }
    if (parent < -1 || parent >= id) throw ParseError("parent must precede its child", line_no);
    occ.tree = static_cast<std::uint32_t>(tree);
    occ.parent = parent < 0 ? kNoParent : static_cast<OccId>(parent);
    if (tokens[2] == "R") {
      occ.kind = OccKind::respondent;
      occ.label = Description::exact(static_cast<Category>(detail::parse_int(tokens[4], line_no)));
    } else if (tokens[2] == "F") {
      occ.kind = OccKind::friend_;
      const auto dots = tokens[4].find("..");
      if (dots == std::string::npos) throw ParseError("friend payload must be lo..hi", line_no);
      occ.label.lo = static_cast<Category>(detail::parse_int(tokens[4].substr(0, dots), line_no));
      occ.label.hi = static_cast<Category>(detail::parse_int(tokens[4].substr(dots + 2), line_no));
      if (occ.parent == kNoParent) throw ParseError("friend occurrence needs a parent", line_no);
    } else {
      throw ParseError("kind must be R or F, got '" + tokens[2] + "'", line_no);
    }
    if (occ.label.lo < 1 || occ.label.lo > occ.label.hi) throw ParseError("bad category range", line_no);
    if (occ.parent != kNoParent) {
      const Occurrence& p = forest.occurrences[occ.parent];
      if (!p.is_respondent() || p.tree != occ.tree) {
        throw ParseError("parent must be a respondent in the same tree", line_no);
      }
    }
    max_tree = std::max(max_tree, occ.tree);
    forest.occurrences.push_back(occ);
  }
  forest.num_trees = forest.occurrences.empty() ? 0 : max_tree + 1;
  return forest;
}

void write_truth(std::ostream& out, const SealedTruth& truth) {
  for (std::size_t o = 0; o < truth.vertex_of.size(); ++o) out << o << ' ' << truth.vertex_of[o] << '\n';
}

SealedTruth read_truth(std::istream& in) {
  SealedTruth truth;
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::tokenize(line, tokens)) continue;
    if (tokens.size() != 2) throw ParseError("truth line needs 2 fields", line_no);
    if (detail::parse_int(tokens[0], line_no) != static_cast<std::int64_t>(truth.vertex_of.size())) {
      throw ParseError("occurrence ids must be consecutive from 0", line_no);
    }
    const auto v = detail::parse_int(tokens[1], line_no);
    if (v < 0) throw ParseError("negative vertex id", line_no);
    truth.vertex_of.push_back(static_cast<Vertex>(v));
  }
  return truth;
}

}  // namespace netrecon
