#include "netrecon/reconstruct.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "netrecon/io.hpp"
#include "netrecon/random.hpp"

namespace netrecon {

double pr_description(const Description& d, const CategoryDistribution& dist) {
  if (d.lo > d.hi) throw Error("empty description");
  return dist.mass(d.lo, d.hi);
}

namespace {

// Number of categories in a description, for exact uniform arithmetic.
double count(const Description& d, const CategoryDistribution& dist) {
  return static_cast<double>(std::min(d.hi, dist.g()) - std::max<Category>(d.lo, 1) + 1);
}

bool overlaps(const Description& a, const Description& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

void insert_sorted(std::vector<GroupId>& v, GroupId x) {
  const auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void erase_sorted(std::vector<GroupId>& v, GroupId x) {
  const auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

ReconState::ReconState(const SampleForest& forest, const CategoryDistribution& dist,
                       std::size_t target_size)
    : dist_(&dist), target_(target_size), alive_count_(forest.size()) {
  const std::size_t n = forest.size();
  if (target_size > n) {
    throw Error("target size " + std::to_string(target_size) + " exceeds occurrence count " +
                std::to_string(n));
  }
  if (n > 0 && target_size == 0) throw Error("target size must be positive");
  alive_.assign(n, true);
  respondent_.resize(n);
  label_.resize(n);
  members_.resize(n);
  adjacency_.resize(n);
  for (OccId o = 0; o < n; ++o) {
    const Occurrence& occ = forest.occurrences[o];
    respondent_[o] = occ.is_respondent();
    label_[o] = occ.label;
    if (occ.label.lo > occ.label.hi) throw Error("occurrence " + std::to_string(o) + " has an empty label");
    members_[o] = {o};
    if (occ.parent != kNoParent) {
      insert_sorted(adjacency_[o], occ.parent);
      insert_sorted(adjacency_[occ.parent], o);
    }
  }
}

bool ReconState::adjacent(GroupId a, GroupId b) const {
  const auto& na = adjacency_.at(a);
  return std::binary_search(na.begin(), na.end(), b);
}

bool ReconState::share_respondent_neighbor(GroupId a, GroupId b) const {
  const auto& na = adjacency_.at(a);
  const auto& nb = adjacency_.at(b);
  auto i = na.begin();
  auto j = nb.begin();
  while (i != na.end() && j != nb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      if (respondent_[*i]) return true;
      ++i;
      ++j;
    }
  }
  return false;
}

double ReconState::pair_probability(GroupId u, GroupId v) const {
  if (u == v) throw Error("pair_probability needs two distinct groups");
  if (!alive(u) || !alive(v)) throw Error("pair_probability on a merged-away group");
  const bool ru = respondent_[u];
  const bool rv = respondent_[v];
  if (ru && rv) return 0.0;
  const double nt = static_cast<double>(target_);
  const CategoryDistribution& dist = *dist_;
  if (ru || rv) {
    const GroupId r = ru ? u : v;
    const GroupId f = ru ? v : u;
    if (adjacent(r, f)) return 0.0;
    if (!label_[f].contains(label_[r].lo)) return 0.0;
    if (dist.is_uniform()) {
      // g / (n_t |d_f|) as a single rounding of an exact ratio.
      return std::min(1.0, static_cast<double>(dist.g()) / (nt * count(label_[f], dist)));
    }
    const double pf = pr_description(label_[f], dist);
    if (pf <= 0.0) return 1.0;
    return std::min(1.0, 1.0 / (nt * pf));
  }
  const auto both = label_[u].intersect(label_[v]);
  if (!both) return 0.0;
  if (share_respondent_neighbor(u, v)) return 0.0;
  if (dist.is_uniform()) {
    // |u & v| g / (n_t |u| |v|), again one rounding of an exact ratio.
    const double num = count(*both, dist) * static_cast<double>(dist.g());
    const double den = nt * count(label_[u], dist) * count(label_[v], dist);
    return std::min(1.0, num / den);
  }
  const double joint = pr_description(*both, dist);
  if (joint <= 0.0) return 0.0;
  return std::min(1.0, joint / (nt * pr_description(label_[u], dist) * pr_description(label_[v], dist)));
}

GroupId ReconState::merge(GroupId u, GroupId v) {
  if (pair_probability(u, v) <= 0.0) {
    throw Error("groups " + std::to_string(u) + " and " + std::to_string(v) + " cannot be coalesced");
  }
  GroupId keep;
  GroupId gone;
  if (respondent_[u] != respondent_[v]) {
    keep = respondent_[u] ? u : v;
    gone = respondent_[u] ? v : u;
  } else {
    keep = std::min(u, v);
    gone = std::max(u, v);
    label_[keep] = *label_[u].intersect(label_[v]);
  }
  for (GroupId w : adjacency_[gone]) {
    erase_sorted(adjacency_[w], gone);
    if (w != keep) {
      insert_sorted(adjacency_[w], keep);
      insert_sorted(adjacency_[keep], w);
    }
  }
  adjacency_[gone].clear();
  auto& into = members_[keep];
  into.insert(into.end(), members_[gone].begin(), members_[gone].end());
  std::sort(into.begin(), into.end());
  members_[gone].clear();
  alive_[gone] = false;
  --alive_count_;
  return keep;
}

Reconstruction ReconState::snapshot() const {
  Reconstruction r;
  std::vector<Vertex> dense(alive_.size(), 0);
  Vertex next = 0;
  for (GroupId g = 0; g < alive_.size(); ++g) {
    if (!alive_[g]) continue;
    dense[g] = next++;
    r.members.push_back(members_[g]);
    r.labels.push_back(label_[g]);
    r.has_respondent.push_back(respondent_[g]);
  }
  r.provenance.assign(alive_.size(), 0);
  std::vector<Edge> edges;
  for (GroupId g = 0; g < alive_.size(); ++g) {
    if (!alive_[g]) continue;
    for (OccId o : members_[g]) r.provenance[o] = dense[g];
    for (GroupId w : adjacency_[g]) {
      if (g < w) edges.push_back({dense[g], dense[w]});
    }
  }
  r.graph = Graph::from_edges(next, edges);
  return r;
}

namespace {

struct Candidate {
  GroupId a;
  GroupId b;
  std::uint32_t version_a;
  std::uint32_t version_b;
  double p;
};

}  // namespace

Reconstruction reconstruct(const SampleForest& forest, const CategoryDistribution& dist,
                           const ReconstructionOptions& options) {
  ReconState state(forest, dist, options.target_size);
  const std::uint64_t max_attempts =
      options.max_attempts > 0 ? options.max_attempts : 1000ULL * std::max<std::size_t>(forest.size(), 1);
  Rng rng(options.seed);
  CoalesceLog log;

  // A pair's probability only changes when one of its groups takes part in a
  // merge, so candidates are stamped with group versions and discarded once
  // stale. Only positive-probability pairs are indexed, which keeps draws
  // uniform over them.
  std::vector<std::uint32_t> version(forest.size(), 0);
  std::vector<Candidate> candidates;
  auto consider = [&](GroupId a, GroupId b) {
    if (state.is_respondent(a) && state.is_respondent(b)) return;
    if (!overlaps(state.label(a), state.label(b))) return;
    const double p = state.pair_probability(a, b);
    if (p > 0.0) candidates.push_back({a, b, version[a], version[b], p});
  };

  {
    std::vector<GroupId> by_lo(forest.size());
    std::iota(by_lo.begin(), by_lo.end(), 0);
    std::stable_sort(by_lo.begin(), by_lo.end(),
                     [&](GroupId x, GroupId y) { return state.label(x).lo < state.label(y).lo; });
    for (std::size_t i = 0; i < by_lo.size(); ++i) {
      const Category hi = state.label(by_lo[i]).hi;
      for (std::size_t j = i + 1; j < by_lo.size() && state.label(by_lo[j]).lo <= hi; ++j) {
        consider(std::min(by_lo[i], by_lo[j]), std::max(by_lo[i], by_lo[j]));
      }
    }
  }

  std::uint64_t attempts = 0;
  auto fail = [&](const std::string& why) {
    Reconstruction partial = state.snapshot();
    partial.log = std::move(log);
    partial.attempts = attempts;
    throw ReconstructionIncomplete(why + " (reached " + std::to_string(state.size()) + " of target " +
                                       std::to_string(state.target_size()) + ")",
                                   std::move(partial));
  };

  while (state.size() > state.target_size()) {
    if (candidates.empty()) fail("no coalescible pair left");
    const std::size_t i = uniform_index(rng, candidates.size());
    const Candidate c = candidates[i];
    if (!state.alive(c.a) || !state.alive(c.b) || version[c.a] != c.version_a ||
        version[c.b] != c.version_b) {
      candidates[i] = candidates.back();
      candidates.pop_back();
      continue;
    }
    if (attempts >= max_attempts) fail("attempt budget exhausted");
    ++attempts;
    if (!bernoulli(rng, c.p)) continue;

    CoalesceEvent event{std::vector<OccId>(state.members(c.a).begin(), state.members(c.a).end()),
                        std::vector<OccId>(state.members(c.b).begin(), state.members(c.b).end()), c.p};
    const GroupId keep = state.merge(c.a, c.b);
    log.events.push_back(std::move(event));
    ++version[keep];
    for (GroupId other = 0; other < forest.size(); ++other) {
      if (other != keep && state.alive(other)) consider(std::min(keep, other), std::max(keep, other));
    }
  }

  Reconstruction out = state.snapshot();
  out.log = std::move(log);
  out.attempts = attempts;
  return out;
}

void write_provenance(std::ostream& out, const Reconstruction& r) {
  for (std::size_t v = 0; v < r.members.size(); ++v) {
    for (OccId o : r.members[v]) out << v << ' ' << o << '\n';
  }
}

std::vector<std::vector<OccId>> read_provenance(std::istream& in) {
  std::vector<std::vector<OccId>> members;
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::tokenize(line, tokens)) continue;
    if (tokens.size() != 2) throw ParseError("provenance line needs 2 fields", line_no);
    const auto v = detail::parse_int(tokens[0], line_no);
    const auto o = detail::parse_int(tokens[1], line_no);
    if (v < 0 || o < 0) throw ParseError("negative id", line_no);
    if (static_cast<std::size_t>(v) >= members.size()) members.resize(static_cast<std::size_t>(v) + 1);
    members[static_cast<std::size_t>(v)].push_back(static_cast<OccId>(o));
  }
  for (auto& m : members) {
    if (m.empty()) throw ParseError("provenance skips a group id", 0);
    std::sort(m.begin(), m.end());
  }
  return members;
}

namespace {

std::string join(const std::vector<OccId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(ids[i]);
  }
  return s;
}

std::vector<OccId> split_ids(const std::string& s, std::size_t line_no) {
  std::vector<OccId> ids;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) ids.push_back(static_cast<OccId>(detail::parse_int(tok, line_no)));
  return ids;
}

}  // namespace

void write_coalesce_log(std::ostream& out, const CoalesceLog& log) {
  out << "event,first,second,probability\n";
  char buf[64];
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& e = log.events[i];
    std::snprintf(buf, sizeof buf, "%.17g", e.probability);
    out << i << ',' << join(e.first) << ',' << join(e.second) << ',' << buf << '\n';
  }
}

CoalesceLog read_coalesce_log(std::istream& in) {
  CoalesceLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4) throw ParseError("coalesce log row needs 4 fields", line_no);
    CoalesceEvent e;
    e.first = split_ids(fields[1], line_no);
    e.second = split_ids(fields[2], line_no);
    try {
      e.probability = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw ParseError("bad probability '" + fields[3] + "'", line_no);
    }
    log.events.push_back(std::move(e));
  }
  return log;
}

}  // namespace netrecon
