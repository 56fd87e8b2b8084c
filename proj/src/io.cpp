#include "netrecon/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "netrecon/error.hpp"

namespace netrecon {
namespace detail {

bool tokenize(const std::string& line, std::vector<std::string>& tokens) {
  tokens.clear();
  std::size_t i = line.find_first_not_of(" \t\r");
  if (i == std::string::npos || line[i] == '#') return false;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return !tokens.empty();
}

std::int64_t parse_int(const std::string& token, std::size_t line_no) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("expected an integer, got '" + token + "'", line_no);
  }
  return value;
}

}  // namespace detail

namespace {

struct RawPair {
  std::int64_t a;
  std::int64_t b;
};

std::vector<RawPair> read_pairs(std::istream& in, const char* what) {
  std::vector<RawPair> pairs;
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::tokenize(line, tokens)) continue;
    if (tokens.size() != 2) {
      throw ParseError(std::string("expected two tokens in ") + what + " line, got " +
                           std::to_string(tokens.size()),
                       line_no);
    }
    pairs.push_back({detail::parse_int(tokens[0], line_no), detail::parse_int(tokens[1], line_no)});
  }
  if (pairs.empty()) throw ParseError(std::string("empty ") + what, 0);
  return pairs;
}

// Per-vertex values where each id 0..n-1 appears exactly once.
std::vector<std::int64_t> read_vertex_table(std::istream& in, const char* what) {
  const auto pairs = read_pairs(in, what);
  std::vector<std::int64_t> values(pairs.size());
  std::vector<bool> seen(pairs.size(), false);
  for (const auto& [v, value] : pairs) {
    if (v < 0 || static_cast<std::size_t>(v) >= pairs.size() || seen[static_cast<std::size_t>(v)]) {
      throw ParseError(std::string(what) + " must list every vertex 0..n-1 exactly once (bad id " +
                           std::to_string(v) + ")",
                       0);
    }
    seen[static_cast<std::size_t>(v)] = true;
    values[static_cast<std::size_t>(v)] = value;
  }
  return values;
}

}  // namespace

LoadedGraph read_edge_list(std::istream& in) {
  const auto pairs = read_pairs(in, "edge list");
  LoadedGraph out;
  out.labels.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    out.labels.push_back(p.a);
    out.labels.push_back(p.b);
  }
  std::sort(out.labels.begin(), out.labels.end());
  out.labels.erase(std::unique(out.labels.begin(), out.labels.end()), out.labels.end());

  auto id_of = [&](std::int64_t label) {
    return static_cast<Vertex>(std::lower_bound(out.labels.begin(), out.labels.end(), label) -
                               out.labels.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) edges.push_back({id_of(p.a), id_of(p.b)});
  out.graph = Graph::from_edges(out.labels.size(), edges, &out.dropped);
  return out;
}

Graph read_edge_list(std::istream& in, std::size_t n, EdgeDropCounts* dropped) {
  std::vector<Edge> edges;
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::tokenize(line, tokens)) continue;
    if (tokens.size() != 2) {
      throw ParseError("expected two tokens in edge list line, got " + std::to_string(tokens.size()),
                       line_no);
    }
    const auto a = detail::parse_int(tokens[0], line_no);
    const auto b = detail::parse_int(tokens[1], line_no);
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) {
      throw ParseError("vertex id out of range [0, " + std::to_string(n) + ")", line_no);
    }
    edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
  }
  return Graph::from_edges(n, edges, dropped);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

AttributeMap read_attributes(std::istream& in, Category g) {
  const auto values = read_vertex_table(in, "attribute file");
  AttributeMap a;
  a.category.reserve(values.size());
  Category max_seen = 1;
  for (auto value : values) {
    a.category.push_back(static_cast<Category>(value));
    max_seen = std::max(max_seen, static_cast<Category>(value));
  }
  a.g = g > 0 ? g : max_seen;
  a.validate(a.category.size());
  return a;
}

void write_attributes(std::ostream& out, const AttributeMap& a) {
  for (std::size_t v = 0; v < a.size(); ++v) out << v << ' ' << a.category[v] << '\n';
}

Partition read_partition(std::istream& in) {
  const auto values = read_vertex_table(in, "partition file");
  std::vector<std::uint32_t> labels;
  labels.reserve(values.size());
  for (auto value : values) {
    if (value < 0) throw ParseError("negative community id", 0);
    labels.push_back(static_cast<std::uint32_t>(value));
  }
  return Partition(std::move(labels));
}

void write_partition(std::ostream& out, const Partition& p) {
  for (std::size_t v = 0; v < p.size(); ++v) out << v << ' ' << p[static_cast<Vertex>(v)] << '\n';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path.string());
  return out;
}

}  // namespace netrecon
