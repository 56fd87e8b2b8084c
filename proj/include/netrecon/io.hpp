#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "netrecon/graph.hpp"

namespace netrecon {

/// Result of reading an edge list with arbitrary integer labels.
struct LoadedGraph {
  Graph graph;
  /// Original label of each dense vertex id, ascending.
  std::vector<std::int64_t> labels;
  EdgeDropCounts dropped;
};

/// Reads "u v" lines; '#' lines and blank lines are skipped. Labels are
/// compacted to 0..n-1 in ascending numeric order.
LoadedGraph read_edge_list(std::istream& in);

/// Same text format, but labels are taken as dense ids in [0, n). Used for
/// files this library wrote itself, where isolated vertices must survive.
Graph read_edge_list(std::istream& in, std::size_t n, EdgeDropCounts* dropped = nullptr);

void write_edge_list(std::ostream& out, const Graph& g);

/// "vertex category" lines. Every vertex 0..n-1 must appear exactly once,
/// where n is the number of lines. `g` = 0 infers the category count from
/// the largest label.
AttributeMap read_attributes(std::istream& in, Category g = 0);
void write_attributes(std::ostream& out, const AttributeMap& a);

/// "vertex community" lines, same coverage rule as attributes.
Partition read_partition(std::istream& in);
void write_partition(std::ostream& out, const Partition& p);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

namespace detail {

/// Splits a line on whitespace. Returns false for comment or blank lines.
bool tokenize(const std::string& line, std::vector<std::string>& tokens);

std::int64_t parse_int(const std::string& token, std::size_t line_no);

}  // namespace detail

}  // namespace netrecon
