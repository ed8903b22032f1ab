#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evsp/instance.hpp"

namespace evsp::reduction {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Simple undirected graph without self-loops.
class Graph {
 public:
  Graph() = default;
  /// Throws GraphError on self-loops, repeated edges or unknown endpoints.
  Graph(std::vector<std::string> vertices, std::vector<std::pair<std::size_t, std::size_t>> edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  /// Each edge with first < second, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  std::size_t degree(std::size_t v) const { return degree_[v]; }

 private:
  std::vector<std::string> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::size_t> degree_;
};

/// One "u v" pair per line; a line with a single name adds an isolated
/// vertex; '#' starts a comment. Vertices are ordered by first appearance.
Graph parse_edge_list(std::string_view text);

/// G(n, p) graph with p = percent / 100 and vertices "1".."n".
Graph random_graph(std::size_t n, int edge_percent, std::uint64_t seed);

struct Reduced {
  Instance instance;
  /// Durations are scaled by this factor: optimum = scale * alpha.
  std::int64_t scale = 1;
};

/// One station with a single plain space and one vehicle. Every edge becomes
/// a time slot in which both endpoint customers want the vehicle at once,
/// each for scale / degree minutes; every isolated vertex gets a slot of its
/// own with a single demand of `scale` minutes.
Reduced misp_to_evsp(const Graph& g);

/// Maximum independent set size by subset enumeration (at most 20 vertices).
std::size_t max_independent_set_bruteforce(const Graph& g);

}  // namespace evsp::reduction
