#include "evsp/reduction.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "evsp/generator.hpp"

namespace evsp::reduction {

Graph::Graph(std::vector<std::string> vertices, std::vector<std::pair<std::size_t, std::size_t>> edges)
    : vertices_(std::move(vertices)), degree_(vertices_.size(), 0) {
  std::set<std::string> names(vertices_.begin(), vertices_.end());
  if (names.size() != vertices_.size()) throw GraphError("repeated vertex name");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : edges) {
    if (a >= vertices_.size() || b >= vertices_.size()) throw GraphError("edge endpoint out of range");
    if (a == b) throw GraphError("self-loop on " + vertices_[a]);
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw GraphError("repeated edge " + vertices_[a] + " " + vertices_[b]);
    ++degree_[a];
    ++degree_[b];
  }
  edges_.assign(seen.begin(), seen.end());
}

Graph parse_edge_list(std::string_view text) {
  std::vector<std::string> vertices;
  std::map<std::string, std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  auto vertex = [&](const std::string& name) {
    const auto [it, added] = index.emplace(name, vertices.size());
    if (added) vertices.push_back(name);
    return it->second;
  };
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() > 2) throw GraphError("line " + std::to_string(line_no) + ": expected 'u v'");
    const auto a = vertex(tokens[0]);
    if (tokens.size() == 2) edges.emplace_back(a, vertex(tokens[1]));
  }
  return Graph(std::move(vertices), std::move(edges));
}

Graph random_graph(std::size_t n, int edge_percent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < n; ++i) vertices.push_back(std::to_string(i + 1));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (gen::uniform(rng, 0, 99) < edge_percent) edges.emplace_back(a, b);
    }
  }
  return Graph(std::move(vertices), std::move(edges));
}

Reduced misp_to_evsp(const Graph& g) {
  constexpr double unit = 60.0;  // watt-minutes per demand
  std::int64_t k = 1;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (g.degree(v) > 0) k = std::lcm(k, static_cast<std::int64_t>(g.degree(v)));
  }
  const std::string station = "s";
  const auto width = std::to_string(g.vertices().size()).size();
  std::vector<Customer> customers;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto num = std::to_string(v + 1);
    customers.push_back(Customer{"c" + std::string(width - num.size(), '0') + num, {}});
  }
  std::int64_t slot = 0;
  auto add = [&](std::size_t v, std::int64_t start, std::int64_t duration) {
    customers[v].demands.push_back(Demand{station, Minutes(start), station, Minutes(start + duration), unit});
  };
  for (const auto& [a, b] : g.edges()) {
    const auto start = slot * (k + 1);
    add(a, start, k / static_cast<std::int64_t>(g.degree(a)));
    add(b, start, k / static_cast<std::int64_t>(g.degree(b)));
    ++slot;
  }
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (g.degree(v) > 0) continue;
    add(v, slot * (k + 1), k);
    ++slot;
  }
  const double energy = unit * static_cast<double>(std::max<std::int64_t>(slot * 2, 1));
  std::vector<Station> stations{Station{station, 1, 0}};
  std::vector<Vehicle> vehicles{Vehicle{"v1", station, energy, false}};
  return Reduced{Instance("misp-" + std::to_string(g.vertices().size()) + "-" + std::to_string(g.edges().size()), energy,
                          unit, std::move(stations), std::move(vehicles), std::move(customers)),
                 k};
}

std::size_t max_independent_set_bruteforce(const Graph& g) {
  const auto n = g.vertices().size();
  if (n > 20) throw GraphError("independent set enumeration is limited to 20 vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [a, b] : g.edges()) {
    adj[a] |= std::uint32_t{1} << b;
    adj[b] |= std::uint32_t{1} << a;
  }
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    bool independent = true;
    for (std::size_t v = 0; v < n && independent; ++v) {
      if ((mask >> v) & 1U) independent = (adj[v] & mask) == 0;
    }
    if (independent) best = std::max(best, static_cast<std::size_t>(std::popcount(mask)));
  }
  return best;
}

}  // namespace evsp::reduction
