#include <doctest.h>

#include <map>

#include "evsp/oracle.hpp"
#include "evsp/reduction.hpp"
#include "support.hpp"

using namespace evsp;
using namespace evsp::reduction;

namespace {

oracle::Limits wide() {
  oracle::Limits l;
  l.max_demands = 64;
  return l;
}

Minutes optimum(const Graph& g) { return oracle::solve_exhaustive(misp_to_evsp(g).instance, wide()).objective; }

Graph cycle(std::size_t n) {
  std::vector<std::string> v;
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(std::to_string(i));
    e.emplace_back(i, (i + 1) % n);
  }
  return Graph(v, e);
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("triangle") {
    const auto g = parse_edge_list("a b\nb c\na c\n");
    const auto r = misp_to_evsp(g);
    CHECK(r.scale == 2);
    CHECK(max_independent_set_bruteforce(g) == 1);
    CHECK(optimum(g) == Minutes(2));
  }

  TEST_CASE("path a-b-c") {
    const auto g = parse_edge_list("a b\nb c\n");
    const auto r = misp_to_evsp(g);
    CHECK(r.scale == 2);
    CHECK(max_independent_set_bruteforce(g) == 2);
    const auto res = oracle::solve_exhaustive(r.instance, wide());
    CHECK(res.objective == Minutes(4));
    // {a, c}: the first and last customers.
    CHECK(res.served == std::vector<std::size_t>{0, 2});
  }

  TEST_CASE("single edge") {
    const auto g = parse_edge_list("u v\n");
    const auto r = misp_to_evsp(g);
    CHECK(r.scale == 1);
    CHECK(optimum(g) == Minutes(1));
    for (const auto& c : r.instance.customers()) CHECK(c.total_rental_time() == Minutes(1));
  }

  TEST_CASE("instance shape") {
    const auto g = parse_edge_list("a b\nb c\n");
    const auto reduced = misp_to_evsp(g);
    const auto& inst = reduced.instance;
    REQUIRE(inst.stations().size() == 1);
    CHECK(inst.stations()[0].capacity == 1);
    CHECK(inst.stations()[0].chargers == 0);
    CHECK(inst.vehicles().size() == 1);
    CHECK(inst.customers().size() == 3);
    CHECK(inst.demands().size() == 4);  // two per edge
    double total = 0;
    for (const auto& d : inst.demands()) total += d.energy;
    CHECK(inst.vehicles()[0].initial_energy == doctest::Approx(total));
    // Both demands of a gadget depart together.
    std::map<Minutes, int> starts;
    for (const auto& d : inst.demands()) ++starts[d.depart];
    for (const auto& [t, n] : starts) CHECK(n == 2);
  }

  TEST_CASE("isolated vertices add one scale unit each") {
    const auto g = parse_edge_list("a b\nc\n");
    const auto r = misp_to_evsp(g);
    CHECK(g.vertices().size() == 3);
    CHECK(max_independent_set_bruteforce(g) == 2);
    CHECK(optimum(g) == Minutes(2 * r.scale));
  }

  TEST_CASE("independent set sizes") {
    CHECK(max_independent_set_bruteforce(parse_edge_list("a b\nb c\na c\n")) == 1);
    CHECK(max_independent_set_bruteforce(parse_edge_list("1\n2\n3\n4\n5\n")) == 5);
    CHECK(max_independent_set_bruteforce(cycle(5)) == 2);
    CHECK_THROWS(max_independent_set_bruteforce(random_graph(21, 10, 1)));
  }

  TEST_CASE("edge list parsing") {
    const auto g = parse_edge_list("# comment\nx y  # trailing\n\ny z\n");
    CHECK(g.vertices() == std::vector<std::string>{"x", "y", "z"});
    CHECK(g.edges().size() == 2);
    CHECK(g.degree(1) == 2);
    CHECK_THROWS_AS(parse_edge_list("a a\n"), GraphError);
    CHECK_THROWS_AS(parse_edge_list("a b\nb a\n"), GraphError);
    CHECK_THROWS_AS(parse_edge_list("a b c\n"), GraphError);
    CHECK_THROWS_AS(Graph({"a"}, {{0, 1}}), GraphError);
  }

  TEST_CASE("value identity on random graphs") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      CAPTURE(seed);
      const auto g = random_graph(2 + seed % 6, 40, seed);
      const auto r = misp_to_evsp(g);
      CHECK(oracle::solve_exhaustive(r.instance, wide()).objective ==
            Minutes(r.scale * static_cast<std::int64_t>(max_independent_set_bruteforce(g))));
    }
  }

  TEST_CASE("gadgets are exclusive and neighbours exclude each other") {
    const auto g = cycle(5);
    const auto inst = misp_to_evsp(g).instance;
    for (const auto& [a, b] : g.edges()) CHECK(!oracle::is_servable(inst, {std::min(a, b), std::max(a, b)}, wide()));
    CHECK(oracle::is_servable(inst, {0, 2}, wide()));
  }
}
