#include <doctest.h>

#include "evsp/generator.hpp"
#include "evsp/heuristics.hpp"
#include "evsp/oracle.hpp"
#include "evsp/validator.hpp"
#include "support.hpp"

using namespace evsp;

namespace {

milp::SolverParams quick() {
  milp::SolverParams p;
  p.time_limit_seconds = 60;
  return p;
}

}  // namespace

TEST_SUITE("heuristics") {
  TEST_CASE("lrbvf on table 1 is feasible and bounded by the optimum") {
    const auto inst = testing::table1();
    const auto r = lrbvf(inst, quick());
    CHECK(validate(inst, r.solution).ok());
    CHECK(r.solution.objective <= Minutes(274));
    CHECK(r.stats.max_integrality_violation <= 1e-6);
  }

  TEST_CASE("lrbvf without demands") {
    const Instance inst("none", 1000, 5, {{"A", 1, 0}}, {{"v1", "A", 1000, false}}, {});
    const auto r = lrbvf(inst, quick());
    CHECK(r.solution.objective == Minutes(0));
    CHECK(r.solution.served.empty());
  }

  TEST_CASE("lrbvf against the oracle on tiny instances") {
    int exact = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_small(seed);
      const auto r = lrbvf(inst, quick());
      const auto opt = oracle::solve_exhaustive(inst).objective;
      CHECK(validate(inst, r.solution).ok());
      CHECK(r.solution.objective <= opt);
      exact += r.solution.objective == opt;
    }
    MESSAGE("lrbvf matched the oracle on " << exact << " of 20");
  }

  TEST_CASE("lrbvf solutions validate on generated grid instances") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_grid(30, seed);
      const auto r = lrbvf(inst, quick());
      CHECK(validate(inst, r.solution).ok());
    }
  }

  TEST_CASE("LP fixing keeps the all-parked assignment feasible") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_grid(20, seed);
      auto m = build_model(inst);
      const auto backend = milp::make_backend("highs");
      const auto lp = backend->solve_lp_relaxation(m.model, quick());
      REQUIRE(lp.status == milp::SolveStatus::Optimal);
      const auto fixed = fix_lp_zeros(m, lp.values);
      CHECK(!fixed.empty());
      for (const auto v : fixed) CHECK(m.model.variable(v).upper == 0.0);
      const auto parked = assignment_from_solution(m, empty_solution(inst, m.grid));
      CHECK(m.model.check_assignment(parked).empty());
    }
  }

  TEST_CASE("relaxation bound dominates the MIP which dominates the heuristics") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_small(seed);
      const auto m = build_model(inst);
      const auto lp = milp::make_backend("highs")->solve_lp_relaxation(m.model, quick());
      const auto mip = solve_evsp3(inst, quick()).solution.objective.to_double();
      CHECK(lp.objective + 1e-6 >= mip);
      CHECK(mip >= lrbvf(inst, quick()).solution.objective.to_double());
      CHECK(mip >= construct_greedy(inst).objective.to_double());
    }
  }

  TEST_CASE("greedy on table 1 is feasible") {
    const auto inst = testing::table1();
    const auto sol = construct_greedy(inst);
    CHECK(validate(inst, sol).ok());
    CHECK(sol.objective <= Minutes(274));
  }

  TEST_CASE("greedy serves a single fulfillable customer") {
    const Instance inst("one", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 6000, false}},
                        {{"c1", {testing::demand("A", 10, "B", 40, 3000)}}});
    const auto sol = construct_greedy(inst);
    CHECK(sol.served == std::vector<std::size_t>{0});
    CHECK(validate(inst, sol).ok());
  }

  TEST_CASE("greedy returns the empty solution when nobody is servable") {
    // Needs 5000 but the only vehicle holds 1000 on a plain space.
    const Instance inst("none", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 1000, false}},
                        {{"c1", {testing::demand("A", 10, "B", 40, 5000)}},
                         {"c2", {testing::demand("B", 10, "A", 40, 100)}}});
    const auto sol = construct_greedy(inst);
    CHECK(sol.served.empty());
    CHECK(sol.fulfillments.empty());
    CHECK(validate(inst, sol).ok());
  }

  TEST_CASE("greedy rolls back a customer it cannot finish") {
    // c1's second leg needs a vehicle at B before anyone arrives there.
    const Instance inst("rollback", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 6000, false}},
                        {{"c1", {testing::demand("A", 10, "B", 100, 600), testing::demand("B", 5000, "A", 5010, 5800)}},
                         {"c2", {testing::demand("A", 20, "B", 30, 600)}}});
    const auto sol = construct_greedy(inst);
    CHECK(validate(inst, sol).ok());
    CHECK(sol.served == std::vector<std::size_t>{1});
  }

  TEST_CASE("greedy honours the customer list and drop-off filter") {
    const auto inst = testing::table1();
    GreedyOptions opt;
    opt.customers = std::vector<std::size_t>{inst.customer_index("c3")};
    const auto sol = construct_greedy(inst, opt);
    CHECK(sol.served_ids(inst) == std::vector<std::string>{"c3"});
    GreedyOptions none;
    none.dropoff_allowed = [](std::size_t, std::size_t) { return false; };
    CHECK(construct_greedy(inst, none).served.empty());
  }

  TEST_CASE("lrbvf is at least as good as greedy on most instances") {
    int wins = 0;
    const int n = 10;
    for (std::uint64_t seed = 1; seed <= static_cast<std::uint64_t>(n); ++seed) {
      const auto inst = gen::generate_grid(30, seed);
      wins += lrbvf(inst, quick()).solution.objective >= construct_greedy(inst).objective;
    }
    MESSAGE("lrbvf >= greedy on " << wins << " of " << n);
    CHECK(wins * 10 >= n * 9);
  }
}
