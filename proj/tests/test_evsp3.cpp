#include <doctest.h>

#include <set>

#include "evsp/evsp3.hpp"
#include "evsp/generator.hpp"
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

// Column and row counts straight from the index-set definitions.
struct Counts {
  std::size_t w = 0, y = 0, x_out = 0, x_in = 0, z_out = 0, z_in = 0, steps = 0;
};

Counts recount(const Instance& inst) {
  Counts c;
  c.w = inst.customers().size();
  for (std::size_t s = 0; s < inst.stations().size(); ++s) {
    std::set<Minutes> all, deps, arrs;
    for (const auto& d : inst.demands()) {
      if (d.from == s) {
        all.insert(d.depart);
        deps.insert(d.depart);
      }
      if (d.to == s) {
        all.insert(d.arrive);
        arrs.insert(d.arrive);
      }
    }
    const auto cap = static_cast<std::size_t>(inst.stations()[s].capacity);
    c.y += cap * (all.size() + 1);
    c.steps += cap * all.size();
    c.z_out += cap * deps.size();
    c.z_in += cap * arrs.size();
  }
  for (const auto& d : inst.demands()) {
    c.x_out += static_cast<std::size_t>(inst.stations()[d.from].capacity);
    c.x_in += static_cast<std::size_t>(inst.stations()[d.to].capacity);
  }
  return c;
}

void check_counts(const Instance& inst) {
  const auto m = build_model(inst);
  const auto c = recount(inst);
  const auto n = inst.demands().size();
  CHECK(m.vars.variable_count("w") == c.w);
  CHECK(m.vars.variable_count("y") == c.y);
  CHECK(m.vars.variable_count("l") == c.y);
  CHECK(m.vars.variable_count("x_out") == c.x_out);
  CHECK(m.vars.variable_count("l_out") == c.x_out);
  CHECK(m.vars.variable_count("x_in") == c.x_in);
  CHECK(m.vars.variable_count("l_in") == c.x_in);
  CHECK(m.vars.variable_count("z_out") == c.z_out);
  CHECK(m.vars.variable_count("z_in") == c.z_in);
  CHECK(m.model.num_variables() == c.w + 2 * c.y + 2 * c.x_out + 2 * c.x_in + c.z_out + c.z_in);
  auto rows = [&](const char* f) { return m.vars.rows.contains(f) ? m.vars.rows.at(f) : 0; };
  CHECK(rows("eq2") == n);
  CHECK(rows("eq3") == n);
  CHECK(rows("eq8") == n);
  CHECK(rows("eq9") == c.x_out);
  CHECK(rows("eq10") == c.x_in);
  CHECK(rows("eq4") == c.z_out);
  CHECK(rows("eq5") == c.z_in);
  CHECK(rows("eq6") == c.z_in);
  CHECK(rows("eq7") == c.steps);
  CHECK(rows("eq11a") == c.steps);
  CHECK(rows("eq11b") == c.steps);
  CHECK(m.model.num_constraints() == 3 * n + c.x_out + c.x_in + c.z_out + 2 * c.z_in + 3 * c.steps);
}

}  // namespace

TEST_SUITE("evsp3") {
  TEST_CASE("table 1 model size matches a hand recount") {
    const auto inst = testing::table1();
    const auto m = build_model(inst);
    // Grids: s1 7 times, s2 6, s3 5; two spaces per station.
    CHECK(m.vars.variable_count("y") == 42);
    CHECK(m.vars.variable_count("x_out") == 18);
    CHECK(m.vars.variable_count("z_out") == 18);  // departure times 4 + 4 + 1
    CHECK(m.vars.variable_count("z_in") == 18);   // arrival times 3 + 2 + 4
    CHECK(m.model.num_variables() == 199);
    CHECK(m.model.num_constraints() == 225);
    check_counts(inst);
  }

  TEST_CASE("model size matches the recount on generated instances") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) check_counts(gen::generate_small(seed));
    check_counts(gen::generate_grid(20, 3));
  }

  TEST_CASE("column kinds follow the relax flag") {
    const auto inst = testing::table1();
    const auto relaxed = build_model(inst, true);
    const auto strict = build_model(inst, false);
    CHECK(relaxed.model.variable(relaxed.vars.w[0]).kind == milp::VarKind::ImplicitBinary);
    CHECK(relaxed.model.variable(relaxed.vars.y[0][1]).kind == milp::VarKind::ImplicitBinary);
    CHECK(relaxed.model.variable(relaxed.vars.x_out[0][0]).kind == milp::VarKind::Binary);
    CHECK(strict.model.variable(strict.vars.w[0]).kind == milp::VarKind::Binary);
  }

  TEST_CASE("initial state is fixed through psi") {
    const auto inst = testing::table1();
    const auto m = build_model(inst);
    for (std::size_t p = 0; p < inst.spaces().size(); ++p) {
      const auto& y0 = m.model.variable(m.vars.y[p][0]);
      const auto& l0 = m.model.variable(m.vars.l[p][0]);
      const bool parked = inst.initial_vehicle(p).has_value();
      CHECK(y0.lower == (parked ? 1.0 : 0.0));
      CHECK(y0.upper == y0.lower);
      CHECK(l0.upper == (parked ? inst.battery_capacity() : 0.0));
    }
  }

  TEST_CASE("table 1 optimum") {
    const auto inst = testing::table1();
    const auto r = solve_evsp3(inst, quick());
    CHECK(r.stats.status == milp::SolveStatus::Optimal);
    CHECK(r.solution.objective == Minutes(274));
    CHECK(testing::served_set(inst, r.solution) == testing::table1_optimum());
    CHECK(validate(inst, r.solution).ok());
    CHECK(r.stats.max_integrality_violation <= 1e-6);
    const TimeGrid grid(inst);
    CHECK(testing::energy_conserved(inst, r.solution));
    CHECK(testing::occupancy_conserved(inst, grid, r.solution));
    CHECK(testing::capacity_respected(inst, grid, r.solution));
  }

  TEST_CASE("zero demands give objective zero") {
    const Instance inst("none", 1000, 5, {{"A", 2, 1}}, {{"v1", "A", 1000, true}}, {});
    const auto m = build_model(inst);
    CHECK(m.vars.rows.empty());
    const auto r = solve_evsp3(inst, quick());
    CHECK(r.solution.objective == Minutes(0));
    CHECK(r.solution.served.empty());
  }

  TEST_CASE("single servable demand is served") {
    const Instance inst("single", 1000, 5, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 1000, false}},
                        {{"c1", {testing::demand("A", 10, "B", 45, 600)}}});
    const auto r = solve_evsp3(inst, quick());
    CHECK(r.solution.objective == Minutes(35));
    CHECK(validate(inst, r.solution).ok());
  }

  TEST_CASE("all-zero w extracts the empty solution") {
    const auto inst = testing::table1();
    const auto m = build_model(inst);
    const auto values = assignment_from_solution(m, empty_solution(inst, m.grid));
    for (const auto w : m.vars.w) CHECK(values[static_cast<std::size_t>(w.id)] == 0.0);
    const auto sol = extract_solution(m, values);
    CHECK(sol.served.empty());
    CHECK(sol.objective == Minutes(0));
  }

  TEST_CASE("fractional implicit values raise an integrality error") {
    const auto inst = testing::table1();
    const auto m = build_model(inst);
    auto values = assignment_from_solution(m, empty_solution(inst, m.grid));
    values[static_cast<std::size_t>(m.vars.y[1][1].id)] = 0.5;
    CHECK(max_integrality_violation(m, values) == doctest::Approx(0.5));
    CHECK_THROWS_AS(extract_solution(m, values), IntegralityError);
  }

  TEST_CASE("solution encoding satisfies every model row") {
    const auto inst = testing::table1();
    const auto m = build_model(inst);
    const auto r = solve_evsp3(inst, quick());
    const auto values = assignment_from_solution(m, r.solution);
    CHECK(m.model.check_assignment(values).empty());
    CHECK(m.model.objective_value(values) == doctest::Approx(274));
    CHECK(extract_solution(m, values).objective == Minutes(274));
  }

  TEST_CASE("assignment plans of the table 1 optimum") {
    const auto inst = testing::table1();
    const auto sol = solve_evsp3(inst, quick()).solution;
    const auto plans = extract_assignment_plans(inst, sol);
    CHECK(plans.size() == 3);
    std::size_t rentals = 0;
    std::set<std::size_t> seen;
    for (const auto& plan : plans) {
      rentals += plan.rental_count();
      for (std::size_t i = 0; i < plan.events.size(); ++i) {
        const auto& e = plan.events[i];
        if (e.kind == PlanEvent::Kind::Rental) CHECK(seen.insert(e.demand).second);
        if (i > 0) {
          const auto& prev = plan.events[i - 1];
          // The vehicle sits where the previous event left it.
          const auto left_at = prev.kind == PlanEvent::Kind::Rental ? prev.to_space : prev.space;
          CHECK(e.space == left_at);
          REQUIRE(prev.end.has_value());
          REQUIRE(e.start.has_value());
          CHECK(*prev.end <= *e.start);
        }
      }
    }
    // Every fulfilled demand (two for c1, one each for c2, c5, c6, c7).
    CHECK(rentals == sol.fulfillments.size());
    CHECK(rentals == 6);
  }

  TEST_CASE("no rentals leaves one parking event per vehicle") {
    const auto inst = testing::table1();
    const auto plans = extract_assignment_plans(inst, empty_solution(inst, TimeGrid(inst)));
    REQUIRE(plans.size() == 3);
    for (const auto& p : plans) {
      REQUIRE(p.events.size() == 1);
      CHECK(p.events[0].kind == PlanEvent::Kind::Park);
      CHECK(!p.events[0].start.has_value());
    }
  }

  TEST_CASE("round trip with one vehicle is a two-rental plan") {
    const Instance inst("round", 6000, 60, {{"A", 1, 1}, {"B", 1, 0}}, {{"v1", "A", 6000, true}},
                        {{"c1", {testing::demand("A", 10, "B", 20, 1200), testing::demand("B", 30, "A", 40, 1200)}}});
    REQUIRE(oracle::solve_exhaustive(inst).objective == Minutes(20));
    const auto sol = solve_evsp3(inst, quick()).solution;
    CHECK(sol.objective == Minutes(20));
    const auto plans = extract_assignment_plans(inst, sol);
    REQUIRE(plans.size() == 1);
    std::vector<std::size_t> order;
    for (const auto& e : plans[0].events) {
      if (e.kind == PlanEvent::Kind::Rental) order.push_back(e.demand);
    }
    CHECK(order == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("extracted solutions validate on random tiny instances") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_small(seed);
      const auto r = solve_evsp3(inst, quick());
      const TimeGrid grid(inst);
      CHECK(validate(inst, r.solution).ok());
      CHECK(r.stats.max_integrality_violation <= 1e-6);
      CHECK(testing::energy_conserved(inst, r.solution));
      CHECK(testing::occupancy_conserved(inst, grid, r.solution));
      CHECK(testing::capacity_respected(inst, grid, r.solution));
      CHECK(r.stats.best_bound + 1e-6 >= r.stats.objective);
    }
  }
}
