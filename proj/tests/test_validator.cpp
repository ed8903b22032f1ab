#include <doctest.h>

#include "evsp/evsp3.hpp"
#include "evsp/validator.hpp"
#include "support.hpp"

using namespace evsp;

namespace {

const Solution& table1_solution() {
  static const Solution sol = [] {
    milp::SolverParams p;
    p.time_limit_seconds = 60;
    return solve_evsp3(testing::table1(), p).solution;
  }();
  return sol;
}

std::size_t fulfillment_of(const Solution& sol, std::size_t demand) {
  for (std::size_t i = 0; i < sol.fulfillments.size(); ++i) {
    if (sol.fulfillments[i].demand == demand) return i;
  }
  FAIL("demand not fulfilled");
  return 0;
}

}  // namespace

TEST_SUITE("validator") {
  TEST_CASE("table 1 optimum is feasible") {
    const auto inst = testing::table1();
    const auto report = validate(inst, table1_solution());
    CHECK(report.ok());
    CHECK(report.summary() == "ok\n");
  }

  TEST_CASE("(a) partial service") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    const auto second = inst.demands_of(inst.customer_index("c1"))[1];
    sol.fulfillments.erase(sol.fulfillments.begin() + static_cast<std::ptrdiff_t>(fulfillment_of(sol, second)));
    const auto report = validate(inst, sol);
    CHECK(report.has('a'));
    CHECK(report.summary().find("(a) c1") != std::string::npos);
  }

  TEST_CASE("(a) fulfilled demands of an unserved customer") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    sol.served.erase(std::find(sol.served.begin(), sol.served.end(), inst.customer_index("c2")));
    CHECK(validate(inst, sol).has('a'));
  }

  TEST_CASE("(b) pick-up energy beyond what the space holds") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    auto& f = sol.fulfillments[0];
    f.energy_out += inst.battery_capacity();
    f.energy_in += inst.battery_capacity();
    CHECK(validate(inst, sol).has('b'));
  }

  TEST_CASE("(b) pick-up from an empty space") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    // c5 leaves s2 at 448; only one s2 space holds a vehicle then.
    auto& f = sol.fulfillments[fulfillment_of(sol, inst.demands_of(inst.customer_index("c5"))[0])];
    const auto s2 = inst.station_index("s2");
    f.pickup = f.pickup == inst.first_space(s2) ? inst.first_space(s2) + 1 : inst.first_space(s2);
    CHECK(validate(inst, sol).has('b'));
  }

  TEST_CASE("(c) drop-off into an occupied space, confirmed by replay") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    const auto& base = table1_solution();
    std::size_t found = 0;
    for (std::size_t i = 0; i < base.fulfillments.size(); ++i) {
      const auto s = inst.demands()[base.fulfillments[i].demand].to;
      for (std::size_t o = 0; o < inst.space_count(s); ++o) {
        const auto p = inst.first_space(s) + o;
        if (p == base.fulfillments[i].dropoff) continue;
        auto sol = base;
        sol.fulfillments[i].dropoff = p;
        // Independent check: pure route replay rejects the move as well.
        const auto replay = replay_routes(inst, grid, sol.routes());
        const bool occupied = std::any_of(replay.violations.begin(), replay.violations.end(),
                                          [](const Violation& v) { return v.check == 'c'; });
        if (!occupied) continue;
        CHECK(validate(inst, sol).has('c'));
        ++found;
      }
    }
    CHECK(found > 0);
  }

  TEST_CASE("(d) occupancy that does not follow the movements") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    auto& y = sol.schedule[0].occupied;
    y[1] = y[1] ? 0 : 1;
    CHECK(validate(inst, sol).has('d'));
  }

  TEST_CASE("(e) stored energy above the charging limit") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    auto sol = table1_solution();
    bool mutated = false;
    for (std::size_t p = 0; p < inst.spaces().size() && !mutated; ++p) {
      for (std::size_t k = 1; k < sol.schedule[p].occupied.size() && !mutated; ++k) {
        if (sol.schedule[p].occupied[k] && sol.schedule[p].occupied[k - 1]) {
          sol.schedule[p].energy[k] = inst.battery_capacity() + 1000;
          mutated = true;
        }
      }
    }
    REQUIRE(mutated);
    CHECK(validate(inst, sol).has('e'));
  }

  TEST_CASE("(f) initial state other than psi") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    sol.schedule[inst.initial_space()[0]].energy[0] -= 1000;
    CHECK(validate(inst, sol).has('f'));
  }

  TEST_CASE("(g) objective mismatch") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    sol.objective += Minutes(1);
    const auto report = validate(inst, sol);
    CHECK(report.has('g'));
    CHECK(!report.has('a'));
  }

  TEST_CASE("arrival and departure at one instant share a space") {
    // One vehicle: A -> B over [0, 10), then B -> A from 10. B has one space.
    const Instance inst("boundary", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 6000, false}},
                        {{"c1", {testing::demand("A", 0, "B", 10, 600)}}, {"c2", {testing::demand("B", 10, "A", 20, 600)}}});
    const TimeGrid grid(inst);
    const auto sol = build_solution(inst, grid, {{0, 0, 1}, {1, 1, 0}});
    REQUIRE(sol.has_value());
    CHECK(validate(inst, *sol).ok());
    CHECK(sol->objective == Minutes(20));
  }

  TEST_CASE("replay of the c1 vehicle") {
    const auto inst = testing::table1();
    const auto& sol = table1_solution();
    const auto first = inst.demands_of(inst.customer_index("c1"))[0];
    const auto second = inst.demands_of(inst.customer_index("c1"))[1];
    for (const auto& plan : extract_assignment_plans(inst, sol)) {
      const auto trace = replay_energy(inst, plan);
      CHECK(trace.feasible);
      REQUIRE(trace.entries.size() == plan.events.size());
      for (std::size_t i = 0; i < plan.events.size(); ++i) {
        const auto& e = plan.events[i];
        if (e.kind != PlanEvent::Kind::Rental || e.demand != first) continue;
        // 30 kWh, then 23.66 kWh after the 6.34 kWh trip.
        CHECK(trace.entries[i].before == doctest::Approx(30 * kWattMinutesPerKwh));
        CHECK(trace.entries[i].after == doctest::Approx(23.66 * kWattMinutesPerKwh));
        // Where c1's vehicle goes next it must carry the 5.17 kWh return.
        for (std::size_t j = i + 1; j < plan.events.size(); ++j) {
          if (plan.events[j].kind != PlanEvent::Kind::Rental) continue;
          CHECK(trace.entries[j].before >= inst.demands()[plan.events[j].demand].energy - 1e-6);
          // Parked straight through 8:06-11:23 on a charger: 197 minutes at
          // 0.17 kWh/min refill the battery.
          if (j == i + 2 && plan.events[j].demand == second && inst.spaces()[plan.events[i + 1].space].has_charger) {
            CHECK(trace.entries[j].before == doctest::Approx(30 * kWattMinutesPerKwh));
          }
          break;
        }
      }
    }
  }

  TEST_CASE("replay agrees with the validated energy schedule") {
    const auto inst = testing::table1();
    const auto& sol = table1_solution();
    for (const auto& plan : extract_assignment_plans(inst, sol)) {
      const auto trace = replay_energy(inst, plan);
      for (std::size_t i = 0; i < plan.events.size(); ++i) {
        const auto& e = plan.events[i];
        if (e.kind != PlanEvent::Kind::Rental) continue;
        const auto& f = sol.fulfillments[fulfillment_of(sol, e.demand)];
        CHECK(trace.entries[i].before == doctest::Approx(f.energy_out).epsilon(1e-12));
        CHECK(trace.entries[i].after == doctest::Approx(f.energy_in).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("parking on a plain space keeps the energy constant") {
    const Instance inst("plain", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 2500, false}},
                        {{"c1", {testing::demand("A", 100, "B", 110, 600)}}});
    AssignmentPlan plan;
    plan.vehicle = 0;
    plan.events.push_back({PlanEvent::Kind::Park, 0, 0, 0, std::nullopt, std::nullopt});
    const auto trace = replay_energy(inst, plan);
    CHECK(trace.feasible);
    CHECK(trace.entries[0].after == 2500.0);
    CHECK(parked_energy(inst, 0, 2500, Minutes(0), Minutes(500)) == 2500.0);
  }

  TEST_CASE("rental beyond the stored energy is flagged") {
    const Instance inst("short", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 1000, false}},
                        {{"c1", {testing::demand("A", 10, "B", 20, 1200)}}});
    AssignmentPlan plan;
    plan.vehicle = 0;
    plan.events.push_back({PlanEvent::Kind::Park, 0, 0, 0, std::nullopt, Minutes(10)});
    plan.events.push_back({PlanEvent::Kind::Rental, 0, 1, 0, Minutes(10), Minutes(20)});
    plan.events.push_back({PlanEvent::Kind::Park, 1, 1, 0, Minutes(20), std::nullopt});
    const auto trace = replay_energy(inst, plan);
    CHECK(!trace.feasible);
    CHECK(trace.first_infeasible == std::optional<std::size_t>(1));
  }

  TEST_CASE("charging is capped at the battery capacity") {
    const Instance inst("cap", 6000, 60, {{"A", 1, 1}}, {{"v1", "A", 3000, true}}, {});
    CHECK(parked_energy(inst, 0, 3000, Minutes(0), Minutes(10)) == 3600.0);
    CHECK(parked_energy(inst, 0, 3000, Minutes(0), Minutes(1000)) == 6000.0);
  }

  TEST_CASE("plans of an infeasible solution raise a trace error") {
    const auto inst = testing::table1();
    auto sol = table1_solution();
    auto& f = sol.fulfillments[fulfillment_of(sol, inst.demands_of(inst.customer_index("c5"))[0])];
    const auto s2 = inst.station_index("s2");
    f.pickup = f.pickup == inst.first_space(s2) ? inst.first_space(s2) + 1 : inst.first_space(s2);
    CHECK_THROWS_AS(extract_assignment_plans(inst, sol), TraceError);
  }
}
