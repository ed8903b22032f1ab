#include <doctest.h>

#include <random>

#include "evsp/exact.hpp"
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

std::vector<std::size_t> all_customers(const Instance& inst) {
  std::vector<std::size_t> c(inst.customers().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = i;
  return c;
}

// Station S: three spaces, two chargers, one vehicle on S/1. Empty: S/2
// (charger) and S/3 (plain). One arrival from T at t = 50.
Instance one_arrival() {
  return Instance("one-arrival", 6000, 60, {{"S", 3, 2}, {"T", 1, 0}},
                  {{"v1", "S", 6000, true}, {"v2", "T", 6000, false}}, {{"c1", {testing::demand("T", 40, "S", 50, 600)}}});
}

// A: one plain space with the vehicle. B: charger B/1 and plain B/2, empty.
Instance two_class_target() {
  return Instance("repair", 6000, 60, {{"A", 1, 0}, {"B", 2, 1}}, {{"v1", "A", 6000, false}},
                  {{"c1", {testing::demand("A", 10, "B", 20, 600)}}});
}

}  // namespace

TEST_SUITE("exact") {
  TEST_CASE("parking-space fixing with one inbound demand") {
    const auto inst = one_arrival();
    const TimeGrid grid(inst);
    auto ledger = FixingLedger::empty(inst, grid);
    fix_parking_spaces(inst, grid, all_customers(inst), ledger);
    const auto e1 = *inst.find_space("S/2");
    const auto u1 = *inst.find_space("S/3");
    const auto s = inst.station_index("S");
    REQUIRE(grid.size(s) == 2);  // t_0 and 50
    // k = min(1 - 1, 1) = 0: the arrival releases e1 only.
    CHECK(ledger.fixed(u1, 0));
    CHECK(ledger.fixed(u1, 1));
    CHECK(ledger.fixed(e1, 0));
    CHECK(!ledger.fixed(e1, 1));
    CHECK(ledger.free_from(e1) == 1);
    // Occupied spaces are never fixed.
    CHECK(!ledger.fixed(*inst.find_space("S/1"), 0));
    CHECK(!ledger.fixed(*inst.find_space("T/1"), 1));
  }

  TEST_CASE("no customers fixes every initially empty space everywhere") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    auto ledger = FixingLedger::empty(inst, grid);
    fix_parking_spaces(inst, grid, {}, ledger);
    for (std::size_t p = 0; p < inst.spaces().size(); ++p) {
      const auto s = inst.spaces()[p].station;
      for (std::size_t k = 0; k < grid.size(s); ++k) CHECK(ledger.fixed(p, k) == !inst.initial_vehicle(p).has_value());
    }
  }

  TEST_CASE("enough arrivals at the first instant release everything from then on") {
    // Station S has two empty spaces (one charger, one plain); three demands
    // reach it at t = 30, the first time on its grid.
    const Instance inst("burst", 6000, 60, {{"S", 2, 1}, {"T", 3, 0}},
                        {{"v1", "T", 6000, false}, {"v2", "T", 6000, false}, {"v3", "T", 6000, false}},
                        {{"c1", {testing::demand("T", 10, "S", 30, 600)}},
                         {"c2", {testing::demand("T", 10, "S", 30, 600)}},
                         {"c3", {testing::demand("T", 10, "S", 30, 600)}}});
    const TimeGrid grid(inst);
    auto ledger = FixingLedger::empty(inst, grid);
    fix_parking_spaces(inst, grid, all_customers(inst), ledger);
    const auto s = inst.station_index("S");
    for (std::size_t o = 0; o < inst.space_count(s); ++o) {
      const auto p = inst.first_space(s) + o;
      CHECK(ledger.fixed(p, 0));
      for (std::size_t k = 1; k < grid.size(s); ++k) CHECK(!ledger.fixed(p, k));
    }
  }

  TEST_CASE("round trips count as arrivals unless disabled") {
    // Vehicle on the plain space goes S -> S and may come back to the charger.
    const Instance inst("loop", 6000, 60, {{"S", 2, 1}}, {{"v1", "S", 6000, false}},
                        {{"c1", {testing::demand("S", 10, "S", 20, 600)}}});
    const TimeGrid grid(inst);
    const auto charger = *inst.find_space("S/1");
    auto counted = FixingLedger::empty(inst, grid);
    fix_parking_spaces(inst, grid, all_customers(inst), counted);
    CHECK(!counted.fixed(charger, grid.size(0) - 1));
    auto verbatim = FixingLedger::empty(inst, grid);
    fix_parking_spaces(inst, grid, all_customers(inst), verbatim, false);
    CHECK(verbatim.fixed(charger, grid.size(0) - 1));
  }

  TEST_CASE("never-fixed empty spaces stay within the arrival count") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const auto inst = gen::generate_small(seed);
      const TimeGrid grid(inst);
      std::vector<std::size_t> chosen;
      for (std::size_t c = 0; c < inst.customers().size(); ++c) {
        if (rng() % 3 != 0) chosen.push_back(c);
      }
      auto ledger = FixingLedger::empty(inst, grid);
      fix_parking_spaces(inst, grid, chosen, ledger);
      for (std::size_t s = 0; s < inst.stations().size(); ++s) {
        std::size_t absent = 0, inbound = 0;
        for (std::size_t o = 0; o < inst.space_count(s); ++o) absent += !inst.initial_vehicle(inst.first_space(s) + o);
        for (const auto c : chosen) {
          for (const auto d : inst.demands_of(c)) inbound += inst.demands()[d].to == s;
        }
        for (std::size_t k = 0; k < grid.size(s); ++k) {
          std::size_t open = 0;
          for (std::size_t o = 0; o < inst.space_count(s); ++o) {
            const auto p = inst.first_space(s) + o;
            open += !inst.initial_vehicle(p) && !ledger.fixed(p, k);
          }
          CHECK(open <= std::min(absent, inbound));
        }
      }
    }
  }

  TEST_CASE("ledger release restores the original bounds") {
    const auto inst = testing::table1();
    auto m = build_model(inst);
    const auto lower = m.model.lower_bounds();
    const auto upper = m.model.upper_bounds();
    const auto lp = milp::make_backend("highs")->solve_lp_relaxation(m.model, quick());
    REQUIRE(lp.status == milp::SolveStatus::Optimal);
    const auto lp_fixed = fix_lp_zeros(m, lp.values);
    CHECK(!lp_fixed.empty());
    auto ledger = FixingLedger::empty(inst, m.grid);
    fix_parking_spaces(inst, m.grid, {}, ledger);
    ledger.w[0] = WFix::One;
    ledger.w[2] = WFix::Zero;
    apply_ledger(m, ledger);
    CHECK(m.model.upper_bounds() != upper);
    for (const auto v : lp_fixed) m.model.release_variable(v);
    release_ledger(m, ledger);
    CHECK(m.model.lower_bounds() == lower);
    CHECK(m.model.upper_bounds() == upper);
  }

  TEST_CASE("reduced-cost fixing against the gap") {
    const auto fix = reduced_cost_fix(100, 95, {6, -6, 3, -3, 5});
    CHECK(fix[0] == WFix::One);
    CHECK(fix[1] == WFix::Zero);
    CHECK(fix[2] == WFix::Free);
    CHECK(fix[3] == WFix::Free);
    CHECK(fix[4] == WFix::Free);  // equal to the gap is not enough
  }

  TEST_CASE("reduced-cost fixing with a closed gap") {
    const auto fix = reduced_cost_fix(40, 40, {1e-3, -1e-3, 1e-9, 0});
    CHECK(fix[0] == WFix::One);
    CHECK(fix[1] == WFix::Zero);
    CHECK(fix[2] == WFix::Free);  // within the safety margin
    CHECK(fix[3] == WFix::Free);
  }

  TEST_CASE("reduced-cost fixing follows the sign") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> r(-50, 50);
    std::vector<double> costs(200);
    for (auto& c : costs) c = r(rng);
    const auto fix = reduced_cost_fix(120, 100, costs);
    for (std::size_t i = 0; i < costs.size(); ++i) {
      if (fix[i] == WFix::One) CHECK(costs[i] > 20);
      if (fix[i] == WFix::Zero) CHECK(costs[i] < -20);
      if (std::abs(costs[i]) > 20.001) CHECK(fix[i] != WFix::Free);
    }
  }

  TEST_CASE("ledger dump lists w and space fixings") {
    const auto inst = one_arrival();
    const TimeGrid grid(inst);
    auto ledger = FixingLedger::empty(inst, grid);
    fix_parking_spaces(inst, grid, all_customers(inst), ledger);
    ledger.w[0] = WFix::One;
    const auto text = ledger.dump(inst, grid);
    CHECK(text.find("w c1 1\n") != std::string::npos);
    CHECK(text.find("space S/3 zero at t0 50\n") != std::string::npos);
    CHECK(text.find("space S/2 zero at t0\n") != std::string::npos);
    CHECK(ledger.fixed_point_count() == 3);
    ledger.clear_spaces();
    CHECK(ledger.fixed_point_count() == 0);
  }

  TEST_CASE("repair moves a stay off a fixed plain space onto a free charger") {
    const auto inst = two_class_target();
    const TimeGrid grid(inst);
    const auto plain = *inst.find_space("B/2");
    const auto charger = *inst.find_space("B/1");
    const auto sol = build_solution(inst, grid, {{0, *inst.find_space("A/1"), plain}});
    REQUIRE(sol.has_value());
    REQUIRE(validate(inst, *sol).ok());
    auto ledger = FixingLedger::empty(inst, grid);
    for (std::size_t k = 0; k < grid.size(1); ++k) ledger.space_fixed[plain][k] = 1;
    CHECK(!consistent_with_ledger(inst, grid, *sol, ledger));
    const auto repaired = repair_warm_start(inst, *sol, ledger);
    CHECK(validate(inst, repaired).ok());
    CHECK(consistent_with_ledger(inst, grid, repaired, ledger));
    REQUIRE(repaired.fulfillments.size() == 1);
    CHECK(repaired.fulfillments[0].dropoff == charger);
    CHECK(repaired.objective == sol->objective);
  }

  TEST_CASE("repair leaves a consistent start unchanged") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    const auto sol = construct_greedy(inst);
    const auto ledger = FixingLedger::empty(inst, grid);
    REQUIRE(consistent_with_ledger(inst, grid, sol, ledger));
    const auto same = repair_warm_start(inst, sol, ledger);
    CHECK(dump_solution(inst, same) == dump_solution(inst, sol));
  }

  TEST_CASE("repair fails when the target station is fully fixed") {
    const auto inst = two_class_target();
    const TimeGrid grid(inst);
    const auto sol = build_solution(inst, grid, {{0, 0, *inst.find_space("B/2")}});
    REQUIRE(sol.has_value());
    auto ledger = FixingLedger::empty(inst, grid);
    for (std::size_t o = 0; o < inst.space_count(1); ++o) {
      for (std::size_t k = 0; k < grid.size(1); ++k) ledger.space_fixed[inst.first_space(1) + o][k] = 1;
    }
    CHECK_THROWS_AS(repair_warm_start(inst, *sol, ledger), RepairError);
  }

  TEST_CASE("w fixings are part of ledger consistency") {
    const auto inst = two_class_target();
    const TimeGrid grid(inst);
    auto ledger = FixingLedger::empty(inst, grid);
    ledger.w[0] = WFix::One;
    CHECK(!consistent_with_ledger(inst, grid, empty_solution(inst, grid), ledger));
  }

  TEST_CASE("rcbvf on table 1") {
    const auto inst = testing::table1();
    RcbvfTrace trace;
    const auto r = rcbvf(inst, quick(), {}, nullptr, &trace);
    CHECK(r.stats.status == milp::SolveStatus::Optimal);
    CHECK(r.solution.objective == Minutes(274));
    CHECK(testing::served_set(inst, r.solution) == testing::table1_optimum());
    CHECK(validate(inst, r.solution).ok());
    CHECK(trace.lp_bound + 1e-6 >= 274);
    CHECK(trace.incumbent <= 274 + 1e-6);
    CHECK(trace.warm_start != "none");
  }

  TEST_CASE("rcbvf keeps the optimum that needs a round-trip recharge") {
    const auto inst = load_instance(testing::fixture("round_trip_charge.json"));
    const auto opt = oracle::solve_exhaustive(inst).objective;
    CHECK(opt == Minutes(50));
    CHECK(rcbvf(inst, quick()).solution.objective == opt);
    // Counting only arrivals from other stations cuts the optimum off.
    RcbvfOptions verbatim;
    verbatim.count_round_trips = false;
    CHECK(rcbvf(inst, quick(), verbatim).solution.objective == Minutes(34));
  }

  TEST_CASE("rcbvf equals the oracle on tiny instances") {
    for (std::uint64_t seed = 101; seed <= 130; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_small(seed);
      RcbvfTrace trace;
      const auto r = rcbvf(inst, quick(), {}, nullptr, &trace);
      CHECK(r.solution.objective == oracle::solve_exhaustive(inst).objective);
      CHECK(validate(inst, r.solution).ok());
      for (std::size_t c = 0; c < trace.ledger.w.size(); ++c) {
        if (trace.ledger.w[c] == WFix::One) CHECK(std::binary_search(r.solution.served.begin(), r.solution.served.end(), c));
      }
    }
  }
}
