#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "evsp/time_grid.hpp"
#include "support.hpp"

using namespace evsp;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Minimal document builder for load-error cases.
std::string doc(const std::string& customers, const std::string& extra_station = "") {
  return R"({"format_version": 1, "name": "t", "battery_capacity_kwh": 30, "charge_rate_kwh_per_min": 0.17,
  "stations": [{"id": "A", "capacity": 2, "chargers": 1}, {"id": "B", "capacity": 1, "chargers": 0})" +
         extra_station + R"(],
  "vehicles": [{"id": "v1", "station": "A", "initial_energy_kwh": 30, "on_charger": true}],
  "customers": [)" + customers + "]}";
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("rational arithmetic stays exact") {
    const Minutes third(1, 3);
    CHECK(third + third + third == Minutes(1));
    CHECK(Minutes::parse("7.25") == Minutes(29, 4));
    CHECK(Minutes::parse("1/3") == third);
    CHECK(Minutes(29, 4).to_string() == "7.25");
    CHECK(third.to_string() == "1/3");
    CHECK(Minutes(-2, 4) == Minutes(-1, 2));
    CHECK(Minutes(1, 3) < Minutes(1, 2));
  }

  TEST_CASE("table 1 loads with its published dimensions") {
    const auto inst = testing::table1();
    CHECK(inst.stations().size() == 3);
    CHECK(inst.customers().size() == 7);
    CHECK(inst.demands().size() == 9);
    CHECK(inst.spaces().size() == 6);
    CHECK(inst.battery_capacity() == doctest::Approx(30 * kWattMinutesPerKwh));
    CHECK(inst.charge_rate() == doctest::Approx(0.17 * kWattMinutesPerKwh));
  }

  TEST_CASE("empty customer list is a valid instance") {
    const auto inst = parse_instance(doc(""));
    CHECK(inst.customers().empty());
    CHECK(inst.demands().empty());
  }

  TEST_CASE("overlapping demands of one customer are rejected") {
    const auto bad = doc(R"({"id": "c1", "demands": [
      {"from": "A", "depart_min": 10, "to": "B", "arrive_min": 30, "energy_kwh": 1},
      {"from": "B", "depart_min": 20, "to": "A", "arrive_min": 40, "energy_kwh": 1}]})");
    CHECK_THROWS_AS(parse_instance(bad), InvariantError);
  }

  TEST_CASE("load errors are named") {
    CHECK_THROWS_AS(parse_instance("{not json"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"format_version": 1})"), ParseError);
    // Demand energy above the battery capacity.
    CHECK_THROWS_AS(parse_instance(doc(R"({"id": "c1", "demands": [
      {"from": "A", "depart_min": 10, "to": "B", "arrive_min": 30, "energy_kwh": 31}]})")),
                    InvariantError);
    // Unknown station.
    CHECK_THROWS_AS(parse_instance(doc(R"({"id": "c1", "demands": [
      {"from": "Z", "depart_min": 10, "to": "B", "arrive_min": 30, "energy_kwh": 1}]})")),
                    InvariantError);
    // Arrival not after departure.
    CHECK_THROWS_AS(parse_instance(doc(R"({"id": "c1", "demands": [
      {"from": "A", "depart_min": 30, "to": "B", "arrive_min": 30, "energy_kwh": 1}]})")),
                    InvariantError);
    // More chargers than spaces.
    CHECK_THROWS_AS(parse_instance(doc("", R"(, {"id": "C", "capacity": 1, "chargers": 2})")), InvariantError);
  }

  TEST_CASE("canonical files round-trip byte for byte") {
    for (const auto* name : {"table1.json", "nonmonotone.json", "round_trip_charge.json"}) {
      const auto text = read_file(testing::fixture(name));
      CHECK(dump_instance(parse_instance(text)) == text);
    }
  }

  TEST_CASE("decimal kWh values map to exact watt-minutes") {
    const auto inst = testing::table1();
    // c1's first demand, 6.34 kWh.
    CHECK(inst.demands()[inst.demands_of(0)[0]].energy == 380400.0);
  }

  TEST_CASE("table 1 station grid matches a direct enumeration of the demands") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    for (std::size_t s = 0; s < inst.stations().size(); ++s) {
      std::set<Minutes> expected;
      for (const auto& d : inst.demands()) {
        if (d.from == s) expected.insert(d.depart);
        if (d.to == s) expected.insert(d.arrive);
      }
      const auto& got = grid.times(s);
      CHECK(std::vector<Minutes>(expected.begin(), expected.end()) == got);
      CHECK(grid.size(s) == got.size() + 1);
    }
    const auto s1 = inst.station_index("s1");
    const std::vector<Minutes> s1_times{448, 482, 503, 534, 586, 612, 714};
    CHECK(grid.times(s1) == s1_times);
    // 8:06 (486) is an arrival at s2 only.
    CHECK(std::find(grid.times(s1).begin(), grid.times(s1).end(), Minutes(486)) == grid.times(s1).end());
  }

  TEST_CASE("every demand time is on the grid of its stations") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    for (std::size_t d = 0; d < inst.demands().size(); ++d) {
      const auto& dem = inst.demands()[d];
      CHECK(grid.time_at(dem.from, grid.depart_index(d)) == dem.depart);
      CHECK(grid.time_at(dem.to, grid.arrive_index(d)) == dem.arrive);
    }
  }

  TEST_CASE("single demand gives one grid time per station") {
    const Instance inst("one", 1000, 5, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 1000, false}},
                        {{"c1", {testing::demand("A", 10, "B", 20, 1)}}});
    const TimeGrid grid(inst);
    CHECK(grid.times(0) == std::vector<Minutes>{10});
    CHECK(grid.times(1) == std::vector<Minutes>{20});
  }

  TEST_CASE("charge on a charger space is rate times the step") {
    const Instance inst("charge", 1000, 5, {{"A", 1, 1}, {"B", 1, 0}}, {{"v1", "A", 1000, true}},
                        {{"c1", {testing::demand("A", 100, "B", 110, 1)}}, {"c2", {testing::demand("B", 150, "A", 160, 1)}}});
    const TimeGrid grid(inst);
    const auto a = inst.first_space(0);
    REQUIRE(grid.times(0) == std::vector<Minutes>{100, 160});
    CHECK(grid.charge(a, 2) == 300.0);
    CHECK(grid.charge(a, 1) == 0.0);  // first real time follows t_0
    const auto b = inst.first_space(1);
    for (std::size_t k = 0; k < grid.size(1); ++k) CHECK(grid.charge(b, k) == 0.0);
  }

  TEST_CASE("objective of a served set") {
    const auto inst = testing::table1();
    const std::vector<std::string> opt{"c1", "c2", "c5", "c6", "c7"};
    CHECK(evaluate_objective(inst, std::span<const std::string>(opt)) == Minutes(274));
    CHECK(evaluate_objective(inst, std::span<const std::string>()) == Minutes(0));
    const std::vector<std::string> c3{"c3"};
    CHECK(evaluate_objective(inst, std::span<const std::string>(c3)) == Minutes(26));
    const std::vector<std::string> unknown{"c99"};
    CHECK_THROWS(evaluate_objective(inst, std::span<const std::string>(unknown)));
  }

  TEST_CASE("psi places charger vehicles on charger spaces") {
    const auto inst = testing::table1();
    for (std::size_t v = 0; v < inst.vehicles().size(); ++v) {
      const auto p = inst.initial_space()[v];
      CHECK(inst.spaces()[p].has_charger == inst.vehicles()[v].on_charger);
      CHECK(inst.initial_vehicle(p) == v);
    }
  }

  TEST_CASE("solution files round-trip") {
    const auto inst = testing::table1();
    const TimeGrid grid(inst);
    const auto sol = empty_solution(inst, grid);
    const auto text = dump_solution(inst, sol);
    const auto back = parse_solution(inst, text);
    CHECK(dump_solution(inst, back) == text);
    CHECK(back.objective == Minutes(0));
  }
}
