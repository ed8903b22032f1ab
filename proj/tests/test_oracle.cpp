#include <doctest.h>

#include "evsp/generator.hpp"
#include "evsp/oracle.hpp"
#include "support.hpp"

using namespace evsp;

TEST_SUITE("oracle") {
  TEST_CASE("table 1 optimum by enumeration") {
    const auto inst = testing::table1();
    const auto r = oracle::solve_exhaustive(inst);
    CHECK(r.objective == Minutes(274));
    std::set<std::string> ids;
    for (const auto c : r.served) ids.insert(inst.customers()[c].id);
    CHECK(ids == testing::table1_optimum());
  }

  TEST_CASE("serving c3 or c4 together with the optimum set is infeasible") {
    const auto inst = testing::table1();
    std::vector<std::size_t> opt;
    for (const auto& id : testing::table1_optimum()) opt.push_back(inst.customer_index(id));
    std::sort(opt.begin(), opt.end());
    CHECK(oracle::is_servable(inst, opt));
    for (const auto* extra : {"c3", "c4"}) {
      auto more = opt;
      more.push_back(inst.customer_index(extra));
      std::sort(more.begin(), more.end());
      CHECK(!oracle::is_servable(inst, more));
    }
  }

  TEST_CASE("zero demands") {
    const Instance inst("none", 6000, 60, {{"A", 1, 0}}, {{"v1", "A", 6000, false}}, {});
    const auto r = oracle::solve_exhaustive(inst);
    CHECK(r.objective == Minutes(0));
    CHECK(r.served.empty());
  }

  TEST_CASE("single unfulfillable demand") {
    const Instance inst("weak", 6000, 60, {{"A", 1, 0}, {"B", 1, 0}}, {{"v1", "A", 500, false}},
                        {{"c1", {testing::demand("A", 10, "B", 20, 600)}}});
    const auto r = oracle::solve_exhaustive(inst);
    CHECK(r.objective == Minutes(0));
    CHECK(r.served.empty());
  }

  TEST_CASE("charging on a charger makes a demand fulfillable") {
    // 500 stored, 60 per minute from the first event at t = 0.
    const Instance inst("charge", 6000, 60, {{"A", 1, 1}, {"B", 1, 0}}, {{"v1", "A", 500, true}},
                        {{"c0", {testing::demand("B", 0, "A", 1, 10)}}, {"c1", {testing::demand("A", 10, "B", 20, 1000)}}});
    CHECK(oracle::is_servable(inst, {1}));
  }

  TEST_CASE("size caps are enforced") {
    const auto inst = testing::table1();
    oracle::Limits tight;
    tight.max_customers = 6;
    CHECK_THROWS_AS(oracle::solve_exhaustive(inst, tight), oracle::SizeCapError);
    tight = {};
    tight.max_demands = 8;
    CHECK_THROWS_AS(oracle::check_limits(inst, tight), oracle::SizeCapError);
    tight = {};
    tight.max_vehicles = 2;
    CHECK_THROWS_AS(oracle::is_servable(inst, {0}, tight), oracle::SizeCapError);
    CHECK_NOTHROW(oracle::check_limits(inst, {}));
  }

  TEST_CASE("returned set dominates every feasible subset") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      CAPTURE(seed);
      const auto inst = gen::generate_small(seed);
      const auto r = oracle::solve_exhaustive(inst);
      const auto n = inst.customers().size();
      CHECK(r.subsets_checked >= 1);
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> set;
        for (std::size_t c = 0; c < n; ++c) {
          if (mask >> c & 1) set.push_back(c);
        }
        if (oracle::is_servable(inst, set)) CHECK(evaluate_objective(inst, std::span<const std::size_t>(set)) <= r.objective);
      }
      CHECK(oracle::is_servable(inst, r.served));
      CHECK(evaluate_objective(inst, std::span<const std::size_t>(r.served)) == r.objective);
    }
  }

  TEST_CASE("stored witness of the non-monotone structure") {
    const auto inst = load_instance(testing::fixture("nonmonotone.json"));
    const auto c2 = inst.customer_index("c2");
    const auto c4 = inst.customer_index("c4");
    CHECK(!oracle::is_servable(inst, {c4}));
    CHECK(oracle::is_servable(inst, {c2, c4}));
    const auto w = oracle::nonmonotone_witness_in(inst, oracle::WitnessMode::Cardinality);
    REQUIRE(w.has_value());
    CHECK(w->larger.size() == w->smaller.size() + 1);
    CHECK(!oracle::is_servable(inst, w->smaller));
    CHECK(oracle::is_servable(inst, w->larger));
    CHECK(oracle::nonmonotone_witness_in(inst, oracle::WitnessMode::Subset).has_value());
  }

  TEST_CASE("witness search re-verifies what it finds") {
    const auto w = oracle::find_nonmonotone_witness([](std::uint64_t s) { return gen::generate_small(s); }, 1, 50);
    REQUIRE(w.has_value());
    CHECK(!oracle::is_servable(w->instance, w->smaller));
    CHECK(oracle::is_servable(w->instance, w->larger));
    CHECK(std::includes(w->larger.begin(), w->larger.end(), w->smaller.begin(), w->smaller.end()));
  }

  TEST_CASE("empty instance has no witness") {
    const Instance inst("empty", 6000, 60, {{"A", 1, 0}}, {}, {});
    CHECK(!oracle::nonmonotone_witness_in(inst, oracle::WitnessMode::Subset).has_value());
    CHECK(!oracle::nonmonotone_witness_in(inst, oracle::WitnessMode::Cardinality).has_value());
  }
}
