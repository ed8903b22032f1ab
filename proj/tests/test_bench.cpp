#include <doctest.h>

#include "evsp/bench.hpp"
#include "support.hpp"

using namespace evsp;
using namespace evsp::bench;

namespace {

RunReport solved(double seconds, std::string status = "optimal") {
  RunReport r;
  r.instance = "i";
  r.algorithm = "evsp3";
  r.status = std::move(status);
  r.has_incumbent = r.status == "optimal" || r.status == "feasible-limit";
  r.objective = 100;
  r.best_bound = 100;
  r.gap = 0.0;
  r.solve_seconds = seconds;
  r.total_seconds = seconds;
  r.valid = true;
  return r;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("gap formula") {
    CHECK(*gap_percent(103, 100) == doctest::Approx(3.0));
    CHECK(*gap_percent(274, 274) == 0.0);
    CHECK(!gap_percent(10, 0).has_value());
  }

  TEST_CASE("percent optimal and average time") {
    const std::vector<RunReport> all{solved(1), solved(3)};
    CHECK(percent_optimal(all) == 100.0);
    CHECK(average_solve_seconds(all) == 2.0);
    const std::vector<RunReport> half{solved(1), solved(3, "feasible-limit")};
    CHECK(percent_optimal(half) == 50.0);
    CHECK(percent_optimal({}) == 0.0);
  }

  TEST_CASE("profile: one run solved at 60 s") {
    const auto p = performance_profile({solved(60)});
    REQUIRE(p.size() == 2);
    CHECK(p[0].seconds == 0.0);
    CHECK(p[0].percent_solved == 0.0);
    CHECK(p[1].seconds == 60.0);
    CHECK(p[1].percent_solved == 100.0);
  }

  TEST_CASE("profile: nothing solved stays flat") {
    const auto p = performance_profile({solved(5, "feasible-limit"), solved(7, "infeasible")});
    for (const auto& pt : p) CHECK(pt.percent_solved == 0.0);
  }

  TEST_CASE("profile: two runs at 10 s and 30 s") {
    const auto p = performance_profile({solved(30), solved(10)});
    REQUIRE(p.size() == 3);
    CHECK(p[1].seconds == 10.0);
    CHECK(p[1].percent_solved == 50.0);
    CHECK(p[2].seconds == 30.0);
    CHECK(p[2].percent_solved == 100.0);
    CHECK(profile_csv(p) == "seconds,percent_solved\n0.000,0.0000\n10.000,50.0000\n30.000,100.0000\n");
  }

  TEST_CASE("profile merges equal times") {
    const auto p = performance_profile({solved(10), solved(10)});
    REQUIRE(p.size() == 2);
    CHECK(p[1].percent_solved == 100.0);
  }

  TEST_CASE("csv layout") {
    auto a = solved(1.5);
    a.objective = 100;
    a.best_bound = 103;
    a.gap = 3.0;
    a.params = "p";
    auto zero = solved(2);
    zero.objective = 0;
    zero.best_bound = 0;
    zero.gap.reset();
    RunReport err;
    err.instance = "bad, file";
    err.algorithm = "evsp3";
    err.status = "error";
    err.error = "parse error";
    const std::vector<RunReport> rows{a, zero, err};
    const auto csv = reports_csv(rows);
    CHECK(csv == reports_csv(rows));
    CHECK(csv ==
          "instance,algorithm,status,objective,best_bound,gap_percent,solve_seconds,total_seconds,valid,params,error\n"
          "i,evsp3,optimal,100,103,3.0000,1.500,1.500,yes,p,\n"
          "i,evsp3,optimal,0,0,undefined,2.000,2.000,yes,,\n"
          "\"bad, file\",evsp3,error,,,,0.000,0.000,no,,parse error\n"
          "SUMMARY,evsp3,opt_percent=66.7,,,,1.167,,,,\n");
  }

  TEST_CASE("algorithm names") {
    CHECK(parse_algo("rcbvf") == Algo::Rcbvf);
    CHECK(to_string(Algo::Lrbvf) == "lrbvf");
    CHECK_THROWS_AS(parse_algo("cplex"), std::invalid_argument);
  }

  TEST_CASE("table 1 under the three algorithms") {
    milp::SolverParams params;
    params.time_limit_seconds = 60;
    std::vector<RunReport> rows;
    for (const auto algo : {Algo::Evsp3, Algo::Lrbvf, Algo::Rcbvf}) {
      const auto files = std::vector<std::filesystem::path>{testing::fixture("table1.json")};
      const auto batch = run_batch(files, algo, params);
      REQUIRE(batch.size() == 1);
      rows.push_back(batch[0]);
    }
    CHECK(rows[0].objective == 274);
    CHECK(rows[0].optimal());
    CHECK(rows[2].objective == 274);
    CHECK(rows[2].optimal());
    CHECK(rows[1].objective <= 274);
    for (const auto& r : rows) {
      CHECK(r.valid);
      CHECK(r.instance == "table1");
    }
    const auto csv = reports_csv(rows);
    CHECK(csv.find("SUMMARY,mixed,") != std::string::npos);
  }

  TEST_CASE("failing files become error rows") {
    milp::SolverParams params;
    params.time_limit_seconds = 10;
    const auto rows = run_batch({testing::fixture("missing.json"), testing::fixture("table1.json")}, Algo::Evsp3, params);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "error");
    CHECK(!rows[0].error.empty());
    CHECK(!rows[0].has_incumbent);
    CHECK(rows[1].optimal());
  }

  TEST_CASE("params echo") {
    milp::SolverParams p;
    p.time_limit_seconds = 3600;
    p.cuts = milp::CutSetting::Off;
    p.focus = milp::Focus::Feasibility;
    CHECK(describe_params(p) == "time_limit=3600;threads=1;cuts=off;focus=feasibility");
  }
}
