// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "evsp/bench.hpp"
#include "evsp/generator.hpp"
#include "evsp/heuristics.hpp"
#include "evsp/oracle.hpp"
#include "evsp/reduction.hpp"
#include "evsp/validator.hpp"
#include "support.hpp"

using namespace evsp;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Solved {
  std::string label;
  const Instance* inst;
  AlgorithmResult result;
};

// Every solve of criteria 1-4, audited again by criteria 5 and 7.
std::vector<Solved> g_solved;
std::vector<Instance> g_instances;  // owns the instances referenced above
int g_failed = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

milp::SolverParams params(double limit) {
  milp::SolverParams p;
  p.time_limit_seconds = limit;
  return p;
}

void criterion1() {
  const auto& inst = g_instances.emplace_back(testing::table1());
  bool ok = true;
  std::ostringstream os;
  for (const auto algo : {bench::Algo::Evsp3, bench::Algo::Rcbvf}) {
    const auto t0 = Clock::now();
    auto r = bench::run_algorithm(inst, algo, params(60));
    const double secs = since(t0);
    const bool good = r.solution.objective == Minutes(274) && testing::served_set(inst, r.solution) == testing::table1_optimum() &&
                      validate(inst, r.solution).ok() && secs < 5.0;
    ok = ok && good;
    os << bench::to_string(algo) << " objective " << r.solution.objective << " in " << secs << " s; ";
    g_solved.push_back({"table1/" + std::string(bench::to_string(algo)), &inst, std::move(r)});
  }
  os << "served c1,c2,c5,c6,c7";
  report(1, ok, os.str());
}

void criteria2and3() {
  const auto t0 = Clock::now();
  int oracle_match = 0, rcbvf_match = 0, fewer_nodes = 0;
  const int n = 50;
  std::string mismatches;
  for (std::uint64_t seed = 1; seed <= static_cast<std::uint64_t>(n); ++seed) {
    const auto& inst = g_instances.emplace_back(gen::generate_small(seed));
    const auto opt = oracle::solve_exhaustive(inst).objective;
    auto plain = solve_evsp3(inst, params(60));
    auto fixed = rcbvf(inst, params(60));
    if (plain.solution.objective == opt) {
      ++oracle_match;
    } else {
      mismatches += " oracle@" + std::to_string(seed);
    }
    if (fixed.solution.objective == plain.solution.objective) {
      ++rcbvf_match;
    } else {
      mismatches += " rcbvf@" + std::to_string(seed);
    }
    fewer_nodes += fixed.stats.nodes <= plain.stats.nodes;
    g_solved.push_back({"small-" + std::to_string(seed) + "/evsp3", &inst, std::move(plain)});
    g_solved.push_back({"small-" + std::to_string(seed) + "/rcbvf", &inst, std::move(fixed)});
  }
  const double secs = since(t0);
  std::ostringstream a, b;
  a << "evsp3 = oracle on " << oracle_match << "/" << n << " in " << secs << " s" << mismatches;
  report(2, oracle_match == n && secs < 600, a.str());
  b << "rcbvf = evsp3 on " << rcbvf_match << "/" << n << "; final nodes <= evsp3 on " << fewer_nodes << "/" << n;
  report(3, rcbvf_match == n && fewer_nodes * 10 >= n * 6, b.str());
}

void criterion4() {
  const int n = 100;
  int valid = 0;
  double slowest = 0.0;
  for (int i = 0; i < n; ++i) {
    const int customers = 30 + (i * 7) % 31;
    const auto& inst = g_instances.emplace_back(gen::generate_grid(customers, static_cast<std::uint64_t>(1000 + i)));
    const auto t0 = Clock::now();
    auto r = lrbvf(inst, params(55));
    slowest = std::max(slowest, since(t0));
    valid += validate(inst, r.solution).ok();
    g_solved.push_back({inst.name() + "/lrbvf", &inst, std::move(r)});
  }
  std::ostringstream os;
  os << "lrbvf validator-ok on " << valid << "/" << n << " grid instances (30-60 customers); slowest " << slowest << " s";
  report(4, valid == n && slowest < 60.0, os.str());
}

void criterion5() {
  double worst = 0.0;
  std::string where;
  for (const auto& s : g_solved) {
    if (s.result.stats.max_integrality_violation > worst) {
      worst = s.result.stats.max_integrality_violation;
      where = s.label;
    }
  }
  std::ostringstream os;
  os << "worst distance of w/x/y/z from {0,1} over " << g_solved.size() << " solves: " << worst
     << (where.empty() ? "" : " (" + where + ")");
  report(5, worst <= 1e-6, os.str());
}

void criterion6() {
  const auto t0 = Clock::now();
  int match = 0;
  const int n = 30;
  oracle::Limits limits;
  limits.max_demands = 64;
  for (int i = 0; i < n; ++i) {
    const auto g = reduction::random_graph(static_cast<std::size_t>(2 + i % 7), 20 + (i * 13) % 60, static_cast<std::uint64_t>(i + 1));
    const auto r = reduction::misp_to_evsp(g);
    const auto alpha = static_cast<std::int64_t>(reduction::max_independent_set_bruteforce(g));
    match += oracle::solve_exhaustive(r.instance, limits).objective == Minutes(r.scale * alpha);
  }
  const double secs = since(t0);
  std::ostringstream os;
  os << "oracle(reduce(g)) = K * alpha(g) on " << match << "/" << n << " graphs in " << secs << " s";
  report(6, match == n && secs < 120, os.str());
}

void criterion7() {
  std::size_t energy = 0, occupancy = 0, capacity = 0, invalid = 0;
  for (const auto& s : g_solved) {
    const TimeGrid grid(*s.inst);
    energy += !testing::energy_conserved(*s.inst, s.result.solution);
    occupancy += !testing::occupancy_conserved(*s.inst, grid, s.result.solution);
    capacity += !testing::capacity_respected(*s.inst, grid, s.result.solution);
    invalid += !validate(*s.inst, s.result.solution).ok();
  }
  std::ostringstream os;
  os << g_solved.size() << " solutions: energy balance violations " << energy << ", occupancy " << occupancy
     << ", capacity " << capacity << ", validator " << invalid;
  report(7, energy + occupancy + capacity + invalid == 0, os.str());
}

void criterion8() {
  auto run = [](double secs, const char* status) {
    bench::RunReport r;
    r.status = status;
    r.solve_seconds = secs;
    return r;
  };
  bool ok = bench::gap_percent(103, 100).value_or(-1) == 3.0;
  ok = ok && !bench::gap_percent(5, 0).has_value();
  ok = ok && bench::percent_optimal({run(1, "optimal"), run(2, "optimal")}) == 100.0;
  const auto one = bench::performance_profile({run(60, "optimal")});
  ok = ok && one.size() == 2 && one[1].seconds == 60 && one[1].percent_solved == 100;
  const auto none = bench::performance_profile({run(60, "feasible-limit")});
  ok = ok && std::all_of(none.begin(), none.end(), [](const bench::ProfilePoint& p) { return p.percent_solved == 0; });
  const auto two = bench::performance_profile({run(30, "optimal"), run(10, "optimal")});
  ok = ok && two.size() == 3 && two[1].seconds == 10 && two[1].percent_solved == 50 && two[2].seconds == 30 &&
       two[2].percent_solved == 100;
  report(8, ok, "gap (103, 100) = 3.0, undefined at LB 0, %Opt 100, profiles 60 s/flat/10-30 s");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> steps{criterion1, criteria2and3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8};
  g_instances.reserve(1000);  // references into this vector must stay valid
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("FAIL error: %s\n", e.what());
      ++g_failed;
    }
  }
  return g_failed == 0 ? 0 : 1;
}
