#include "evsp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>
#include <tuple>

#include "evsp/heuristics.hpp"

namespace evsp {

FixingLedger FixingLedger::empty(const Instance& inst, const TimeGrid& grid) {
  FixingLedger ledger;
  for (const auto& sp : inst.spaces()) ledger.space_fixed.emplace_back(grid.size(sp.station), 0);
  ledger.w.assign(inst.customers().size(), WFix::Free);
  return ledger;
}

std::size_t FixingLedger::free_from(std::size_t space) const {
  const auto& row = space_fixed[space];
  std::size_t k = row.size();
  while (k > 0 && !row[k - 1]) --k;
  return k;
}

std::size_t FixingLedger::fixed_point_count() const {
  std::size_t n = 0;
  for (const auto& row : space_fixed) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), 1));
  return n;
}

void FixingLedger::clear_spaces() {
  for (auto& row : space_fixed) std::fill(row.begin(), row.end(), 0);
}

std::string FixingLedger::dump(const Instance& inst, const TimeGrid& grid) const {
  std::ostringstream os;
  for (std::size_t c = 0; c < w.size(); ++c) {
    os << "w " << inst.customers()[c].id << " " << (w[c] == WFix::One ? "1" : w[c] == WFix::Zero ? "0" : "free") << "\n";
  }
  for (std::size_t p = 0; p < space_fixed.size(); ++p) {
    const auto& row = space_fixed[p];
    if (std::find(row.begin(), row.end(), 1) == row.end()) continue;
    os << "space " << inst.spaces()[p].id << " zero at";
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k]) continue;
      os << " " << (k == 0 ? std::string("t0") : grid.time_at(inst.spaces()[p].station, k).to_string());
    }
    os << "\n";
  }
  return os.str();
}

void fix_parking_spaces(const Instance& inst, const TimeGrid& grid, const std::vector<std::size_t>& customers,
                        FixingLedger& ledger, bool count_round_trips) {
  std::vector<std::uint8_t> chosen(inst.customers().size(), 0);
  for (const auto c : customers) chosen.at(c) = 1;

  for (std::size_t s = 0; s < inst.stations().size(); ++s) {
    std::vector<std::size_t> arrivals(grid.size(s), 0);
    std::size_t inbound = 0;
    for (std::size_t d = 0; d < inst.demands().size(); ++d) {
      const auto& dem = inst.demands()[d];
      if (!chosen[dem.customer] || dem.to != s || (dem.from == s && !count_round_trips)) continue;
      ++arrivals[grid.arrive_index(d)];
      ++inbound;
    }
    // Initially empty spaces by class, ascending.
    std::vector<std::size_t> e, u;
    for (std::size_t p = inst.first_space(s); p < inst.first_space(s) + inst.space_count(s); ++p) {
      if (inst.initial_vehicle(p)) continue;
      (inst.spaces()[p].has_charger ? e : u).push_back(p);
    }
    std::size_t e_head = 0, u_head = 0;
    auto k_left = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(inbound) - static_cast<std::ptrdiff_t>(e.size()),
                                           static_cast<std::ptrdiff_t>(u.size()));
    for (std::size_t k = 0; k < grid.size(s); ++k) {
      const auto m = arrivals[k];
      if (m > 0) {
        e_head += std::min(e.size() - e_head, m);
        if (k_left > 0) {
          const auto n = std::min<std::size_t>(static_cast<std::size_t>(k_left), m);
          u_head = std::min(u.size(), u_head + n);
          k_left -= static_cast<std::ptrdiff_t>(n);
        }
      }
      for (std::size_t i = e_head; i < e.size(); ++i) ledger.space_fixed[e[i]][k] = 1;
      for (std::size_t i = u_head; i < u.size(); ++i) ledger.space_fixed[u[i]][k] = 1;
    }
  }
}

namespace {

template <class F>
void for_each_ledger_column(const Evsp3Model& m, const FixingLedger& ledger, F&& f) {
  for (std::size_t p = 0; p < ledger.space_fixed.size(); ++p) {
    for (std::size_t k = 0; k < ledger.space_fixed[p].size(); ++k) {
      if (!ledger.space_fixed[p][k]) continue;
      f(m.vars.y[p][k], 0.0);
      if (const auto it = m.vars.z_out[p].find(k); it != m.vars.z_out[p].end()) f(it->second, 0.0);
      if (const auto it = m.vars.z_in[p].find(k); it != m.vars.z_in[p].end()) f(it->second, 0.0);
    }
  }
  for (std::size_t c = 0; c < ledger.w.size(); ++c) {
    if (ledger.w[c] != WFix::Free) f(m.vars.w[c], ledger.w[c] == WFix::One ? 1.0 : 0.0);
  }
}

}  // namespace

void apply_ledger(Evsp3Model& m, const FixingLedger& ledger) {
  for_each_ledger_column(m, ledger, [&](milp::VarRef v, double value) { m.model.fix_variable(v, value); });
}

void release_ledger(Evsp3Model& m, const FixingLedger& ledger) {
  for_each_ledger_column(m, ledger, [&](milp::VarRef v, double) { m.model.release_variable(v); });
}

std::vector<WFix> reduced_cost_fix(double lp_bound, double incumbent, const std::vector<double>& reduced_costs,
                                   double delta) {
  if (delta < 0.0) delta = 1e-6 * std::max(1.0, std::abs(lp_bound));
  const double gap = std::max(0.0, lp_bound - incumbent);
  std::vector<WFix> out(reduced_costs.size(), WFix::Free);
  for (std::size_t c = 0; c < reduced_costs.size(); ++c) {
    const double r = reduced_costs[c];
    if (r > gap + delta) {
      out[c] = WFix::One;
    } else if (-r > gap + delta) {
      out[c] = WFix::Zero;
    }
  }
  return out;
}

namespace {

// A vehicle parked on one space over grid indices [begin, end]. The stay is
// opened by a drop-off (or the initial placement) and closed by a pick-up (or
// the horizon).
struct Stay {
  std::size_t space = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::optional<std::size_t> in_route;   // route that parks the vehicle
  std::optional<std::size_t> out_route;  // route that takes it away
};

std::vector<Stay> collect_stays(const Instance& inst, const TimeGrid& grid, const std::vector<Route>& routes) {
  // (space, grid index, 0 = arrival / 1 = departure, route)
  std::vector<std::tuple<std::size_t, std::size_t, int, std::size_t>> events;
  for (std::size_t i = 0; i < routes.size(); ++i) {
    events.emplace_back(routes[i].dropoff, grid.arrive_index(routes[i].demand), 0, i);
    events.emplace_back(routes[i].pickup, grid.depart_index(routes[i].demand), 1, i);
  }
  std::sort(events.begin(), events.end());
  std::vector<std::optional<Stay>> open(inst.spaces().size());
  for (const auto p : inst.initial_space()) open[p] = Stay{p, 0, 0, std::nullopt, std::nullopt};
  std::vector<Stay> stays;
  for (const auto& [p, k, type, i] : events) {
    if (type == 0) {
      if (open[p]) throw RepairError("space " + inst.spaces()[p].id + " receives a vehicle while occupied");
      open[p] = Stay{p, k, 0, i, std::nullopt};
    } else {
      if (!open[p]) throw RepairError("pick-up from empty space " + inst.spaces()[p].id);
      open[p]->end = k;
      open[p]->out_route = i;
      stays.push_back(*open[p]);
      open[p].reset();
    }
  }
  for (auto& s : open) {
    if (!s) continue;
    s->end = grid.size(inst.spaces()[s->space].station) - 1;
    stays.push_back(*s);
  }
  return stays;
}

bool touches_fixed(const FixingLedger& ledger, std::size_t space, std::size_t begin, std::size_t end) {
  const auto& row = ledger.space_fixed[space];
  for (std::size_t k = begin; k <= end && k < row.size(); ++k) {
    if (row[k]) return true;
  }
  return false;
}

}  // namespace

bool consistent_with_ledger(const Instance& inst, const TimeGrid& grid, const Solution& sol, const FixingLedger& ledger) {
  std::vector<std::uint8_t> served(inst.customers().size(), 0);
  for (const auto c : sol.served) served[c] = 1;
  for (std::size_t c = 0; c < ledger.w.size(); ++c) {
    if (ledger.w[c] == WFix::One && !served[c]) return false;
    if (ledger.w[c] == WFix::Zero && served[c]) return false;
  }
  for (const auto& st : collect_stays(inst, grid, sol.routes())) {
    if (touches_fixed(ledger, st.space, st.begin, st.end)) return false;
  }
  return true;
}

Solution repair_warm_start(const Instance& inst, const Solution& sol, const FixingLedger& ledger) {
  const TimeGrid grid(inst);
  auto routes = sol.routes();
  auto stays = collect_stays(inst, grid, routes);
  std::sort(stays.begin(), stays.end(), [](const Stay& a, const Stay& b) { return std::tie(a.begin, a.space) < std::tie(b.begin, b.space); });

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> busy(inst.spaces().size());
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < stays.size(); ++i) {
    if (touches_fixed(ledger, stays[i].space, stays[i].begin, stays[i].end)) {
      bad.push_back(i);
    } else {
      busy[stays[i].space].emplace_back(stays[i].begin, stays[i].end);
    }
  }
  if (bad.empty()) return sol;

  auto free_on = [&](std::size_t q, std::size_t b, std::size_t e) {
    if (touches_fixed(ledger, q, b, e)) return false;
    return std::none_of(busy[q].begin(), busy[q].end(), [&](const auto& iv) { return !(iv.second < b || e < iv.first); });
  };
  for (const auto i : bad) {
    const auto& st = stays[i];
    const auto& from = inst.spaces()[st.space];
    const auto first = inst.first_space(from.station);
    const auto last = first + inst.space_count(from.station);
    std::optional<std::size_t> target;
    // Same class first; a charger space may stand in for a plain one.
    for (const bool charger : {from.has_charger, true}) {
      for (std::size_t q = first; q < last && !target; ++q) {
        if (inst.spaces()[q].has_charger == charger && free_on(q, st.begin, st.end)) target = q;
      }
      if (target) break;
    }
    if (!target) {
      throw RepairError("no free compatible space for the stay on " + from.id + " starting at grid index " +
                        std::to_string(st.begin));
    }
    busy[*target].emplace_back(st.begin, st.end);
    if (st.in_route) routes[*st.in_route].dropoff = *target;
    if (st.out_route) routes[*st.out_route].pickup = *target;
  }

  std::vector<Violation> violations;
  auto repaired = build_solution(inst, grid, routes, &violations);
  if (!repaired) {
    throw RepairError("repaired routes fail replay: " + (violations.empty() ? std::string("unknown") : violations.front().detail));
  }
  return *repaired;
}

AlgorithmResult rcbvf(const Instance& inst, const milp::SolverParams& params, const RcbvfOptions& options,
                      milp::Backend* backend, RcbvfTrace* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<milp::Backend> owned;
  if (!backend) {
    owned = milp::make_backend();
    backend = owned.get();
  }
  milp::require_reduced_costs(*backend);
  RcbvfTrace local;
  if (!trace) trace = &local;

  auto m = build_model(inst, true);
  AlgorithmResult result;
  auto remaining = [&] {
    return std::max(1e-3, params.time_limit_seconds - result.stats.solve_seconds);
  };

  std::vector<std::size_t> all(inst.customers().size());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
  auto ledger = FixingLedger::empty(inst, m.grid);
  fix_parking_spaces(inst, m.grid, all, ledger, options.count_round_trips);
  apply_ledger(m, ledger);

  auto lp_params = params;
  lp_params.time_limit_seconds = remaining();
  const auto lp = backend->solve_lp_relaxation(m.model, lp_params);
  result.stats.solve_seconds += lp.wall_seconds;
  if (!lp.has_solution()) throw milp::SolverError("LP relaxation ended with status " + std::string(milp::to_string(lp.status)));
  trace->lp_bound = lp.objective;
  std::vector<double> r_w;
  for (const auto v : m.vars.w) r_w.push_back(lp.reduced_cost(v));

  const auto lp_zeros = fix_lp_zeros(m, lp.values);
  trace->lp_zero_fixed = lp_zeros.size();
  auto bounded = params;
  bounded.time_limit_seconds = std::min(options.maxrun_seconds, remaining());
  const auto first = backend->solve_mip(m.model, bounded, nullptr);
  result.stats.solve_seconds += first.wall_seconds;

  Solution incumbent;
  bool have_incumbent = false;
  if (first.has_solution()) {
    try {
      incumbent = extract_solution(m, first.values);
      have_incumbent = true;
    } catch (const IntegralityError&) {
      have_incumbent = false;
    }
  }
  if (!have_incumbent) {
    incumbent = construct_greedy(inst);
    trace->incumbent_from_greedy = true;
  }
  const double z_low = incumbent.objective.to_double();
  trace->incumbent = z_low;

  ledger.w = reduced_cost_fix(lp.objective, z_low, r_w);
  for (const auto v : lp_zeros) m.model.release_variable(v);
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < all.size(); ++c) {
    if (ledger.w[c] != WFix::Zero) kept.push_back(c);
    if (ledger.w[c] == WFix::One) ++trace->fixed_one;
    if (ledger.w[c] == WFix::Zero) ++trace->fixed_zero;
  }
  fix_parking_spaces(inst, m.grid, kept, ledger, options.count_round_trips);
  apply_ledger(m, ledger);
  trace->space_points_fixed = ledger.fixed_point_count();

  // Warm start: incumbent as is, repaired, or rebuilt greedily inside the
  // fixings.
  std::optional<Solution> start;
  if (consistent_with_ledger(inst, m.grid, incumbent, ledger)) {
    start = incumbent;
    trace->warm_start = "incumbent";
  } else {
    try {
      auto repaired = repair_warm_start(inst, incumbent, ledger);
      if (consistent_with_ledger(inst, m.grid, repaired, ledger)) {
        start = std::move(repaired);
        trace->warm_start = "repaired";
      }
    } catch (const RepairError&) {
    }
  }
  if (!start) {
    GreedyOptions opts;
    std::vector<std::size_t> order;
    for (const auto c : kept) {
      if (ledger.w[c] == WFix::One) order.push_back(c);
    }
    std::vector<std::size_t> rest;
    for (const auto c : kept) {
      if (ledger.w[c] != WFix::One) rest.push_back(c);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      return inst.customers()[a].total_rental_time() > inst.customers()[b].total_rental_time();
    });
    order.insert(order.end(), rest.begin(), rest.end());
    opts.customers = order;
    opts.dropoff_allowed = [&](std::size_t space, std::size_t k) { return k >= ledger.free_from(space); };
    auto rebuilt = construct_greedy(inst, opts);
    if (consistent_with_ledger(inst, m.grid, rebuilt, ledger)) {
      start = std::move(rebuilt);
      trace->warm_start = "greedy";
    }
  }
  std::vector<double> start_values;
  if (start) {
    start_values = assignment_from_solution(m, *start);
    if (!m.model.check_assignment(start_values).empty()) {
      start.reset();
      trace->warm_start = "none";
    }
  }

  auto final_params = params;
  final_params.time_limit_seconds = remaining();
  const auto fin = backend->solve_mip(m.model, final_params, start ? &start_values : nullptr);
  result.stats.solve_seconds += fin.wall_seconds;
  result.stats.status = fin.status;
  result.stats.nodes = fin.node_count;
  trace->final_nodes = fin.node_count;
  if (fin.has_solution()) {
    result.solution = extract_solution(m, fin.values);
    result.stats.max_integrality_violation = max_integrality_violation(m, fin.raw_values);
    result.stats.best_bound = std::max(fin.best_bound, result.solution.objective.to_double());
  } else {
    result.solution = start ? *start : empty_solution(inst, m.grid);
    result.stats.best_bound = lp.objective;
  }
  if (start && start->objective > result.solution.objective) result.solution = *start;
  result.stats.objective = result.solution.objective.to_double();
  trace->ledger = ledger;
  release_ledger(m, ledger);
  result.stats.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace evsp
