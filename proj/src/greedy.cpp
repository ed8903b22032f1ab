#include <algorithm>
#include <numeric>

#include "evsp/heuristics.hpp"
#include "evsp/validator.hpp"

namespace evsp {

namespace {

struct Stay {
  std::size_t vehicle = 0;
  std::size_t start = 0;             // grid index of arrival (0 for the initial stay)
  std::optional<std::size_t> end;    // grid index of departure
  double energy = 0.0;               // energy when the stay began charging
  Minutes since;                     // time charging began
};

struct State {
  std::vector<std::vector<Stay>> stays;  // per space, chronological
  std::vector<Route> routes;
};

}  // namespace

Solution construct_greedy(const Instance& inst, const GreedyOptions& options) {
  const TimeGrid grid(inst);
  State state;
  state.stays.resize(inst.spaces().size());
  for (std::size_t v = 0; v < inst.vehicles().size(); ++v) {
    const auto p = inst.initial_space()[v];
    const auto& times = grid.times(inst.spaces()[p].station);
    state.stays[p].push_back(
        Stay{v, 0, std::nullopt, inst.vehicles()[v].initial_energy, times.empty() ? Minutes() : times.front()});
  }

  std::vector<std::size_t> order;
  if (options.customers) {
    order = *options.customers;
  } else {
    order.resize(inst.customers().size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inst.customers()[a].total_rental_time() > inst.customers()[b].total_rental_time();
    });
  }

  for (const auto c : order) {
    const State saved = state;
    bool ok = true;
    for (const auto d : inst.demands_of(c)) {
      const auto& dem = inst.demands()[d];
      const auto kd = grid.depart_index(d);

      // Idle vehicle with the most energy; ties go to the lower vehicle id.
      std::optional<std::size_t> pick;
      double best = -1.0;
      std::size_t best_vehicle = 0;
      for (std::size_t p = inst.first_space(dem.from); p < inst.first_space(dem.from) + inst.space_count(dem.from); ++p) {
        if (state.stays[p].empty()) continue;
        const auto& last = state.stays[p].back();
        if (last.end || last.start > kd) continue;
        const double e = parked_energy(inst, p, last.energy, last.since, dem.depart);
        if (e + kEnergyTolerance < dem.energy) continue;
        if (!pick || e > best || (e == best && last.vehicle < best_vehicle)) {
          pick = p;
          best = e;
          best_vehicle = last.vehicle;
        }
      }
      if (!pick) {
        ok = false;
        break;
      }

      const auto ka = grid.arrive_index(d);
      std::optional<std::size_t> drop;
      for (const bool want_charger : {true, false}) {
        for (std::size_t q = inst.first_space(dem.to); q < inst.first_space(dem.to) + inst.space_count(dem.to); ++q) {
          if (inst.spaces()[q].has_charger != want_charger) continue;
          if (options.dropoff_allowed && !options.dropoff_allowed(q, ka)) continue;
          const bool free = std::all_of(state.stays[q].begin(), state.stays[q].end(),
                                        [&](const Stay& s) { return s.end && *s.end < ka; });
          if (free) {
            drop = q;
            break;
          }
        }
        if (drop) break;
      }
      if (!drop) {
        ok = false;
        break;
      }

      state.stays[*pick].back().end = kd;
      state.stays[*drop].push_back(Stay{best_vehicle, ka, std::nullopt, std::max(0.0, best - dem.energy), dem.arrive});
      state.routes.push_back(Route{d, *pick, *drop});
    }
    // The replay is the referee for the grid-level rules.
    if (ok) ok = replay_routes(inst, grid, state.routes).ok();
    if (!ok) state = saved;
  }
  return *build_solution(inst, grid, state.routes);
}

}  // namespace evsp
