#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "evsp/instance.hpp"
#include "evsp/solution.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(EVSP_FIXTURES) / name; }

inline evsp::Instance table1() { return evsp::load_instance(fixture("table1.json")); }

inline std::set<std::string> served_set(const evsp::Instance& inst, const evsp::Solution& sol) {
  const auto ids = sol.served_ids(inst);
  return {ids.begin(), ids.end()};
}

inline const std::set<std::string>& table1_optimum() {
  static const std::set<std::string> ids{"c1", "c2", "c5", "c6", "c7"};
  return ids;
}

inline evsp::Demand demand(const std::string& from, std::int64_t depart, const std::string& to, std::int64_t arrive,
                           double energy) {
  return evsp::Demand{from, evsp::Minutes(depart), to, evsp::Minutes(arrive), energy};
}

/// Occupancy conservation y[k] - y[k-1] = arrivals - departures, re-derived
/// from the fulfillments without the library's replay.
inline bool occupancy_conserved(const evsp::Instance& inst, const evsp::TimeGrid& grid, const evsp::Solution& sol) {
  for (std::size_t p = 0; p < inst.spaces().size(); ++p) {
    const auto s = inst.spaces()[p].station;
    const auto& y = sol.schedule.at(p).occupied;
    if (y.size() != grid.size(s)) return false;
    if (y[0] != (inst.initial_vehicle(p) ? 1 : 0)) return false;
    for (std::size_t k = 1; k < grid.size(s); ++k) {
      int delta = 0;
      for (const auto& f : sol.fulfillments) {
        const auto& d = inst.demands()[f.demand];
        if (f.dropoff == p && d.to == s && grid.arrive_index(f.demand) == k) ++delta;
        if (f.pickup == p && d.from == s && grid.depart_index(f.demand) == k) --delta;
      }
      if (static_cast<int>(y[k]) - static_cast<int>(y[k - 1]) != delta) return false;
    }
  }
  return true;
}

/// Energy balance per fulfilled demand: out - in = demand energy.
inline bool energy_conserved(const evsp::Instance& inst, const evsp::Solution& sol, double tol = 1e-6) {
  return std::all_of(sol.fulfillments.begin(), sol.fulfillments.end(), [&](const evsp::Fulfillment& f) {
    return std::abs(f.energy_out - f.energy_in - inst.demands()[f.demand].energy) <= tol;
  });
}

/// Station capacity never exceeded at any grid point.
inline bool capacity_respected(const evsp::Instance& inst, const evsp::TimeGrid& grid, const evsp::Solution& sol) {
  for (std::size_t s = 0; s < inst.stations().size(); ++s) {
    for (std::size_t k = 0; k < grid.size(s); ++k) {
      int used = 0;
      for (std::size_t o = 0; o < inst.space_count(s); ++o) used += sol.schedule[inst.first_space(s) + o].occupied[k];
      if (used > inst.stations()[s].capacity) return false;
    }
  }
  return true;
}

}  // namespace testing
