#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evsp/instance.hpp"
#include "evsp/time_grid.hpp"

namespace evsp {

/// Absolute tolerance on energies (watt-minutes).
inline constexpr double kEnergyTolerance = 1e-6;

/// Spaces used to fulfil one demand.
struct Route {
  std::size_t demand = 0;  // flat demand index
  std::size_t pickup = 0;  // space index
  std::size_t dropoff = 0;
};

struct Fulfillment {
  std::size_t demand = 0;
  std::size_t pickup = 0;
  std::size_t dropoff = 0;
  double energy_out = 0.0;  // energy in the battery when picked up
  double energy_in = 0.0;   // energy left on return
};

/// y and l of one space over its station grid (index 0 is t_0).
struct SpaceSchedule {
  std::vector<std::uint8_t> occupied;
  std::vector<double> energy;
};

struct Solution {
  std::vector<std::size_t> served;          // customer indices, ascending
  std::vector<Fulfillment> fulfillments;    // ascending demand index
  std::vector<SpaceSchedule> schedule;      // one per space
  Minutes objective;

  std::vector<std::string> served_ids(const Instance& inst) const;
  std::vector<Route> routes() const;
};

/// One failed feasibility check. `check` is the letter of the audit:
/// a service, b pick-up, c drop-off, d occupancy, e energy, f initial
/// state, g objective; `s` marks structural problems.
struct Violation {
  char check = 's';
  std::string detail;
};

/// Event replay shared by the validator and every solution builder.
///
/// Events at the same instant are applied arrivals first, then departures.
/// A drop-off needs the space empty at the previous grid time; a vehicle that
/// arrives at t may leave the same space again at t.
struct SimulationResult {
  std::vector<Violation> violations;
  std::vector<Fulfillment> fulfillments;
  std::vector<SpaceSchedule> schedule;

  bool ok() const { return violations.empty(); }
};

/// Replays routes with maximal charging: every pick-up takes all the energy
/// on the space, charging runs whenever a vehicle is parked on a charger.
SimulationResult replay_routes(const Instance& inst, const TimeGrid& grid, const std::vector<Route>& routes);

/// Re-derives occupancy from the fulfillments and checks the claimed
/// energies of `sol` against the flow rules.
SimulationResult audit_claimed(const Instance& inst, const TimeGrid& grid, const Solution& sol);

/// Builds a Solution from routes by maximal-charging replay. Returns the
/// replay violations through `result` when the routes are infeasible.
std::optional<Solution> build_solution(const Instance& inst, const TimeGrid& grid, std::vector<Route> routes,
                                       std::vector<Violation>* violations = nullptr);

/// Solution with nobody served: vehicles stay where psi puts them.
Solution empty_solution(const Instance& inst, const TimeGrid& grid);

Solution parse_solution(const Instance& inst, std::string_view json_text);
Solution load_solution(const Instance& inst, const std::filesystem::path& path);
std::string dump_solution(const Instance& inst, const Solution& sol);
void save_solution(const Instance& inst, const Solution& sol, const std::filesystem::path& path);

}  // namespace evsp
