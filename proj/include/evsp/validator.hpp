#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evsp/solution.hpp"

namespace evsp {

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(char check) const;
  /// "ok" or one line per violation, e.g. "(c) c4#1 dropped off ...".
  std::string summary() const;
};

/// Audits a solution against the instance: (a) all-or-nothing service,
/// (b) pick-up energy, (c) drop-off into an empty space, (d) occupancy
/// bookkeeping, (e) energy schedule within charging and capacity limits,
/// (f) initial state, (g) objective. Occupancy is re-derived from the
/// fulfillments; the stored schedule is only cross-checked.
ValidationReport validate(const Instance& inst, const Solution& sol);

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanEvent {
  enum class Kind { Park, Rental };
  Kind kind = Kind::Park;
  std::size_t space = 0;     // parked space, or pick-up space of a rental
  std::size_t to_space = 0;  // drop-off space of a rental
  std::size_t demand = 0;    // rental only
  std::optional<Minutes> start;  // empty: since t_0
  std::optional<Minutes> end;    // empty: until the end of the horizon
};

/// Chronological park/rent sequence of one vehicle.
struct AssignmentPlan {
  std::size_t vehicle = 0;
  std::vector<PlanEvent> events;

  std::size_t rental_count() const;
};

/// Follows each vehicle from its initial space through the fulfillments.
/// Throws TraceError when a pick-up finds no vehicle or a drop-off finds the
/// space taken.
std::vector<AssignmentPlan> extract_assignment_plans(const Instance& inst, const Solution& sol);

struct EnergyTrace {
  struct Entry {
    double before = 0.0;
    double after = 0.0;
    Minutes from;  // start of the interval the entry covers
  };
  std::vector<Entry> entries;  // one per plan event
  bool feasible = true;
  std::optional<std::size_t> first_infeasible;  // event index
};

/// Energy along a plan: rentals consume their demand energy, parking on a
/// charger adds mu per minute up to L. Charging of the initial stay starts at
/// the station's first event time.
EnergyTrace replay_energy(const Instance& inst, const AssignmentPlan& plan);

/// Energy of a vehicle parked since `from` with `energy` at that time.
double parked_energy(const Instance& inst, std::size_t space, double energy, const Minutes& from, const Minutes& t);

}  // namespace evsp
