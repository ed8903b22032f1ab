#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "evsp/evsp3.hpp"

namespace evsp {

enum class WFix { Free, Zero, One };

/// Variable fixings made by the exact algorithm.
struct FixingLedger {
  /// [space][grid index]: y, z_out and z_in fixed to zero at that point.
  std::vector<std::vector<std::uint8_t>> space_fixed;
  /// Per customer.
  std::vector<WFix> w;

  static FixingLedger empty(const Instance& inst, const TimeGrid& grid);

  bool fixed(std::size_t space, std::size_t k) const { return space_fixed[space][k] != 0; }
  /// First grid index from which the space is never fixed again.
  std::size_t free_from(std::size_t space) const;
  std::size_t fixed_point_count() const;
  void clear_spaces();
  /// Text listing for audits.
  std::string dump(const Instance& inst, const TimeGrid& grid) const;
};

/// Parking-space fixing. For every station, initially empty spaces that no
/// arrival (of a customer in `customers`) can need yet are fixed to zero;
/// charger spaces are released first, in ascending order.
///
/// With `count_round_trips` off only arrivals from other stations count.
/// That variant can cut off every optimum: a round trip that leaves a plain
/// space may need an empty charger space on return to recharge.
void fix_parking_spaces(const Instance& inst, const TimeGrid& grid, const std::vector<std::size_t>& customers,
                        FixingLedger& ledger, bool count_round_trips = true);

/// Applies the ledger's fixings to the model bounds.
void apply_ledger(Evsp3Model& m, const FixingLedger& ledger);
/// Restores original bounds on every column the ledger touches.
void release_ledger(Evsp3Model& m, const FixingLedger& ledger);

/// Reduced-cost fixing of the w columns for a maximisation with LP bound
/// `lp_bound` and incumbent `incumbent`: w_c = 1 when r_c > gap + delta,
/// w_c = 0 when -r_c > gap + delta. A negative delta selects the default
/// 1e-6 * max(1, |lp_bound|).
std::vector<WFix> reduced_cost_fix(double lp_bound, double incumbent, const std::vector<double>& reduced_costs,
                                   double delta = -1.0);

class RepairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Does the solution touch a fixed space point or contradict a w fixing?
bool consistent_with_ledger(const Instance& inst, const TimeGrid& grid, const Solution& sol, const FixingLedger& ledger);

/// Moves every stay that touches a fixed space point to a free space of the
/// same station with the same or a better charging class, then replays the
/// energies. Throws RepairError when some stay has nowhere to go.
Solution repair_warm_start(const Instance& inst, const Solution& sol, const FixingLedger& ledger);

struct RcbvfOptions {
  double maxrun_seconds = 720.0;
  bool count_round_trips = true;
};

struct RcbvfTrace {
  double lp_bound = 0.0;
  double incumbent = 0.0;
  bool incumbent_from_greedy = false;
  std::size_t fixed_one = 0;
  std::size_t fixed_zero = 0;
  std::size_t lp_zero_fixed = 0;
  std::size_t space_points_fixed = 0;
  std::string warm_start = "none";  // "incumbent", "repaired", "greedy", "none"
  std::int64_t final_nodes = 0;
  FixingLedger ledger;
};

/// Reduced-cost-based variable fixing: parking-space fixing, LP bound,
/// bounded solve for an incumbent, reduced-cost fixing of w, parking-space
/// fixing for the remaining customers, repaired warm start, final solve.
AlgorithmResult rcbvf(const Instance& inst, const milp::SolverParams& params, const RcbvfOptions& options = {},
                      milp::Backend* backend = nullptr, RcbvfTrace* trace = nullptr);

}  // namespace evsp
