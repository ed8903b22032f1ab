#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "evsp/evsp3.hpp"

namespace evsp {

/// LP values at or below this count as zero when fixing columns.
inline constexpr double kLpZeroTolerance = 1e-9;

/// Relax-and-fix heuristic: solve the LP relaxation, fix every x/z column
/// that is zero there, then solve the reduced model with integrality on the
/// x columns only. The all-parked assignment stays feasible after fixing, so
/// it is passed as a starting point and a solution is always returned.
AlgorithmResult lrbvf(const Instance& inst, const milp::SolverParams& params, milp::Backend* backend = nullptr);

/// Fixes to zero the x_out/x_in/z_out/z_in columns whose value is at most
/// kLpZeroTolerance. Returns the fixed columns.
std::vector<milp::VarRef> fix_lp_zeros(Evsp3Model& m, const std::vector<double>& lp_values);

struct GreedyOptions {
  /// Customers to try, in order. Empty: all customers by decreasing total
  /// rental time, ties by id.
  std::optional<std::vector<std::size_t>> customers;
  /// May a vehicle be dropped at `space` from grid index `k` onwards?
  std::function<bool(std::size_t space, std::size_t k)> dropoff_allowed;
};

/// Deterministic constructive heuristic without any MILP solve. Customers are
/// taken one at a time; each demand takes the idle vehicle with the most
/// energy at its pick-up station and parks on a free charger space when one
/// exists, else on a free plain space. A customer whose demands cannot all be
/// placed is rolled back.
Solution construct_greedy(const Instance& inst, const GreedyOptions& options = {});

}  // namespace evsp
