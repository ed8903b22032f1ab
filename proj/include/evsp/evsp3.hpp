#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "evsp/milp.hpp"
#include "evsp/solution.hpp"
#include "evsp/time_grid.hpp"

namespace evsp {

/// Variables of the energy-flow model, indexed the way the builder creates
/// them. Space/time families use the station grid index (0 is t_0); demand
/// families are indexed by the offset of the space inside its station.
struct Registry {
  std::vector<milp::VarRef> w;                                // [customer]
  std::vector<std::vector<milp::VarRef>> y, l;                // [space][k]
  std::vector<std::vector<milp::VarRef>> x_out, l_out;        // [demand][offset at pick-up station]
  std::vector<std::vector<milp::VarRef>> x_in, l_in;          // [demand][offset at drop-off station]
  std::vector<std::map<std::size_t, milp::VarRef>> z_out, z_in;  // [space] k -> var, only where defined
  /// Row counts keyed by family: "eq2" ... "eq11a", "eq11b".
  std::map<std::string, std::size_t> rows;

  std::size_t variable_count(const std::string& family) const;
};

struct Evsp3Model {
  const Instance* inst = nullptr;
  TimeGrid grid;
  milp::Model model;
  Registry vars;

  explicit Evsp3Model(const Instance& instance) : inst(&instance), grid(instance) {}
};

/// Builds the model. With `relax_implicit` the w, y, z columns are declared
/// implicit binaries; x columns stay binary.
Evsp3Model build_model(const Instance& inst, bool relax_implicit = true);

class IntegralityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest distance from {0, 1} over the w, x, y and z columns.
double max_integrality_violation(const Evsp3Model& m, const std::vector<double>& values);

/// Turns solver values into a Solution. Spaces come from the x columns;
/// energies are recomputed by maximal-charging replay. Throws
/// IntegralityError when a w/x/y/z value is more than 1e-6 away from {0,1}
/// or the replayed occupancy disagrees with the y columns.
Solution extract_solution(const Evsp3Model& m, const std::vector<double>& values);

/// Column values that encode `sol` (used for warm starts).
std::vector<double> assignment_from_solution(const Evsp3Model& m, const Solution& sol);

struct SolveStats {
  milp::SolveStatus status = milp::SolveStatus::Optimal;
  double objective = 0.0;   // incumbent value (lower bound)
  double best_bound = 0.0;  // upper bound
  std::int64_t nodes = 0;   // nodes of the last MIP solve
  double solve_seconds = 0.0;  // inside backend calls only
  double total_seconds = 0.0;
  /// Worst distance from {0,1} of w/x/y/z in the unpolished final values.
  double max_integrality_violation = 0.0;
};

struct AlgorithmResult {
  Solution solution;
  SolveStats stats;
};

/// Solves the full model directly.
AlgorithmResult solve_evsp3(const Instance& inst, const milp::SolverParams& params, milp::Backend* backend = nullptr);

}  // namespace evsp
