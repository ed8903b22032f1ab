#include <algorithm>
#include <chrono>
#include <memory>

#include "evsp/heuristics.hpp"

namespace evsp {

std::vector<milp::VarRef> fix_lp_zeros(Evsp3Model& m, const std::vector<double>& lp_values) {
  std::vector<milp::VarRef> fixed;
  auto consider = [&](milp::VarRef v) {
    if (m.model.is_fixed(v)) return;
    if (lp_values.at(static_cast<std::size_t>(v.id)) <= kLpZeroTolerance) {
      m.model.fix_variable(v, 0.0);
      fixed.push_back(v);
    }
  };
  for (const auto* fam : {&m.vars.x_out, &m.vars.x_in}) {
    for (const auto& row : *fam) {
      for (const auto v : row) consider(v);
    }
  }
  for (const auto* fam : {&m.vars.z_out, &m.vars.z_in}) {
    for (const auto& row : *fam) {
      for (const auto& [k, v] : row) consider(v);
    }
  }
  return fixed;
}

AlgorithmResult lrbvf(const Instance& inst, const milp::SolverParams& params, milp::Backend* backend) {
  const auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<milp::Backend> owned;
  if (!backend) {
    owned = milp::make_backend();
    backend = owned.get();
  }
  auto m = build_model(inst, true);
  AlgorithmResult result;

  const auto lp = backend->solve_lp_relaxation(m.model, params);
  result.stats.solve_seconds += lp.wall_seconds;
  if (!lp.has_solution()) throw milp::SolverError("LP relaxation ended with status " + std::string(milp::to_string(lp.status)));
  fix_lp_zeros(m, lp.values);

  const auto parked = assignment_from_solution(m, empty_solution(inst, m.grid));
  auto remaining = params;
  remaining.time_limit_seconds = std::max(1e-3, params.time_limit_seconds - result.stats.solve_seconds);
  const auto mip = backend->solve_mip(m.model, remaining, &parked);
  result.stats.solve_seconds += mip.wall_seconds;
  result.stats.status = mip.status;
  result.stats.nodes = mip.node_count;
  if (mip.has_solution()) {
    result.solution = extract_solution(m, mip.values);
    result.stats.max_integrality_violation = max_integrality_violation(m, mip.raw_values);
  } else {
    result.solution = empty_solution(inst, m.grid);
  }
  result.stats.objective = result.solution.objective.to_double();
  // The fixings cut the search space, so only the LP bound is a valid bound.
  result.stats.best_bound = std::max(lp.objective, result.stats.objective);
  const bool closed = result.stats.best_bound - result.stats.objective <= 1e-6 * std::max(1.0, result.stats.best_bound);
  if (mip.status == milp::SolveStatus::Optimal && !closed) result.stats.status = milp::SolveStatus::FeasibleLimit;
  result.stats.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace evsp
