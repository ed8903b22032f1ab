#include <Highs.h>

#include <chrono>
#include <cmath>
#include <cstdlib>

#include "evsp/milp.hpp"

namespace evsp::milp {

namespace {

HighsLp to_highs(const Model& model, bool integer) {
  HighsLp lp;
  const auto n = static_cast<HighsInt>(model.num_variables());
  lp.num_col_ = n;
  lp.num_row_ = static_cast<HighsInt>(model.num_constraints());
  lp.sense_ = model.maximize() ? ObjSense::kMaximize : ObjSense::kMinimize;
  for (const auto& v : model.variables()) {
    lp.col_cost_.push_back(v.objective);
    lp.col_lower_.push_back(v.lower);
    lp.col_upper_.push_back(v.upper);
    if (integer) {
      // Implicit binaries go in as integer columns too: HiGHS presolve has
      // been seen to return fractional points when they are left continuous.
      lp.integrality_.push_back(v.kind == VarKind::Continuous ? HighsVarType::kContinuous : HighsVarType::kInteger);
    }
  }
  // Column-wise matrix, duplicate entries merged.
  std::vector<std::vector<std::pair<HighsInt, double>>> cols(static_cast<std::size_t>(n));
  HighsInt i = 0;
  for (const auto& r : model.constraints()) {
    for (const auto& t : r.terms) {
      auto& col = cols[static_cast<std::size_t>(t.var.id)];
      if (!col.empty() && col.back().first == i) {
        col.back().second += t.coef;
      } else {
        col.emplace_back(i, t.coef);
      }
    }
    switch (r.sense) {
      case Sense::LessEqual:
        lp.row_lower_.push_back(-kHighsInf);
        lp.row_upper_.push_back(r.rhs);
        break;
      case Sense::GreaterEqual:
        lp.row_lower_.push_back(r.rhs);
        lp.row_upper_.push_back(kHighsInf);
        break;
      case Sense::Equal:
        lp.row_lower_.push_back(r.rhs);
        lp.row_upper_.push_back(r.rhs);
        break;
    }
    ++i;
  }
  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kColwise;
  a.num_col_ = lp.num_col_;
  a.num_row_ = lp.num_row_;
  a.start_.assign(1, 0);
  for (const auto& col : cols) {
    for (const auto& [row, value] : col) {
      if (value == 0.0) continue;
      a.index_.push_back(row);
      a.value_.push_back(value);
    }
    a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
  }
  return lp;
}

void apply_common(Highs& h, const SolverParams& params) {
  if (!(params.time_limit_seconds > 0.0)) throw ModelError("time limit must be positive");
  h.setOptionValue("output_flag", params.verbose);
  h.setOptionValue("threads", params.threads);
  h.setOptionValue("time_limit", params.time_limit_seconds);
  h.setOptionValue("random_seed", 0);
}

bool any_rows_have_terms(const Model& model) {
  for (const auto& r : model.constraints()) {
    if (!r.terms.empty()) return true;
  }
  return false;
}

// HiGHS rejects models without columns; such a model is decided by its
// (constant) rows alone.
SolveOutcome solve_trivial(const Model& model) {
  SolveOutcome out;
  out.status = SolveStatus::Optimal;
  for (const auto& r : model.constraints()) {
    const bool ok = r.sense == Sense::LessEqual ? 0.0 <= r.rhs : r.sense == Sense::GreaterEqual ? 0.0 >= r.rhs : r.rhs == 0.0;
    if (!ok) out.status = SolveStatus::Infeasible;
  }
  return out;
}

class HighsBackend final : public Backend {
 public:
  std::string name() const override { return "highs"; }
  bool provides_reduced_costs() const override { return true; }

  SolveOutcome solve_lp_relaxation(const Model& model, const SolverParams& params) override {
    if (model.num_variables() == 0 && !any_rows_have_terms(model)) return solve_trivial(model);
    Highs h;
    apply_common(h, params);
    h.setOptionValue("solver", "simplex");
    h.setOptionValue("simplex_strategy", 1);  // dual simplex
    pass(h, to_highs(model, false));
    SolveOutcome out = run(h, false);
    if (out.has_solution()) {
      const auto& sol = h.getSolution();
      out.values = sol.col_value;
      out.raw_values = sol.col_value;
      // HiGHS column duals are c_j - a_j^T y in the user's objective sense,
      // which for maximisation is the gain per unit increase of x_j.
      out.reduced_costs = sol.col_dual;
      out.best_bound = out.objective;
    }
    return out;
  }

  SolveOutcome solve_mip(const Model& model, const SolverParams& params, const std::vector<double>* warm_start) override {
    if (model.num_variables() == 0 && !any_rows_have_terms(model)) return solve_trivial(model);
    Highs h;
    apply_common(h, params);
    if (params.mip_rel_gap) h.setOptionValue("mip_rel_gap", *params.mip_rel_gap);
    if (params.cuts == CutSetting::Off) h.setOptionValue("mip_allow_cut_separation_at_nodes", false);
    if (params.focus == Focus::Feasibility) {
      h.setOptionValue("mip_heuristic_effort", 0.3);
      h.setOptionValue("mip_heuristic_run_feasibility_jump", true);
    }
    pass(h, to_highs(model, true));
    if (warm_start) {
      if (warm_start->size() != model.num_variables()) throw ModelError("warm start has the wrong length");
      HighsSolution start;
      start.col_value = *warm_start;
      start.value_valid = true;
      h.setSolution(start);
    }
    SolveOutcome out = run(h, true);
    if (!out.has_solution()) return out;
    out.values = h.getSolution().col_value;
    out.raw_values = out.values;
    const auto& info = h.getInfo();
    out.best_bound = info.mip_dual_bound;
    out.node_count = info.mip_node_count;
    if (params.polish) polish(model, params, out);
    return out;
  }

 private:
  static void pass(Highs& h, HighsLp lp) {
    if (h.passModel(std::move(lp)) == HighsStatus::kError) throw SolverError("HiGHS rejected the model");
  }

  static SolveOutcome run(Highs& h, bool mip) {
    SolveOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const auto status = h.run();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (status == HighsStatus::kError) throw SolverError("HiGHS failed to solve the model");
    const auto& info = h.getInfo();
    const bool feasible = info.primal_solution_status == kSolutionStatusFeasible;
    switch (h.getModelStatus()) {
      case HighsModelStatus::kOptimal:
      case HighsModelStatus::kModelEmpty:
        out.status = SolveStatus::Optimal;
        break;
      case HighsModelStatus::kInfeasible:
      case HighsModelStatus::kUnboundedOrInfeasible:
        out.status = SolveStatus::Infeasible;
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
      case HighsModelStatus::kHighsInterrupt:
      case HighsModelStatus::kMemoryLimit:
      case HighsModelStatus::kObjectiveBound:
      case HighsModelStatus::kObjectiveTarget:
      case HighsModelStatus::kUnknown:
        out.status = feasible && mip ? SolveStatus::FeasibleLimit : SolveStatus::NoSolutionLimit;
        break;
      default:
        throw SolverError("HiGHS ended with model status " + h.modelStatusToString(h.getModelStatus()));
    }
    if (out.has_solution()) out.objective = info.objective_function_value;
    return out;
  }

  // Fix every integer column at its rounded value and re-solve the LP so the
  // remaining columns come from an exact vertex rather than carrying the
  // MIP's feasibility tolerances.
  static void polish(const Model& model, const SolverParams& params, SolveOutcome& out) {
    Model fixed = model;
    bool has_integer = false;
    for (std::size_t j = 0; j < model.num_variables(); ++j) {
      const auto& v = model.variables()[j];
      if (v.kind != VarKind::Binary) continue;
      has_integer = true;
      const double r = std::round(out.values[j]);
      if (r < v.lower || r > v.upper) return;
      fixed.fix_variable(VarRef{static_cast<std::int32_t>(j)}, r);
    }
    if (!has_integer) return;
    Highs h;
    apply_common(h, params);
    h.setOptionValue("solver", "simplex");
    h.setOptionValue("primal_feasibility_tolerance", 1e-9);
    h.setOptionValue("dual_feasibility_tolerance", 1e-9);
    pass(h, to_highs(fixed, false));
    const auto lp = run(h, false);
    if (lp.status != SolveStatus::Optimal) return;
    if (lp.objective < out.objective - 1e-6 * std::max(1.0, std::abs(out.objective))) return;
    out.values = h.getSolution().col_value;
    out.objective = lp.objective;
    out.wall_seconds += lp.wall_seconds;
  }
};

}  // namespace

std::vector<std::string> available_backends() { return {"highs"}; }

std::unique_ptr<Backend> make_backend(std::string_view name) {
  std::string chosen(name);
  if (chosen.empty()) {
    const char* env = std::getenv("EVSP_MILP_BACKEND");
    chosen = env && *env ? env : "highs";
  }
  if (chosen == "highs") return std::make_unique<HighsBackend>();
  throw CapabilityError("unknown MILP backend '" + chosen + "'");
}

}  // namespace evsp::milp
