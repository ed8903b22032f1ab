#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evsp::milp {

enum class VarKind {
  Continuous,
  Binary,
  /// Continuous in [0, 1]; integral at every vertex of interest because of
  /// the model structure, so it is never branched on.
  ImplicitBinary,
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct VarRef {
  std::int32_t id = -1;
  bool valid() const { return id >= 0; }
  friend bool operator==(VarRef, VarRef) = default;
};

struct ConstraintRef {
  std::int32_t id = -1;
};

struct Term {
  VarRef var;
  double coef = 0.0;
};

class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Variable {
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
  double original_lower = 0.0;
  double original_upper = 0.0;
  double objective = 0.0;
  std::string name;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

/// Solver-independent maximisation or minimisation model.
class Model {
 public:
  explicit Model(bool maximize = true) : maximize_(maximize) {}

  VarRef add_variable(VarKind kind, double lower, double upper, double objective, std::string name = {});
  ConstraintRef add_linear_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});

  /// Tightens both bounds to `value`; it must lie within the original bounds.
  void fix_variable(VarRef v, double value);
  /// Restores the bounds the variable was created with.
  void release_variable(VarRef v);
  void set_kind(VarRef v, VarKind kind);

  /// No more variables or constraints after this; bounds may still change.
  void seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

  bool maximize() const { return maximize_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const Variable& variable(VarRef v) const;
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  bool is_fixed(VarRef v) const { return variable(v).lower == variable(v).upper; }

  std::vector<double> lower_bounds() const;
  std::vector<double> upper_bounds() const;

  double objective_value(const std::vector<double>& values) const;
  /// Names of violated bounds, rows and integrality requirements.
  std::vector<std::string> check_assignment(const std::vector<double>& values, double tol = 1e-6) const;

  std::string to_lp_string() const;
  void write_lp(const std::filesystem::path& path) const;

 private:
  void require_open() const;
  Variable& mutable_variable(VarRef v);

  bool maximize_;
  bool sealed_ = false;
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
};

enum class CutSetting { Default, Off };
enum class Focus { Default, Feasibility };

struct SolverParams {
  double time_limit_seconds = 3600.0;
  int threads = 1;
  CutSetting cuts = CutSetting::Default;
  Focus focus = Focus::Default;
  /// Relative MIP gap; empty keeps the backend default.
  std::optional<double> mip_rel_gap;
  /// Re-solve the LP with the integer columns fixed so that continuous
  /// values are clean vertex values.
  bool polish = true;
  bool verbose = false;
};

enum class SolveStatus { Optimal, FeasibleLimit, Infeasible, NoSolutionLimit };

std::string_view to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::NoSolutionLimit;
  double objective = 0.0;
  double best_bound = 0.0;
  std::vector<double> values;
  /// Values as returned by branch and bound, before polishing.
  std::vector<double> raw_values;
  /// LP solves only. r_i > 0 means raising the upper bound of x_i would
  /// improve the (maximisation) objective by r_i per unit.
  std::vector<double> reduced_costs;
  std::int64_t node_count = 0;
  double wall_seconds = 0.0;

  bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::FeasibleLimit; }
  double value(VarRef v) const { return values.at(static_cast<std::size_t>(v.id)); }
  double reduced_cost(VarRef v) const { return reduced_costs.at(static_cast<std::size_t>(v.id)); }
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual bool provides_reduced_costs() const = 0;
  /// Binary and implicit-binary columns are treated as continuous in [0,1].
  virtual SolveOutcome solve_lp_relaxation(const Model& model, const SolverParams& params) = 0;
  virtual SolveOutcome solve_mip(const Model& model, const SolverParams& params,
                                 const std::vector<double>* warm_start = nullptr) = 0;
};

/// Backend by name; an empty name reads EVSP_MILP_BACKEND and defaults to
/// "highs".
std::unique_ptr<Backend> make_backend(std::string_view name = {});
std::vector<std::string> available_backends();
/// Throws CapabilityError when the backend cannot report reduced costs.
void require_reduced_costs(const Backend& backend);

}  // namespace evsp::milp
