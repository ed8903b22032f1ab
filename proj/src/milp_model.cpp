#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evsp/milp.hpp"

namespace evsp::milp {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleLimit: return "feasible-limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NoSolutionLimit: return "no-solution-limit";
  }
  return "unknown";
}

void Model::require_open() const {
  if (sealed_) throw ModelError("model is finalized");
}

const Variable& Model::variable(VarRef v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= vars_.size()) throw ModelError("unknown variable");
  return vars_[static_cast<std::size_t>(v.id)];
}

Variable& Model::mutable_variable(VarRef v) { return const_cast<Variable&>(variable(v)); }

VarRef Model::add_variable(VarKind kind, double lower, double upper, double objective, std::string name) {
  require_open();
  if (!(lower <= upper)) throw ModelError("variable bounds must satisfy lower <= upper");
  if (kind != VarKind::Continuous && (lower < 0.0 || upper > 1.0)) {
    throw ModelError("binary variable bounds must lie within [0, 1]");
  }
  if (name.empty()) name = "v" + std::to_string(vars_.size());
  vars_.push_back(Variable{kind, lower, upper, lower, upper, objective, std::move(name)});
  return VarRef{static_cast<std::int32_t>(vars_.size() - 1)};
}

ConstraintRef Model::add_linear_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name) {
  require_open();
  for (const auto& t : terms) variable(t.var);
  if (name.empty()) name = "r" + std::to_string(rows_.size());
  rows_.push_back(Constraint{std::move(terms), sense, rhs, std::move(name)});
  return ConstraintRef{static_cast<std::int32_t>(rows_.size() - 1)};
}

void Model::fix_variable(VarRef v, double value) {
  auto& var = mutable_variable(v);
  if (value < var.original_lower || value > var.original_upper) {
    throw ModelError("cannot fix " + var.name + " outside its original bounds");
  }
  var.lower = value;
  var.upper = value;
}

void Model::release_variable(VarRef v) {
  auto& var = mutable_variable(v);
  var.lower = var.original_lower;
  var.upper = var.original_upper;
}

void Model::set_kind(VarRef v, VarKind kind) {
  auto& var = mutable_variable(v);
  if (kind != VarKind::Continuous && (var.original_lower < 0.0 || var.original_upper > 1.0)) {
    throw ModelError(var.name + " cannot become binary");
  }
  var.kind = kind;
}

std::vector<double> Model::lower_bounds() const {
  std::vector<double> out;
  for (const auto& v : vars_) out.push_back(v.lower);
  return out;
}

std::vector<double> Model::upper_bounds() const {
  std::vector<double> out;
  for (const auto& v : vars_) out.push_back(v.upper);
  return out;
}

double Model::objective_value(const std::vector<double>& values) const {
  double z = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) z += vars_[j].objective * values.at(j);
  return z;
}

std::vector<std::string> Model::check_assignment(const std::vector<double>& values, double tol) const {
  std::vector<std::string> bad;
  if (values.size() != vars_.size()) return {"assignment has the wrong length"};
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    const double x = values[j];
    if (x < v.lower - tol || x > v.upper + tol) bad.push_back("bound " + v.name);
    if (v.kind != VarKind::Continuous && std::min(std::abs(x), std::abs(x - 1.0)) > tol) {
      bad.push_back("integrality " + v.name);
    }
  }
  for (const auto& r : rows_) {
    double lhs = 0.0;
    double scale = std::max(1.0, std::abs(r.rhs));
    for (const auto& t : r.terms) {
      lhs += t.coef * values[static_cast<std::size_t>(t.var.id)];
      scale = std::max(scale, std::abs(t.coef));
    }
    const double slack = tol * scale;
    const bool ok = r.sense == Sense::LessEqual   ? lhs <= r.rhs + slack
                    : r.sense == Sense::GreaterEqual ? lhs >= r.rhs - slack
                                                     : std::abs(lhs - r.rhs) <= slack;
    if (!ok) bad.push_back("row " + r.name);
  }
  return bad;
}

namespace {

void write_terms(std::ostream& os, const std::vector<std::pair<double, std::string>>& terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  int on_line = 0;
  for (const auto& [c, name] : terms) {
    os << (c < 0 ? " - " : " + ") << std::abs(c) << " " << name;
    if (++on_line % 6 == 0) os << "\n   ";
  }
}

}  // namespace

std::string Model::to_lp_string() const {
  std::ostringstream os;
  os.precision(17);
  os << (maximize_ ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<std::pair<double, std::string>> obj;
  for (const auto& v : vars_) {
    if (v.objective != 0.0) obj.emplace_back(v.objective, v.name);
  }
  write_terms(os, obj);
  os << "\nSubject To\n";
  for (const auto& r : rows_) {
    if (r.terms.empty()) continue;
    std::vector<std::pair<double, std::string>> terms;
    for (const auto& t : r.terms) terms.emplace_back(t.coef, vars_[static_cast<std::size_t>(t.var.id)].name);
    os << " " << r.name << ":";
    write_terms(os, terms);
    os << (r.sense == Sense::LessEqual ? " <= " : r.sense == Sense::GreaterEqual ? " >= " : " = ") << r.rhs << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : vars_) {
    if (v.lower == v.upper) {
      os << " " << v.name << " = " << v.lower << "\n";
    } else {
      os << " " << v.lower << " <= " << v.name << " <= " << v.upper << "\n";
    }
  }
  bool any = false;
  for (const auto& v : vars_) {
    if (v.kind != VarKind::Binary) continue;
    if (!any) os << "General\n";
    any = true;
    os << " " << v.name << "\n";
  }
  os << "End\n";
  return os.str();
}

void Model::write_lp(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_lp_string();
}

void require_reduced_costs(const Backend& backend) {
  if (!backend.provides_reduced_costs()) {
    throw CapabilityError("backend '" + backend.name() + "' does not report reduced costs");
  }
}

}  // namespace evsp::milp
