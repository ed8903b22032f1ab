#include "evsp/evsp3.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

namespace evsp {

using milp::Sense;
using milp::Term;
using milp::VarKind;
using milp::VarRef;

std::size_t Registry::variable_count(const std::string& family) const {
  auto nested = [](const std::vector<std::vector<VarRef>>& v) {
    std::size_t n = 0;
    for (const auto& row : v) n += row.size();
    return n;
  };
  auto mapped = [](const std::vector<std::map<std::size_t, VarRef>>& v) {
    std::size_t n = 0;
    for (const auto& row : v) n += row.size();
    return n;
  };
  if (family == "w") return w.size();
  if (family == "y") return nested(y);
  if (family == "l") return nested(l);
  if (family == "x_out") return nested(x_out);
  if (family == "l_out") return nested(l_out);
  if (family == "x_in") return nested(x_in);
  if (family == "l_in") return nested(l_in);
  if (family == "z_out") return mapped(z_out);
  if (family == "z_in") return mapped(z_in);
  return 0;
}

namespace {

std::string time_label(const TimeGrid& grid, std::size_t station, std::size_t k) {
  return k == 0 ? "t0" : "t=" + grid.time_at(station, k).to_string();
}

std::string demand_label(const Instance& inst, std::size_t d) {
  const auto& dem = inst.demands()[d];
  return inst.customers()[dem.customer].id + "#" + std::to_string(dem.local + 1);
}

}  // namespace

Evsp3Model build_model(const Instance& inst, bool relax_implicit) {
  Evsp3Model m(inst);
  auto& model = m.model;
  auto& r = m.vars;
  const auto& grid = m.grid;
  const auto implicit = relax_implicit ? VarKind::ImplicitBinary : VarKind::Binary;
  const double L = inst.battery_capacity();
  const auto n_spaces = inst.spaces().size();
  const auto n_stations = inst.stations().size();

  for (const auto& c : inst.customers()) {
    r.w.push_back(model.add_variable(implicit, 0.0, 1.0, c.total_rental_time().to_double(), "w[" + c.id + "]"));
  }

  // Initial state through psi, as bounds on the t_0 columns.
  r.y.resize(n_spaces);
  r.l.resize(n_spaces);
  for (std::size_t p = 0; p < n_spaces; ++p) {
    const auto s = inst.spaces()[p].station;
    const auto& pid = inst.spaces()[p].id;
    for (std::size_t k = 0; k < grid.size(s); ++k) {
      const auto tag = "[" + pid + "," + time_label(grid, s, k) + "]";
      double y_lo = 0.0, y_hi = 1.0, l_lo = 0.0, l_hi = L;
      if (k == 0) {
        const auto v = inst.initial_vehicle(p);
        y_lo = y_hi = v ? 1.0 : 0.0;
        l_lo = l_hi = v ? inst.vehicles()[*v].initial_energy : 0.0;
      }
      r.y[p].push_back(model.add_variable(implicit, y_lo, y_hi, 0.0, "y" + tag));
      r.l[p].push_back(model.add_variable(VarKind::Continuous, l_lo, l_hi, 0.0, "l" + tag));
    }
  }

  const auto n_demands = inst.demands().size();
  r.x_out.resize(n_demands);
  r.l_out.resize(n_demands);
  r.x_in.resize(n_demands);
  r.l_in.resize(n_demands);
  // Demands leaving / reaching each station at each grid index.
  std::vector<std::map<std::size_t, std::vector<std::size_t>>> dep_at(n_stations), arr_at(n_stations);
  for (std::size_t d = 0; d < n_demands; ++d) {
    const auto& dem = inst.demands()[d];
    const auto label = demand_label(inst, d);
    for (std::size_t o = 0; o < inst.space_count(dem.from); ++o) {
      const auto& pid = inst.spaces()[inst.first_space(dem.from) + o].id;
      r.x_out[d].push_back(model.add_variable(VarKind::Binary, 0.0, 1.0, 0.0, "xo[" + label + "," + pid + "]"));
      r.l_out[d].push_back(model.add_variable(VarKind::Continuous, 0.0, L, 0.0, "lo[" + label + "," + pid + "]"));
    }
    for (std::size_t o = 0; o < inst.space_count(dem.to); ++o) {
      const auto& pid = inst.spaces()[inst.first_space(dem.to) + o].id;
      r.x_in[d].push_back(model.add_variable(VarKind::Binary, 0.0, 1.0, 0.0, "xi[" + label + "," + pid + "]"));
      r.l_in[d].push_back(model.add_variable(VarKind::Continuous, 0.0, L, 0.0, "li[" + label + "," + pid + "]"));
    }
    dep_at[dem.from][grid.depart_index(d)].push_back(d);
    arr_at[dem.to][grid.arrive_index(d)].push_back(d);
  }

  r.z_out.resize(n_spaces);
  r.z_in.resize(n_spaces);
  for (std::size_t p = 0; p < n_spaces; ++p) {
    const auto s = inst.spaces()[p].station;
    const auto& pid = inst.spaces()[p].id;
    for (const auto& [k, ds] : dep_at[s]) {
      r.z_out[p][k] = model.add_variable(implicit, 0.0, 1.0, 0.0, "zo[" + pid + "," + time_label(grid, s, k) + "]");
    }
    for (const auto& [k, ds] : arr_at[s]) {
      r.z_in[p][k] = model.add_variable(implicit, 0.0, 1.0, 0.0, "zi[" + pid + "," + time_label(grid, s, k) + "]");
    }
  }

  auto row = [&](const std::string& family, const std::string& tag, std::vector<Term> terms, Sense sense, double rhs) {
    model.add_linear_constraint(std::move(terms), sense, rhs, family + "[" + tag + "]");
    ++r.rows[family];
  };

  for (std::size_t d = 0; d < n_demands; ++d) {
    const auto& dem = inst.demands()[d];
    const auto label = demand_label(inst, d);
    const auto w = r.w[dem.customer];
    std::vector<Term> out{{w, -1.0}}, in{{w, -1.0}}, balance{{w, -dem.energy}};
    for (std::size_t o = 0; o < r.x_out[d].size(); ++o) {
      out.push_back({r.x_out[d][o], 1.0});
      balance.push_back({r.l_out[d][o], 1.0});
      row("eq9", label + "," + inst.spaces()[inst.first_space(dem.from) + o].id,
          {{r.l_out[d][o], 1.0}, {r.x_out[d][o], -L}}, Sense::LessEqual, 0.0);
    }
    for (std::size_t o = 0; o < r.x_in[d].size(); ++o) {
      in.push_back({r.x_in[d][o], 1.0});
      balance.push_back({r.l_in[d][o], -1.0});
      row("eq10", label + "," + inst.spaces()[inst.first_space(dem.to) + o].id,
          {{r.l_in[d][o], 1.0}, {r.x_in[d][o], -(L - dem.energy)}}, Sense::LessEqual, 0.0);
    }
    row("eq2", label, std::move(out), Sense::Equal, 0.0);
    row("eq3", label, std::move(in), Sense::Equal, 0.0);
    row("eq8", label, std::move(balance), Sense::Equal, 0.0);
  }

  for (std::size_t p = 0; p < n_spaces; ++p) {
    const auto s = inst.spaces()[p].station;
    const auto o = p - inst.first_space(s);
    const auto& pid = inst.spaces()[p].id;
    for (std::size_t k = 1; k < grid.size(s); ++k) {
      const auto tag = pid + "," + time_label(grid, s, k);
      const auto zo = r.z_out[p].find(k);
      const auto zi = r.z_in[p].find(k);
      const auto* deps = dep_at[s].contains(k) ? &dep_at[s].at(k) : nullptr;
      const auto* arrs = arr_at[s].contains(k) ? &arr_at[s].at(k) : nullptr;

      if (zo != r.z_out[p].end()) {
        std::vector<Term> t{{zo->second, 1.0}};
        for (const auto d : *deps) t.push_back({r.x_out[d][o], -1.0});
        row("eq4", tag, std::move(t), Sense::Equal, 0.0);
      }
      if (zi != r.z_in[p].end()) {
        std::vector<Term> t{{zi->second, 1.0}};
        for (const auto d : *arrs) t.push_back({r.x_in[d][o], -1.0});
        row("eq5", tag, std::move(t), Sense::Equal, 0.0);
        row("eq6", tag, {{zi->second, 1.0}, {r.y[p][k - 1], 1.0}}, Sense::LessEqual, 1.0);
      }

      std::vector<Term> flow{{r.y[p][k], 1.0}, {r.y[p][k - 1], -1.0}};
      if (zo != r.z_out[p].end()) flow.push_back({zo->second, 1.0});
      if (zi != r.z_in[p].end()) flow.push_back({zi->second, -1.0});
      row("eq7", tag, std::move(flow), Sense::Equal, 0.0);

      std::vector<Term> energy{{r.l[p][k], 1.0}};
      if (deps) {
        for (const auto d : *deps) energy.push_back({r.l_out[d][o], 1.0});
      }
      if (arrs) {
        for (const auto d : *arrs) energy.push_back({r.l_in[d][o], -1.0});
      }
      auto with_prev = energy;
      with_prev.push_back({r.l[p][k - 1], -1.0});
      row("eq11a", tag, std::move(with_prev), Sense::LessEqual, grid.charge(p, k));
      energy.push_back({r.y[p][k - 1], -L});
      row("eq11b", tag, std::move(energy), Sense::LessEqual, 0.0);
    }
  }

  model.seal();
  return m;
}

double max_integrality_violation(const Evsp3Model& m, const std::vector<double>& values) {
  double worst = 0.0;
  auto check = [&](VarRef v) {
    const double x = values.at(static_cast<std::size_t>(v.id));
    worst = std::max(worst, std::min(std::abs(x), std::abs(x - 1.0)));
  };
  const auto& r = m.vars;
  for (const auto v : r.w) check(v);
  for (const auto* fam : {&r.y, &r.x_out, &r.x_in}) {
    for (const auto& row : *fam) {
      for (const auto v : row) check(v);
    }
  }
  for (const auto* fam : {&r.z_out, &r.z_in}) {
    for (const auto& row : *fam) {
      for (const auto& [k, v] : row) check(v);
    }
  }
  return worst;
}

Solution extract_solution(const Evsp3Model& m, const std::vector<double>& values) {
  const auto& inst = *m.inst;
  const auto& r = m.vars;
  constexpr double kTol = 1e-6;
  if (values.size() != m.model.num_variables()) throw IntegralityError("assignment has the wrong length");
  auto val = [&](VarRef v) { return values[static_cast<std::size_t>(v.id)]; };
  auto require_binary = [&](VarRef v) {
    const double x = val(v);
    if (std::min(std::abs(x), std::abs(x - 1.0)) > kTol) {
      throw IntegralityError(m.model.variable(v).name + " = " + std::to_string(x) + " is not integral");
    }
    return x >= 0.5;
  };

  for (const auto& row : r.y) {
    for (const auto v : row) require_binary(v);
  }
  for (const auto* fam : {&r.z_out, &r.z_in}) {
    for (const auto& row : *fam) {
      for (const auto& [k, v] : row) require_binary(v);
    }
  }

  std::vector<Route> routes;
  for (std::size_t c = 0; c < inst.customers().size(); ++c) {
    const bool served = require_binary(r.w[c]);
    for (const auto d : inst.demands_of(c)) {
      const auto& dem = inst.demands()[d];
      std::optional<std::size_t> pick, drop;
      for (std::size_t o = 0; o < r.x_out[d].size(); ++o) {
        if (require_binary(r.x_out[d][o])) {
          if (pick) throw IntegralityError("demand uses two pick-up spaces");
          pick = inst.first_space(dem.from) + o;
        }
      }
      for (std::size_t o = 0; o < r.x_in[d].size(); ++o) {
        if (require_binary(r.x_in[d][o])) {
          if (drop) throw IntegralityError("demand uses two drop-off spaces");
          drop = inst.first_space(dem.to) + o;
        }
      }
      if (served != (pick.has_value() && drop.has_value()) || pick.has_value() != drop.has_value()) {
        throw IntegralityError("space choice of " + inst.customers()[c].id + " disagrees with its service flag");
      }
      if (served) routes.push_back(Route{d, *pick, *drop});
    }
  }

  std::vector<Violation> violations;
  auto sol = build_solution(inst, m.grid, std::move(routes), &violations);
  if (!sol) {
    throw IntegralityError("solver assignment does not replay: " +
                           (violations.empty() ? std::string("unknown") : violations.front().detail));
  }
  for (std::size_t p = 0; p < r.y.size(); ++p) {
    for (std::size_t k = 0; k < r.y[p].size(); ++k) {
      if ((val(r.y[p][k]) >= 0.5) != (sol->schedule[p].occupied[k] != 0)) {
        throw IntegralityError("occupancy column " + m.model.variable(r.y[p][k]).name + " disagrees with the moves");
      }
    }
  }
  return *sol;
}

std::vector<double> assignment_from_solution(const Evsp3Model& m, const Solution& sol) {
  const auto& inst = *m.inst;
  const auto& r = m.vars;
  std::vector<double> x(m.model.num_variables(), 0.0);
  auto set = [&](VarRef v, double value) { x[static_cast<std::size_t>(v.id)] = value; };
  for (const auto c : sol.served) set(r.w[c], 1.0);
  for (const auto& f : sol.fulfillments) {
    const auto& dem = inst.demands()[f.demand];
    const auto po = f.pickup - inst.first_space(dem.from);
    const auto pi = f.dropoff - inst.first_space(dem.to);
    set(r.x_out[f.demand][po], 1.0);
    set(r.l_out[f.demand][po], f.energy_out);
    set(r.x_in[f.demand][pi], 1.0);
    set(r.l_in[f.demand][pi], f.energy_in);
    set(r.z_out[f.pickup].at(m.grid.depart_index(f.demand)), 1.0);
    set(r.z_in[f.dropoff].at(m.grid.arrive_index(f.demand)), 1.0);
  }
  for (std::size_t p = 0; p < r.y.size(); ++p) {
    for (std::size_t k = 0; k < r.y[p].size(); ++k) {
      set(r.y[p][k], sol.schedule[p].occupied[k]);
      set(r.l[p][k], sol.schedule[p].energy[k]);
    }
  }
  return x;
}

}  // namespace evsp

namespace evsp {

AlgorithmResult solve_evsp3(const Instance& inst, const milp::SolverParams& params, milp::Backend* backend) {
  const auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<milp::Backend> owned;
  if (!backend) {
    owned = milp::make_backend();
    backend = owned.get();
  }
  auto m = build_model(inst, true);
  const auto out = backend->solve_mip(m.model, params);
  AlgorithmResult result;
  result.stats.status = out.status;
  result.stats.nodes = out.node_count;
  result.stats.solve_seconds = out.wall_seconds;
  if (out.has_solution()) {
    result.solution = extract_solution(m, out.values);
    result.stats.max_integrality_violation = max_integrality_violation(m, out.raw_values);
    result.stats.objective = result.solution.objective.to_double();
    result.stats.best_bound = out.status == milp::SolveStatus::Optimal ? result.stats.objective : out.best_bound;
    result.stats.best_bound = std::max(result.stats.best_bound, result.stats.objective);
  } else {
    result.solution = empty_solution(inst, m.grid);
    result.stats.best_bound = out.best_bound;
  }
  result.stats.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace evsp
