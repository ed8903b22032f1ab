#include "evsp/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace evsp {

bool ValidationReport::has(char check) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.check == check; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok\n";
  std::ostringstream os;
  for (const auto& v : violations) os << "(" << v.check << ") " << v.detail << "\n";
  return os.str();
}

ValidationReport validate(const Instance& inst, const Solution& sol) {
  ValidationReport report;
  auto fail = [&](char check, std::string detail) { report.violations.push_back(Violation{check, std::move(detail)}); };
  const TimeGrid grid(inst);

  std::set<std::size_t> served(sol.served.begin(), sol.served.end());
  std::map<std::size_t, std::size_t> fulfilled;
  for (const auto& f : sol.fulfillments) {
    if (f.demand < inst.demands().size()) ++fulfilled[inst.demands()[f.demand].customer];
  }
  for (std::size_t c = 0; c < inst.customers().size(); ++c) {
    const auto n = fulfilled.contains(c) ? fulfilled[c] : 0;
    const auto& id = inst.customers()[c].id;
    if (served.contains(c) && n != inst.demands_of(c).size()) {
      fail('a', id + " is served but " + std::to_string(inst.demands_of(c).size() - std::min(n, inst.demands_of(c).size())) +
                    " of its demands are not fulfilled");
    }
    if (!served.contains(c) && n > 0) fail('a', id + " is not served but has fulfilled demands");
  }

  const auto audit = audit_claimed(inst, grid, sol);
  report.violations.insert(report.violations.end(), audit.violations.begin(), audit.violations.end());
  if (audit.schedule.size() == sol.schedule.size()) {
    for (std::size_t p = 0; p < sol.schedule.size(); ++p) {
      const auto& want = audit.schedule[p].occupied;
      const auto& got = sol.schedule[p].occupied;
      for (std::size_t k = 1; k < std::min(want.size(), got.size()); ++k) {
        if (want[k] != got[k]) {
          fail('d', "occupancy of " + inst.spaces()[p].id + " at t=" +
                        grid.time_at(inst.spaces()[p].station, k).to_string() + " does not follow the movements");
          break;
        }
      }
    }
  }

  const auto expected = evaluate_objective(inst, std::span<const std::size_t>(sol.served));
  if (sol.objective != expected) {
    fail('g', "objective " + sol.objective.to_string() + " but served customers rent for " + expected.to_string());
  }
  return report;
}

std::size_t AssignmentPlan::rental_count() const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [](const PlanEvent& e) { return e.kind == PlanEvent::Kind::Rental; }));
}

std::vector<AssignmentPlan> extract_assignment_plans(const Instance& inst, const Solution& sol) {
  std::vector<AssignmentPlan> plans(inst.vehicles().size());
  std::vector<std::optional<std::size_t>> at_space(inst.spaces().size());
  for (std::size_t v = 0; v < plans.size(); ++v) {
    plans[v].vehicle = v;
    const auto p = inst.initial_space()[v];
    at_space[p] = v;
    plans[v].events.push_back(PlanEvent{PlanEvent::Kind::Park, p, p, 0, std::nullopt, std::nullopt});
  }

  // (time, 0 = arrival / 1 = departure, fulfillment position)
  std::vector<std::tuple<Minutes, int, std::size_t>> events;
  for (std::size_t i = 0; i < sol.fulfillments.size(); ++i) {
    if (sol.fulfillments[i].demand >= inst.demands().size()) throw TraceError("unknown demand");
    const auto& d = inst.demands()[sol.fulfillments[i].demand];
    events.emplace_back(d.depart, 1, i);
    events.emplace_back(d.arrive, 0, i);
  }
  std::sort(events.begin(), events.end());

  std::map<std::size_t, std::size_t> in_transit;
  for (const auto& [t, type, i] : events) {
    const auto& f = sol.fulfillments[i];
    if (type == 1) {
      const auto v = at_space.at(f.pickup);
      if (!v) throw TraceError("no vehicle at " + inst.spaces()[f.pickup].id + " at t=" + t.to_string());
      at_space[f.pickup].reset();
      plans[*v].events.back().end = t;
      plans[*v].events.push_back(PlanEvent{PlanEvent::Kind::Rental, f.pickup, f.dropoff, f.demand, t,
                                           inst.demands()[f.demand].arrive});
      in_transit[f.demand] = *v;
    } else {
      const auto it = in_transit.find(f.demand);
      if (it == in_transit.end()) throw TraceError("drop-off before pick-up");
      if (at_space.at(f.dropoff)) {
        throw TraceError("space " + inst.spaces()[f.dropoff].id + " is taken at t=" + t.to_string());
      }
      at_space[f.dropoff] = it->second;
      plans[it->second].events.push_back(PlanEvent{PlanEvent::Kind::Park, f.dropoff, f.dropoff, 0, t, std::nullopt});
      in_transit.erase(it);
    }
  }
  return plans;
}

double parked_energy(const Instance& inst, std::size_t space, double energy, const Minutes& from, const Minutes& t) {
  if (!inst.spaces()[space].has_charger || t <= from) return energy;
  return std::min(inst.battery_capacity(), energy + inst.charge_rate() * (t - from).to_double());
}

EnergyTrace replay_energy(const Instance& inst, const AssignmentPlan& plan) {
  EnergyTrace trace;
  const TimeGrid grid(inst);
  double energy = inst.vehicles()[plan.vehicle].initial_energy;
  for (std::size_t i = 0; i < plan.events.size(); ++i) {
    const auto& e = plan.events[i];
    EnergyTrace::Entry entry;
    entry.before = energy;
    if (e.kind == PlanEvent::Kind::Rental) {
      entry.from = *e.start;
      const double eps = inst.demands()[e.demand].energy;
      if (energy < eps - kEnergyTolerance && trace.feasible) {
        trace.feasible = false;
        trace.first_infeasible = i;
      }
      energy -= eps;
    } else {
      const auto station = inst.spaces()[e.space].station;
      const auto& times = grid.times(station);
      if (e.start) {
        entry.from = *e.start;
      } else if (!times.empty()) {
        entry.from = times.front();
      }
      Minutes until = entry.from;
      if (e.end) {
        until = *e.end;
      } else if (!times.empty()) {
        until = times.back();
      }
      energy = parked_energy(inst, e.space, energy, entry.from, until);
    }
    entry.after = energy;
    trace.entries.push_back(entry);
  }
  return trace;
}

}  // namespace evsp
