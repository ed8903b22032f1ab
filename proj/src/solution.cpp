#include "evsp/solution.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace evsp {

std::vector<std::string> Solution::served_ids(const Instance& inst) const {
  std::vector<std::string> ids;
  for (const auto c : served) ids.push_back(inst.customers()[c].id);
  return ids;
}

std::vector<Route> Solution::routes() const {
  std::vector<Route> out;
  for (const auto& f : fulfillments) out.push_back(Route{f.demand, f.pickup, f.dropoff});
  return out;
}

namespace {

enum class Mode { Max, Claimed };

struct Replayer {
  Replayer(const Instance& i, const TimeGrid& g, Mode m, const Solution* c = nullptr)
      : inst(i), grid(g), mode(m), claimed(c) {}

  const Instance& inst;
  const TimeGrid& grid;
  Mode mode;
  const Solution* claimed;
  SimulationResult result;
  // Per space and grid index: fulfillment positions departing / arriving.
  std::vector<std::map<std::size_t, std::vector<std::size_t>>> departures;
  std::vector<std::map<std::size_t, std::vector<std::size_t>>> arrivals;

  void fail(char check, std::string detail) { result.violations.push_back(Violation{check, std::move(detail)}); }

  std::string label(std::size_t fpos) const {
    const auto& d = inst.demands()[result.fulfillments[fpos].demand];
    return inst.customers()[d.customer].id + "#" + std::to_string(d.local + 1);
  }

  void run(const std::vector<Fulfillment>& fulfillments) {
    const auto n_spaces = inst.spaces().size();
    result.fulfillments = fulfillments;
    departures.assign(n_spaces, {});
    arrivals.assign(n_spaces, {});
    result.schedule.assign(n_spaces, {});

    std::set<std::size_t> seen;
    bool structural_ok = true;
    for (std::size_t i = 0; i < fulfillments.size(); ++i) {
      const auto& f = fulfillments[i];
      if (f.demand >= inst.demands().size() || f.pickup >= n_spaces || f.dropoff >= n_spaces) {
        fail('s', "fulfillment references an unknown demand or space");
        structural_ok = false;
        continue;
      }
      if (!seen.insert(f.demand).second) fail('a', label(i) + " fulfilled twice");
      const auto& d = inst.demands()[f.demand];
      if (inst.spaces()[f.pickup].station != d.from) {
        fail('b', label(i) + " picked up at a space of the wrong station");
        structural_ok = false;
      }
      if (inst.spaces()[f.dropoff].station != d.to) {
        fail('c', label(i) + " dropped off at a space of the wrong station");
        structural_ok = false;
      }
      departures[f.pickup][grid.depart_index(f.demand)].push_back(i);
      arrivals[f.dropoff][grid.arrive_index(f.demand)].push_back(i);
    }

    for (std::size_t p = 0; p < n_spaces; ++p) {
      const auto s = inst.spaces()[p].station;
      auto& sch = result.schedule[p];
      sch.occupied.assign(grid.size(s), 0);
      sch.energy.assign(grid.size(s), 0.0);
      if (const auto v = inst.initial_vehicle(p)) {
        sch.occupied[0] = 1;
        sch.energy[0] = inst.vehicles()[*v].initial_energy;
      }
    }
    if (!structural_ok) return;

    if (mode == Mode::Claimed) check_initial_state();

    // Global chronological sweep over (time, station) grid points.
    std::vector<std::pair<Minutes, std::size_t>> points;
    for (std::size_t s = 0; s < inst.stations().size(); ++s) {
      for (const auto& t : grid.times(s)) points.emplace_back(t, s);
    }
    std::sort(points.begin(), points.end());
    for (const auto& [t, s] : points) {
      const auto k = grid.index_of(s, t);
      for (std::size_t p = inst.first_space(s); p < inst.first_space(s) + inst.space_count(s); ++p) step(p, k);
    }
  }

  void check_initial_state() {
    for (std::size_t p = 0; p < inst.spaces().size(); ++p) {
      const auto& want = result.schedule[p];
      const auto& got = claimed->schedule[p];
      if (got.occupied[0] != want.occupied[0] || std::abs(got.energy[0] - want.energy[0]) > kEnergyTolerance) {
        fail('f', "space " + inst.spaces()[p].id + " does not match the initial vehicle placement");
      }
    }
  }

  void step(std::size_t p, std::size_t k) {
    auto& sch = result.schedule[p];
    const bool occ = sch.occupied[k - 1] != 0;
    const double prev_energy = mode == Mode::Claimed ? claimed->schedule[p].energy[k - 1] : sch.energy[k - 1];
    const auto& space_id = inst.spaces()[p].id;
    const std::string at = " at " + space_id + " t=" + grid.time_at(inst.spaces()[p].station, k).to_string();

    std::vector<std::size_t> arr;
    std::vector<std::size_t> dep;
    if (auto it = arrivals[p].find(k); it != arrivals[p].end()) arr = it->second;
    if (auto it = departures[p].find(k); it != departures[p].end()) dep = it->second;

    if (arr.size() > 1) fail('c', "several drop-offs" + at);
    if (dep.size() > 1) fail('b', "several pick-ups" + at);
    if (!arr.empty() && occ) fail('c', label(arr.front()) + " dropped off on a space occupied at the previous time" + at);

    double in = 0.0;
    for (const auto i : arr) in += result.fulfillments[i].energy_in;
    const int count = (occ ? 1 : 0) + static_cast<int>(arr.size()) - static_cast<int>(dep.size());
    if (count < 0) {
      for (const auto i : dep) fail('b', label(i) + " picked up from an empty space" + at);
    }
    sch.occupied[k] = count >= 1 ? 1 : 0;

    const double L = inst.battery_capacity();
    const double cap_flow = prev_energy + grid.charge(p, k) + in;  // row (11a)
    const double cap_full = in + (occ ? L : 0.0);                  // row (11b)
    const double available = std::min(cap_flow, cap_full);

    if (mode == Mode::Max) {
      double rest = available;
      for (const auto i : dep) {
        auto& f = result.fulfillments[i];
        const double eps = inst.demands()[f.demand].energy;
        f.energy_out = rest;
        f.energy_in = rest - eps;
        rest = 0.0;
        if (f.energy_in < -kEnergyTolerance) {
          fail('b', label(i) + " needs more energy than the vehicle holds" + at);
          f.energy_in = 0.0;
        }
        f.energy_in = std::max(f.energy_in, 0.0);
      }
      sch.energy[k] = sch.occupied[k] ? rest : 0.0;
      return;
    }

    double out = 0.0;
    for (const auto i : dep) {
      const auto& f = result.fulfillments[i];
      out += f.energy_out;
      const double eps = inst.demands()[f.demand].energy;
      if (std::abs(f.energy_out - f.energy_in - eps) > kEnergyTolerance) {
        fail('b', label(i) + " energy balance is off");
      }
      if (f.energy_in < -kEnergyTolerance) fail('b', label(i) + " returns with negative energy");
      if (f.energy_in > L - eps + kEnergyTolerance) fail('b', label(i) + " returns with more than L - eps");
    }
    const double level = claimed->schedule[p].energy[k];
    sch.energy[k] = level;
    if (level < -kEnergyTolerance) fail('e', "negative energy" + at);
    if (out + level > cap_flow + kEnergyTolerance) {
      fail(dep.empty() ? 'e' : 'b', "energy exceeds what was stored plus charged" + at);
    }
    if (out + level > cap_full + kEnergyTolerance) {
      fail(dep.empty() ? 'e' : 'b', "energy exceeds the battery capacity" + at);
    }
  }
};

}  // namespace

SimulationResult replay_routes(const Instance& inst, const TimeGrid& grid, const std::vector<Route>& routes) {
  Replayer r(inst, grid, Mode::Max);
  std::vector<Fulfillment> fs;
  for (const auto& rt : routes) fs.push_back(Fulfillment{rt.demand, rt.pickup, rt.dropoff, 0.0, 0.0});
  std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) { return a.demand < b.demand; });
  r.run(fs);
  return std::move(r.result);
}

SimulationResult audit_claimed(const Instance& inst, const TimeGrid& grid, const Solution& sol) {
  Replayer r(inst, grid, Mode::Claimed, &sol);
  bool shape_ok = sol.schedule.size() == inst.spaces().size();
  for (std::size_t p = 0; shape_ok && p < inst.spaces().size(); ++p) {
    const auto n = grid.size(inst.spaces()[p].station);
    shape_ok = sol.schedule[p].occupied.size() == n && sol.schedule[p].energy.size() == n;
  }
  if (!shape_ok) {
    r.fail('s', "schedule does not match the time grid");
    return std::move(r.result);
  }
  r.run(sol.fulfillments);
  return std::move(r.result);
}

std::optional<Solution> build_solution(const Instance& inst, const TimeGrid& grid, std::vector<Route> routes,
                                       std::vector<Violation>* violations) {
  auto sim = replay_routes(inst, grid, routes);
  std::map<std::size_t, std::size_t> per_customer;
  for (const auto& f : sim.fulfillments) {
    if (f.demand < inst.demands().size()) ++per_customer[inst.demands()[f.demand].customer];
  }
  Solution sol;
  for (const auto& [c, n] : per_customer) {
    if (n != inst.demands_of(c).size()) {
      sim.violations.push_back(Violation{'a', inst.customers()[c].id + " is only partially served"});
    }
    sol.served.push_back(c);
  }
  if (!sim.ok()) {
    if (violations) *violations = std::move(sim.violations);
    return std::nullopt;
  }
  sol.fulfillments = std::move(sim.fulfillments);
  sol.schedule = std::move(sim.schedule);
  sol.objective = evaluate_objective(inst, std::span<const std::size_t>(sol.served));
  return sol;
}

Solution empty_solution(const Instance& inst, const TimeGrid& grid) { return *build_solution(inst, grid, {}); }

Solution parse_solution(const Instance& inst, std::string_view json_text) {
  namespace ju = json_util;
  const auto doc = ju::parse(json_text);
  if (ju::require_int(doc, "format_version") != 1) throw ParseError("unsupported format_version");
  const TimeGrid grid(inst);
  Solution sol;
  std::set<std::size_t> served;
  for (const auto& id : ju::require_array(doc, "served")) {
    if (!id.is_string()) throw ParseError("served ids must be strings");
    const auto c = inst.find_customer(id.get<std::string>());
    if (!c) throw ParseError("unknown customer " + id.get<std::string>());
    served.insert(*c);
  }
  sol.served.assign(served.begin(), served.end());
  auto space = [&](const ju::Json& obj, const char* key) {
    const auto id = ju::require_string(obj, key);
    const auto p = inst.find_space(id);
    if (!p) throw ParseError("unknown parking space " + id);
    return *p;
  };
  for (const auto& jf : ju::require_array(doc, "fulfillments")) {
    const auto c = inst.find_customer(ju::require_string(jf, "customer"));
    if (!c) throw ParseError("unknown customer in fulfillment");
    const auto k = ju::require_int(jf, "demand");
    const auto ds = inst.demands_of(*c);
    if (k < 1 || static_cast<std::size_t>(k) > ds.size()) throw ParseError("demand number out of range");
    sol.fulfillments.push_back(Fulfillment{ds[static_cast<std::size_t>(k - 1)], space(jf, "pickup_space"),
                                           space(jf, "dropoff_space"), ju::require_number(jf, "energy_out_wmin"),
                                           ju::require_number(jf, "energy_in_wmin")});
  }
  std::sort(sol.fulfillments.begin(), sol.fulfillments.end(),
            [](const auto& a, const auto& b) { return a.demand < b.demand; });
  sol.schedule.assign(inst.spaces().size(), {});
  for (const auto& js : ju::require_array(doc, "schedule")) {
    const auto p = space(js, "space");
    auto& sch = sol.schedule[p];
    for (const auto& y : ju::require_array(js, "occupied")) {
      if (!y.is_number_integer()) throw ParseError("occupancy entries must be 0 or 1");
      sch.occupied.push_back(static_cast<std::uint8_t>(y.get<int>()));
    }
    for (const auto& e : ju::require_array(js, "energy_wmin")) {
      if (!e.is_number()) throw ParseError("energy entries must be numbers");
      sch.energy.push_back(e.get<double>());
    }
  }
  sol.objective = ju::require_time(doc, "objective_min");
  return sol;
}

Solution load_solution(const Instance& inst, const std::filesystem::path& path) {
  return parse_solution(inst, json_util::read_file(path));
}

std::string dump_solution(const Instance& inst, const Solution& sol) {
  using json_util::Json;
  Json doc = Json::object();
  doc["format_version"] = 1;
  doc["instance"] = inst.name();
  doc["objective_min"] = json_util::time_value(sol.objective);
  doc["served"] = sol.served_ids(inst);
  Json fs = Json::array();
  for (const auto& f : sol.fulfillments) {
    const auto& d = inst.demands()[f.demand];
    Json jf = Json::object();
    jf["customer"] = inst.customers()[d.customer].id;
    jf["demand"] = d.local + 1;
    jf["pickup_space"] = inst.spaces()[f.pickup].id;
    jf["dropoff_space"] = inst.spaces()[f.dropoff].id;
    jf["energy_out_wmin"] = f.energy_out;
    jf["energy_in_wmin"] = f.energy_in;
    fs.push_back(std::move(jf));
  }
  doc["fulfillments"] = std::move(fs);
  Json sch = Json::array();
  for (std::size_t p = 0; p < sol.schedule.size(); ++p) {
    Json js = Json::object();
    js["space"] = inst.spaces()[p].id;
    js["occupied"] = sol.schedule[p].occupied;
    js["energy_wmin"] = sol.schedule[p].energy;
    sch.push_back(std::move(js));
  }
  doc["schedule"] = std::move(sch);
  return doc.dump(2) + "\n";
}

void save_solution(const Instance& inst, const Solution& sol, const std::filesystem::path& path) {
  json_util::write_file(path, dump_solution(inst, sol));
}

}  // namespace evsp
