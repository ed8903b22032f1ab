#include "evsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_util.hpp"

namespace evsp {

Minutes Customer::total_rental_time() const {
  Minutes total;
  for (const auto& d : demands) total += d.duration();
  return total;
}

Instance::Instance(std::string name, double battery_capacity, double charge_rate, std::vector<Station> stations,
                   std::vector<Vehicle> vehicles, std::vector<Customer> customers)
    : name_(std::move(name)),
      battery_capacity_(battery_capacity),
      charge_rate_(charge_rate),
      stations_(std::move(stations)),
      vehicles_(std::move(vehicles)),
      customers_(std::move(customers)) {
  validate_and_index();
}

void Instance::validate_and_index() {
  if (!(battery_capacity_ > 0.0) || !std::isfinite(battery_capacity_)) {
    throw InvariantError("battery_capacity_positive", "battery capacity must be > 0");
  }
  if (!(charge_rate_ > 0.0) || !std::isfinite(charge_rate_)) {
    throw InvariantError("charge_rate_positive", "charge rate must be > 0");
  }

  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(stations_.begin(), stations_.end(), by_id);
  std::sort(vehicles_.begin(), vehicles_.end(), by_id);
  std::sort(customers_.begin(), customers_.end(), by_id);

  for (std::size_t s = 0; s < stations_.size(); ++s) {
    const auto& st = stations_[s];
    if (!station_lookup_.emplace(st.id, s).second) throw InvariantError("unique_station_id", st.id);
    if (st.capacity < 1) throw InvariantError("station_capacity", st.id + " must have capacity >= 1");
    if (st.chargers < 0 || st.chargers > st.capacity) {
      throw InvariantError("station_chargers", st.id + " needs 0 <= chargers <= capacity");
    }
  }

  first_space_.resize(stations_.size());
  for (std::size_t s = 0; s < stations_.size(); ++s) {
    first_space_[s] = spaces_.size();
    for (int k = 0; k < stations_[s].capacity; ++k) {
      ParkingSpace p{stations_[s].id + "/" + std::to_string(k + 1), s, k < stations_[s].chargers};
      space_lookup_.emplace(p.id, spaces_.size());
      spaces_.push_back(std::move(p));
    }
  }

  // psi: vehicles in id order; charger-initial ones take charger spaces in
  // order, the rest take the non-charger spaces in order.
  std::set<std::string> vehicle_ids;
  std::vector<int> next_charger(stations_.size(), 0);
  std::vector<int> next_plain(stations_.size(), 0);
  space_vehicle_.assign(spaces_.size(), std::nullopt);
  initial_space_.clear();
  for (std::size_t v = 0; v < vehicles_.size(); ++v) {
    const auto& veh = vehicles_[v];
    if (!vehicle_ids.insert(veh.id).second) throw InvariantError("unique_vehicle_id", veh.id);
    const auto it = station_lookup_.find(veh.station);
    if (it == station_lookup_.end()) {
      throw InvariantError("vehicle_station_exists", veh.id + " references unknown station " + veh.station);
    }
    if (!(veh.initial_energy >= 0.0) || veh.initial_energy > battery_capacity_) {
      throw InvariantError("vehicle_initial_energy", veh.id + " needs 0 <= initial energy <= battery capacity");
    }
    const std::size_t s = it->second;
    const auto& st = stations_[s];
    std::size_t space;
    if (veh.on_charger) {
      if (next_charger[s] >= st.chargers) {
        throw InvariantError("charger_vehicles_fit", "station " + st.id + " has more charger-initial vehicles than chargers");
      }
      space = first_space_[s] + static_cast<std::size_t>(next_charger[s]++);
    } else {
      if (next_plain[s] >= st.capacity - st.chargers) {
        throw InvariantError("plain_vehicles_fit",
                             "station " + st.id + " has more off-charger vehicles than non-charging spaces");
      }
      space = first_space_[s] + static_cast<std::size_t>(st.chargers + next_plain[s]++);
    }
    initial_space_.push_back(space);
    space_vehicle_[space] = v;
  }

  customer_demands_.assign(customers_.size(), {});
  for (std::size_t c = 0; c < customers_.size(); ++c) {
    auto& cust = customers_[c];
    if (!customer_lookup_.emplace(cust.id, c).second) throw InvariantError("unique_customer_id", cust.id);
    if (cust.demands.empty()) throw InvariantError("customer_has_demands", cust.id);
    std::stable_sort(cust.demands.begin(), cust.demands.end(),
                     [](const Demand& a, const Demand& b) { return a.depart < b.depart; });
    for (std::size_t k = 0; k < cust.demands.size(); ++k) {
      const auto& d = cust.demands[k];
      const auto from = station_lookup_.find(d.from);
      const auto to = station_lookup_.find(d.to);
      if (from == station_lookup_.end() || to == station_lookup_.end()) {
        throw InvariantError("demand_station_exists", cust.id + " references an unknown station");
      }
      if (!(d.depart < d.arrive)) throw InvariantError("demand_depart_before_arrive", cust.id);
      if (!(d.energy > 0.0)) throw InvariantError("demand_energy_positive", cust.id);
      if (d.energy > battery_capacity_) {
        throw InvariantError("demand_energy_within_battery", cust.id + " needs more energy than a full battery");
      }
      if (k > 0 && cust.demands[k - 1].arrive > d.depart) {
        throw InvariantError("no_overlapping_rentals", cust.id + " has overlapping rental periods");
      }
      customer_demands_[c].push_back(demands_.size());
      demands_.push_back(DemandRef{c, k, from->second, to->second, d.depart, d.arrive, d.energy});
    }
  }
}

std::size_t Instance::station_index(std::string_view id) const {
  const auto it = station_lookup_.find(std::string(id));
  if (it == station_lookup_.end()) throw std::out_of_range("unknown station " + std::string(id));
  return it->second;
}

std::optional<std::size_t> Instance::find_customer(std::string_view id) const {
  const auto it = customer_lookup_.find(std::string(id));
  if (it == customer_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Instance::customer_index(std::string_view id) const {
  if (auto c = find_customer(id)) return *c;
  throw std::out_of_range("unknown customer " + std::string(id));
}

std::optional<std::size_t> Instance::find_space(std::string_view id) const {
  const auto it = space_lookup_.find(std::string(id));
  if (it == space_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Instance::initial_vehicle(std::size_t space) const { return space_vehicle_.at(space); }

Minutes evaluate_objective(const Instance& inst, std::span<const std::size_t> served_indices) {
  Minutes total;
  for (const auto c : served_indices) total += inst.customers()[c].total_rental_time();
  return total;
}

Minutes evaluate_objective(const Instance& inst, std::span<const std::string> served) {
  std::vector<std::size_t> idx;
  std::set<std::size_t> seen;
  for (const auto& id : served) {
    const auto c = inst.customer_index(id);
    if (seen.insert(c).second) idx.push_back(c);
  }
  return evaluate_objective(inst, idx);
}

namespace {

// kWh to watt-minutes, snapped to 1e-6 so decimal inputs land on exact values.
double watt_minutes(double kwh) { return std::round(kwh * kWattMinutesPerKwh * 1e6) / 1e6; }

const std::set<std::string> kInstanceFields = {"format_version", "name", "battery_capacity_kwh",
                                               "charge_rate_kwh_per_min", "stations", "vehicles", "customers"};

}  // namespace

Instance parse_instance(std::string_view json_text) {
  const auto doc = json_util::parse(json_text);
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!kInstanceFields.contains(key)) throw ParseError("unexpected instance field '" + key + "'");
  }
  if (json_util::require_int(doc, "format_version") != 1) throw ParseError("unsupported format_version");

  std::vector<Station> stations;
  for (const auto& s : json_util::require_array(doc, "stations")) {
    stations.push_back(Station{json_util::require_string(s, "id"), static_cast<int>(json_util::require_int(s, "capacity")),
                               static_cast<int>(json_util::require_int(s, "chargers"))});
  }
  std::vector<Vehicle> vehicles;
  for (const auto& v : json_util::require_array(doc, "vehicles")) {
    vehicles.push_back(Vehicle{json_util::require_string(v, "id"), json_util::require_string(v, "station"),
                               watt_minutes(json_util::require_number(v, "initial_energy_kwh")),
                               json_util::require_bool(v, "on_charger")});
  }
  std::vector<Customer> customers;
  for (const auto& c : json_util::require_array(doc, "customers")) {
    Customer cust{json_util::require_string(c, "id"), {}};
    for (const auto& d : json_util::require_array(c, "demands")) {
      cust.demands.push_back(Demand{json_util::require_string(d, "from"), json_util::require_time(d, "depart_min"),
                                    json_util::require_string(d, "to"), json_util::require_time(d, "arrive_min"),
                                    watt_minutes(json_util::require_number(d, "energy_kwh"))});
    }
    customers.push_back(std::move(cust));
  }
  return Instance(json_util::require_string(doc, "name"),
                  watt_minutes(json_util::require_number(doc, "battery_capacity_kwh")),
                  watt_minutes(json_util::require_number(doc, "charge_rate_kwh_per_min")), std::move(stations),
                  std::move(vehicles), std::move(customers));
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(json_util::read_file(path));
}

std::string dump_instance(const Instance& inst) {
  using json_util::Json;
  Json doc = Json::object();
  doc["format_version"] = 1;
  doc["name"] = inst.name();
  doc["battery_capacity_kwh"] = json_util::kwh(inst.battery_capacity());
  doc["charge_rate_kwh_per_min"] = json_util::kwh(inst.charge_rate());
  Json stations = Json::array();
  for (const auto& s : inst.stations()) {
    Json js = Json::object();
    js["id"] = s.id;
    js["capacity"] = s.capacity;
    js["chargers"] = s.chargers;
    stations.push_back(std::move(js));
  }
  doc["stations"] = std::move(stations);
  Json vehicles = Json::array();
  for (const auto& v : inst.vehicles()) {
    Json jv = Json::object();
    jv["id"] = v.id;
    jv["station"] = v.station;
    jv["initial_energy_kwh"] = json_util::kwh(v.initial_energy);
    jv["on_charger"] = v.on_charger;
    vehicles.push_back(std::move(jv));
  }
  doc["vehicles"] = std::move(vehicles);
  Json customers = Json::array();
  for (const auto& c : inst.customers()) {
    Json jc = Json::object();
    jc["id"] = c.id;
    Json demands = Json::array();
    for (const auto& d : c.demands) {
      Json jd = Json::object();
      jd["from"] = d.from;
      jd["depart_min"] = json_util::time_value(d.depart);
      jd["to"] = d.to;
      jd["arrive_min"] = json_util::time_value(d.arrive);
      jd["energy_kwh"] = json_util::kwh(d.energy);
      demands.push_back(std::move(jd));
    }
    jc["demands"] = std::move(demands);
    customers.push_back(std::move(jc));
  }
  doc["customers"] = std::move(customers);
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  json_util::write_file(path, dump_instance(inst));
}

}  // namespace evsp
