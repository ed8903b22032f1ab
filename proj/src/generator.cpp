#include "evsp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace evsp::gen {

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw GeneratorError("empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

namespace {

constexpr double kWmin = kWattMinutesPerKwh;

std::string make_id(char prefix, std::size_t i, std::size_t n) {
  auto digits = std::to_string(n).size();
  auto s = std::to_string(i + 1);
  return std::string(1, prefix) + std::string(digits - s.size(), '0') + s;
}

struct Site {
  std::int64_t x = 0, y = 0;
  int capacity = 0;
  int chargers = 0;
  int vehicles = 0;
};

int ceil_frac(int value, int num, int den) { return (value * num + den - 1) / den; }

// Customers shared by the grid and city generators. Departure times follow a
// morning or an evening peak; later demands leave from the previous drop-off.
std::vector<Customer> make_customers(std::mt19937_64& rng, const std::vector<Site>& sites, int n_customers,
                                     int max_demands, const GridConfig& cfg) {
  const auto n_sites = static_cast<std::int64_t>(sites.size());
  std::vector<Customer> customers;
  for (int c = 0; c < n_customers; ++c) {
    Customer cust{make_id('c', static_cast<std::size_t>(c), static_cast<std::size_t>(n_customers)), {}};
    const auto n_dem = uniform(rng, 1, max_demands);
    std::int64_t t = uniform(rng, 0, 1) == 0 ? uniform(rng, 420, 540) : uniform(rng, 960, 1140);
    auto from = uniform(rng, 0, n_sites - 1);
    for (std::int64_t j = 0; j < n_dem; ++j) {
      if (j > 0) t += uniform(rng, 10, 240);
      const auto to = uniform(rng, 0, n_sites - 1);
      const double dx = static_cast<double>(sites[from].x - sites[to].x);
      const double dy = static_cast<double>(sites[from].y - sites[to].y);
      const auto drive = std::llround(std::sqrt(dx * dx + dy * dy) / static_cast<double>(cfg.speed_m_per_min));
      const auto duration = std::max<std::int64_t>(1, drive + uniform(rng, 0, cfg.max_jitter_min));
      cust.demands.push_back(Demand{make_id('s', static_cast<std::size_t>(from), sites.size()), Minutes(t),
                                    make_id('s', static_cast<std::size_t>(to), sites.size()), Minutes(t + duration),
                                    cfg.consumption_wmin_per_min * static_cast<double>(duration)});
      t += duration;
      from = to;
    }
    customers.push_back(std::move(cust));
  }
  return customers;
}

Instance assemble(std::string name, const std::vector<Site>& sites, std::vector<Customer> customers,
                  const GridConfig& cfg) {
  std::vector<Station> stations;
  std::vector<Vehicle> vehicles;
  std::size_t fleet = 0;
  for (const auto& s : sites) fleet += static_cast<std::size_t>(s.vehicles);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto id = make_id('s', i, sites.size());
    stations.push_back(Station{id, sites[i].capacity, sites[i].chargers});
    const int plain = sites[i].capacity - sites[i].chargers;
    const int on_charger = std::max(sites[i].vehicles - plain, std::min(sites[i].chargers, (sites[i].vehicles + 1) / 2));
    for (int v = 0; v < sites[i].vehicles; ++v) {
      vehicles.push_back(Vehicle{make_id('v', vehicles.size(), fleet), id, cfg.battery_kwh * kWmin, v < on_charger});
    }
  }
  return Instance(std::move(name), cfg.battery_kwh * kWmin, cfg.charge_rate_kwh_per_min * kWmin, std::move(stations),
                  std::move(vehicles), std::move(customers));
}

// Metre coordinates of the 12 city stations (a compact urban area).
constexpr std::int64_t kCity[12][2] = {{1200, 3400}, {2500, 1800}, {3100, 4200}, {4000, 2600}, {4700, 5100}, {5200, 1200},
                                       {6100, 3900}, {6800, 2300}, {7400, 5600}, {8000, 3000}, {8900, 4500}, {9600, 1700}};

}  // namespace

Instance generate_grid(int n_customers, std::uint64_t seed, const GridConfig& cfg) {
  if (n_customers < 1) throw GeneratorError("need at least one customer");
  std::mt19937_64 rng(seed);
  const auto n_st = uniform(rng, cfg.min_stations, cfg.max_stations);
  std::vector<Site> sites;
  for (std::int64_t s = 0; s < n_st; ++s) {
    Site site;
    site.x = uniform(rng, 0, cfg.side_m);
    site.y = uniform(rng, 0, cfg.side_m);
    site.capacity = static_cast<int>(uniform(rng, cfg.min_capacity, cfg.max_capacity));
    site.chargers = ceil_frac(site.capacity, cfg.charger_num, cfg.charger_den);
    site.vehicles = ceil_frac(site.capacity, cfg.vehicle_num, cfg.vehicle_den);
    sites.push_back(site);
  }
  auto customers = make_customers(rng, sites, n_customers, cfg.max_demands_per_customer, cfg);
  return assemble("grid-" + std::to_string(n_customers) + "-" + std::to_string(seed), sites, std::move(customers), cfg);
}

Instance generate_vamo(int scenario, int n_customers, std::uint64_t seed) {
  if (scenario < 1 || scenario > 4) throw GeneratorError("scenario must be 1, 2, 3 or 4");
  if (n_customers < 1) throw GeneratorError("need at least one customer");
  GridConfig cfg;
  std::mt19937_64 rng(seed);
  std::vector<Site> sites;
  for (const auto& xy : kCity) sites.push_back(Site{xy[0], xy[1], 0, 0, 0});
  if (scenario <= 2) {
    // Twenty vehicles dealt round-robin; every space has a charger.
    for (std::size_t i = 0; i < sites.size(); ++i) {
      sites[i].capacity = i < 2 ? 3 : 4;
      sites[i].chargers = sites[i].capacity;
    }
    for (int v = 0; v < 20; ++v) sites[static_cast<std::size_t>(v) % sites.size()].vehicles += 1;
  } else {
    for (auto& s : sites) {
      s.capacity = static_cast<int>(uniform(rng, cfg.min_capacity, cfg.max_capacity));
      s.chargers = ceil_frac(s.capacity, cfg.charger_num, cfg.charger_den);
      s.vehicles = ceil_frac(s.capacity, cfg.vehicle_num, cfg.vehicle_den);
    }
  }
  auto customers = make_customers(rng, sites, n_customers, scenario == 1 ? 1 : cfg.max_demands_per_customer, cfg);
  if (scenario == 4) {
    int fleet = 0;
    for (const auto& s : sites) fleet += s.vehicles;
    for (auto& s : sites) s.capacity = fleet;
  }
  return assemble("vamo" + std::to_string(scenario) + "-" + std::to_string(n_customers) + "-" + std::to_string(seed), sites,
                  std::move(customers), cfg);
}

Instance generate_small(std::uint64_t seed) {
  constexpr double unit = 60.0;  // watt-minutes; keeps kWh values short decimals
  std::mt19937_64 rng(seed);
  const auto n_st = static_cast<std::size_t>(uniform(rng, 2, 3));
  std::vector<Station> stations;
  std::vector<int> free_charger, free_plain;
  for (std::size_t s = 0; s < n_st; ++s) {
    const int cap = static_cast<int>(uniform(rng, 1, 2));
    const int chargers = static_cast<int>(uniform(rng, 0, cap));
    stations.push_back(Station{make_id('s', s, n_st), cap, chargers});
    free_charger.push_back(chargers);
    free_plain.push_back(cap - chargers);
  }
  const double battery = unit * 100;
  const auto n_veh = static_cast<std::size_t>(uniform(rng, 1, 2));
  std::vector<Vehicle> vehicles;
  for (std::size_t v = 0; v < n_veh; ++v) {
    std::vector<std::size_t> open;
    for (std::size_t s = 0; s < n_st; ++s) {
      if (free_charger[s] + free_plain[s] > 0) open.push_back(s);
    }
    const auto s = open[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(open.size()) - 1))];
    bool charger = free_charger[s] > 0 && (free_plain[s] == 0 || uniform(rng, 0, 1) == 1);
    (charger ? free_charger[s] : free_plain[s]) -= 1;
    vehicles.push_back(Vehicle{make_id('v', v, n_veh), stations[s].id, unit * static_cast<double>(uniform(rng, 0, 100)), charger});
  }
  const auto n_cust = static_cast<std::size_t>(uniform(rng, 1, 6));
  std::vector<Customer> customers;
  std::size_t demands_left = 12;
  for (std::size_t c = 0; c < n_cust; ++c) {
    Customer cust{make_id('c', c, n_cust), {}};
    const auto n_dem = std::min<std::size_t>(static_cast<std::size_t>(uniform(rng, 1, 2)), demands_left - (n_cust - c - 1));
    demands_left -= n_dem;
    std::int64_t t = uniform(rng, 0, 40);
    auto from = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n_st) - 1));
    for (std::size_t j = 0; j < n_dem; ++j) {
      if (j > 0) t += uniform(rng, 0, 10);
      const auto to = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(n_st) - 1));
      const auto duration = uniform(rng, 1, 20);
      cust.demands.push_back(Demand{stations[from].id, Minutes(t), stations[to].id, Minutes(t + duration),
                                    unit * static_cast<double>(uniform(rng, 5, 80))});
      t += duration;
      from = to;
    }
    customers.push_back(std::move(cust));
  }
  const double rate = unit * static_cast<double>(uniform(rng, 1, 5));
  return Instance("small-" + std::to_string(seed), battery, rate, std::move(stations), std::move(vehicles),
                  std::move(customers));
}

}  // namespace evsp::gen
