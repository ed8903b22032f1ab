#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "evsp/instance.hpp"

namespace evsp::gen {

/// Uniform integer in [lo, hi] by rejection sampling on the raw 64-bit
/// stream, so results do not depend on the standard library's distributions.
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

struct GridConfig {
  int min_stations = 3;
  int max_stations = 5;
  std::int64_t side_m = 50000;
  int min_capacity = 10;
  int max_capacity = 20;
  /// Chargers and vehicles per station as a fraction num/den of the
  /// capacity, rounded up.
  int charger_num = 1, charger_den = 2;
  int vehicle_num = 1, vehicle_den = 2;
  int max_demands_per_customer = 4;
  /// Travel speed in metres per minute (30 km/h).
  std::int64_t speed_m_per_min = 500;
  int max_jitter_min = 10;
  /// Consumption per driven minute, watt-minutes.
  double consumption_wmin_per_min = 11400.0;  // about 15% of demands need over half a battery
  double battery_kwh = 30.0;
  double charge_rate_kwh_per_min = 0.17;
};

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Random stations in a square grid; 1-4 demands per customer.
Instance generate_grid(int n_customers, std::uint64_t seed, const GridConfig& config = {});

/// Fixed 12-station city topology. Scenario 1: capacities {3,3,4 x 10}, every
/// space with a charger, one demand per customer. 2: as 1 with 1-4 demands.
/// 3: grid-style capacities, chargers and vehicles. 4: as 3 with every
/// station able to hold the whole fleet.
Instance generate_vamo(int scenario, int n_customers, std::uint64_t seed);

/// Tiny instance for the brute-force oracle: at most 6 customers, 2
/// vehicles, 3 stations and 12 demands, integer minutes and energies that
/// are whole multiples of 60 watt-minutes.
Instance generate_small(std::uint64_t seed);

}  // namespace evsp::gen
