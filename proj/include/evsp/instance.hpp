#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evsp/rational.hpp"

namespace evsp {

/// Watt-minutes per kilowatt-hour; instance files carry kWh.
inline constexpr double kWattMinutesPerKwh = 60000.0;

/// Malformed instance or solution document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed document that violates a domain invariant.
class InvariantError : public std::runtime_error {
 public:
  InvariantError(std::string invariant, const std::string& detail)
      : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

struct Station {
  std::string id;
  int capacity = 0;
  int chargers = 0;
};

struct Vehicle {
  std::string id;
  std::string station;
  double initial_energy = 0.0;  // watt-minutes
  bool on_charger = false;
};

struct Demand {
  std::string from;
  Minutes depart;
  std::string to;
  Minutes arrive;
  double energy = 0.0;  // watt-minutes

  Minutes duration() const { return arrive - depart; }
};

struct Customer {
  std::string id;
  std::vector<Demand> demands;

  Minutes total_rental_time() const;
};

struct ParkingSpace {
  std::string id;
  std::size_t station = 0;
  bool has_charger = false;
};

/// A demand addressed by position in the instance's flat demand list.
struct DemandRef {
  std::size_t customer = 0;
  std::size_t local = 0;  // index inside the customer's demand list
  std::size_t from = 0;   // station index
  std::size_t to = 0;     // station index
  Minutes depart;
  Minutes arrive;
  double energy = 0.0;
};

/// Validated EVSP instance.
///
/// Stations, vehicles and customers are held sorted by id; each customer's
/// demands are sorted by departure. Energies are in watt-minutes and the
/// charge rate in watt-minutes per minute. Parking spaces are derived: the
/// first `chargers` spaces of every station carry a charging facility.
class Instance {
 public:
  Instance(std::string name, double battery_capacity, double charge_rate, std::vector<Station> stations,
           std::vector<Vehicle> vehicles, std::vector<Customer> customers);

  const std::string& name() const { return name_; }
  double battery_capacity() const { return battery_capacity_; }
  double charge_rate() const { return charge_rate_; }

  std::span<const Station> stations() const { return stations_; }
  std::span<const Vehicle> vehicles() const { return vehicles_; }
  std::span<const Customer> customers() const { return customers_; }
  std::span<const DemandRef> demands() const { return demands_; }
  std::span<const ParkingSpace> spaces() const { return spaces_; }

  std::size_t station_index(std::string_view id) const;
  std::optional<std::size_t> find_customer(std::string_view id) const;
  std::size_t customer_index(std::string_view id) const;
  std::optional<std::size_t> find_space(std::string_view id) const;

  /// Spaces of a station occupy the contiguous range [first, first + capacity).
  std::size_t first_space(std::size_t station) const { return first_space_[station]; }
  std::size_t space_count(std::size_t station) const {
    return static_cast<std::size_t>(stations_[station].capacity);
  }
  /// Flat demand indices belonging to a customer.
  std::span<const std::size_t> demands_of(std::size_t customer) const { return customer_demands_[customer]; }

  /// psi: the parking space each vehicle occupies at t_0 (vehicle order).
  std::span<const std::size_t> initial_space() const { return initial_space_; }
  /// Vehicle parked on a space at t_0, if any.
  std::optional<std::size_t> initial_vehicle(std::size_t space) const;

 private:
  void validate_and_index();

  std::string name_;
  double battery_capacity_;
  double charge_rate_;
  std::vector<Station> stations_;
  std::vector<Vehicle> vehicles_;
  std::vector<Customer> customers_;

  std::vector<ParkingSpace> spaces_;
  std::vector<std::size_t> first_space_;
  std::vector<DemandRef> demands_;
  std::vector<std::vector<std::size_t>> customer_demands_;
  std::vector<std::size_t> initial_space_;
  std::vector<std::optional<std::size_t>> space_vehicle_;
  std::unordered_map<std::string, std::size_t> station_lookup_;
  std::unordered_map<std::string, std::size_t> customer_lookup_;
  std::unordered_map<std::string, std::size_t> space_lookup_;
};

/// Sum of rental durations over the served customers' demands.
Minutes evaluate_objective(const Instance& inst, std::span<const std::string> served);
Minutes evaluate_objective(const Instance& inst, std::span<const std::size_t> served_indices);

Instance parse_instance(std::string_view json_text);
Instance load_instance(const std::filesystem::path& path);
/// Canonical document: two-space indentation, fields in a fixed order.
std::string dump_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace evsp
