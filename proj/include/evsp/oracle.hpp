#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evsp/instance.hpp"

namespace evsp::oracle {

struct Limits {
  std::size_t max_customers = 8;
  std::size_t max_vehicles = 3;
  std::size_t max_demands = 12;
};

class SizeCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Result {
  Minutes objective;
  std::vector<std::size_t> served;  // ascending customer indices
  std::size_t subsets_checked = 0;
};

/// Throws SizeCapError when the instance exceeds the limits.
void check_limits(const Instance& inst, const Limits& limits);

/// Can every demand of exactly these customers be fulfilled together?
/// Depth-first search over the chronological pick-up/drop-off events with
/// charging always on while parked on a charger.
bool is_servable(const Instance& inst, const std::vector<std::size_t>& customers, const Limits& limits = {});

/// Optimum by enumerating customer subsets in decreasing total rental time.
Result solve_exhaustive(const Instance& inst, const Limits& limits = {});

enum class WitnessMode {
  /// Some customer set is infeasible while a superset with one more customer
  /// is feasible.
  Subset,
  /// No set of k customers is feasible while some set of k + 1 is.
  Cardinality,
};

struct Witness {
  Instance instance;
  std::uint64_t seed = 0;
  std::vector<std::size_t> smaller;  // infeasible
  std::vector<std::size_t> larger;   // feasible, |larger| = |smaller| + 1
};

/// Tries `count` instances made by `make(seed)` for seeds first, first+1, ...
/// and returns the first witness, re-verified on both sets.
std::optional<Witness> find_nonmonotone_witness(const std::function<Instance(std::uint64_t)>& make, std::uint64_t first,
                                                std::size_t count, WitnessMode mode = WitnessMode::Subset,
                                                const Limits& limits = {});

/// Witness check on one instance.
std::optional<Witness> nonmonotone_witness_in(const Instance& inst, WitnessMode mode, const Limits& limits = {});

}  // namespace evsp::oracle
