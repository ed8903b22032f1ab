#include "evsp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_set>

namespace evsp::oracle {

namespace {

constexpr double kTol = 1e-6;

struct Parked {
  bool charger = false;
  double energy = 0.0;  // at `since`
  Minutes since;
};

struct Event {
  Minutes t;
  int kind = 0;  // 0 arrival, 1 departure
  std::size_t demand = 0;
};

class Search {
 public:
  Search(const Instance& inst, const std::vector<std::size_t>& customers) : inst_(inst) {
    const auto n_st = inst.stations().size();
    first_time_.assign(n_st, std::nullopt);
    for (const auto& d : inst.demands()) {
      note_time(d.from, d.depart);
      note_time(d.to, d.arrive);
    }
    std::vector<std::uint8_t> chosen(inst.customers().size(), 0);
    for (const auto c : customers) chosen.at(c) = 1;
    for (std::size_t d = 0; d < inst.demands().size(); ++d) {
      if (!chosen[inst.demands()[d].customer]) continue;
      events_.push_back(Event{inst.demands()[d].depart, 1, d});
      events_.push_back(Event{inst.demands()[d].arrive, 0, d});
    }
    std::sort(events_.begin(), events_.end(),
              [](const Event& a, const Event& b) { return std::tie(a.t, a.kind, a.demand) < std::tie(b.t, b.kind, b.demand); });

    parked_.assign(n_st, {});
    free_charger_.assign(n_st, 0);
    free_plain_.assign(n_st, 0);
    for (std::size_t s = 0; s < n_st; ++s) {
      free_charger_[s] = inst.stations()[s].chargers;
      free_plain_[s] = inst.stations()[s].capacity - inst.stations()[s].chargers;
    }
    for (const auto& v : inst.vehicles()) {
      const auto s = inst.station_index(v.station);
      parked_[s].push_back(Parked{v.on_charger, v.initial_energy, first_time_[s].value_or(Minutes(0))});
      (v.on_charger ? free_charger_[s] : free_plain_[s]) -= 1;
    }
    transit_.assign(inst.demands().size(), 0.0);
  }

  bool run() { return dfs(0); }

 private:
  void note_time(std::size_t s, const Minutes& t) {
    if (!first_time_[s] || t < *first_time_[s]) first_time_[s] = t;
  }

  double energy_at(std::size_t s, const Parked& p, const Minutes& t) const {
    if (!p.charger) return p.energy;
    Minutes from = p.since;
    if (first_time_[s] && *first_time_[s] > from) from = *first_time_[s];
    if (t <= from) return p.energy;
    return std::min(inst_.battery_capacity(), p.energy + inst_.charge_rate() * (t - from).to_double());
  }

  static long long rounded(double e) { return std::llround(e / kTol); }

  std::string key(std::size_t i, const Minutes& t) const {
    std::string k = std::to_string(i) + "|";
    for (std::size_t s = 0; s < parked_.size(); ++s) {
      std::vector<std::pair<int, long long>> items;
      for (const auto& p : parked_[s]) items.emplace_back(p.charger ? 1 : 0, rounded(energy_at(s, p, t)));
      std::sort(items.begin(), items.end());
      for (const auto& [c, e] : items) k += std::to_string(c) + ":" + std::to_string(e) + ",";
      k += ";";
    }
    for (std::size_t j = i; j < events_.size(); ++j) {
      if (events_[j].kind == 0) k += std::to_string(rounded(transit_[events_[j].demand])) + ",";
    }
    return k;
  }

  bool dfs(std::size_t i) {
    if (i == events_.size()) return true;
    const auto& ev = events_[i];
    const auto k = key(i, ev.t);
    if (failed_.contains(k)) return false;
    const auto& d = inst_.demands()[ev.demand];
    bool ok = false;
    if (ev.kind == 0) {
      const auto s = d.to;
      for (const bool charger : {true, false}) {
        int& free = charger ? free_charger_[s] : free_plain_[s];
        if (free == 0) continue;
        --free;
        parked_[s].push_back(Parked{charger, transit_[ev.demand], ev.t});
        ok = dfs(i + 1);
        parked_[s].pop_back();
        ++free;
        if (ok) break;
      }
    } else {
      const auto s = d.from;
      std::vector<std::pair<int, long long>> tried;
      for (std::size_t j = 0; j < parked_[s].size() && !ok; ++j) {
        const auto p = parked_[s][j];
        const double e = energy_at(s, p, ev.t);
        if (e < d.energy - kTol) continue;
        const std::pair<int, long long> sig{p.charger ? 1 : 0, rounded(e)};
        if (std::find(tried.begin(), tried.end(), sig) != tried.end()) continue;
        tried.push_back(sig);
        parked_[s].erase(parked_[s].begin() + static_cast<std::ptrdiff_t>(j));
        (p.charger ? free_charger_[s] : free_plain_[s]) += 1;
        transit_[ev.demand] = e - d.energy;
        ok = dfs(i + 1);
        (p.charger ? free_charger_[s] : free_plain_[s]) -= 1;
        parked_[s].insert(parked_[s].begin() + static_cast<std::ptrdiff_t>(j), p);
      }
    }
    if (!ok) failed_.insert(k);
    return ok;
  }

  const Instance& inst_;
  std::vector<std::optional<Minutes>> first_time_;
  std::vector<Event> events_;
  std::vector<std::vector<Parked>> parked_;
  std::vector<int> free_charger_, free_plain_;
  std::vector<double> transit_;
  std::unordered_set<std::string> failed_;
};

std::vector<std::size_t> members(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; mask >> c; ++c) {
    if ((mask >> c) & 1U) out.push_back(c);
  }
  return out;
}

std::vector<std::uint8_t> feasibility_table(const Instance& inst) {
  const std::uint64_t n = std::uint64_t{1} << inst.customers().size();
  std::vector<std::uint8_t> feasible(n, 0);
  for (std::uint64_t mask = 0; mask < n; ++mask) feasible[mask] = Search(inst, members(mask)).run() ? 1 : 0;
  return feasible;
}

}  // namespace

void check_limits(const Instance& inst, const Limits& limits) {
  auto fail = [](const std::string& what, std::size_t n, std::size_t cap) {
    throw SizeCapError(what + " " + std::to_string(n) + " exceeds the oracle cap " + std::to_string(cap));
  };
  if (inst.customers().size() > limits.max_customers) fail("customer count", inst.customers().size(), limits.max_customers);
  if (inst.vehicles().size() > limits.max_vehicles) fail("vehicle count", inst.vehicles().size(), limits.max_vehicles);
  if (inst.demands().size() > limits.max_demands) fail("demand count", inst.demands().size(), limits.max_demands);
  if (inst.customers().size() > 62) fail("customer count", inst.customers().size(), 62);
}

bool is_servable(const Instance& inst, const std::vector<std::size_t>& customers, const Limits& limits) {
  check_limits(inst, limits);
  return Search(inst, customers).run();
}

Result solve_exhaustive(const Instance& inst, const Limits& limits) {
  check_limits(inst, limits);
  const std::size_t n = inst.customers().size();
  std::vector<Minutes> rental(n);
  for (std::size_t c = 0; c < n; ++c) rental[c] = inst.customers()[c].total_rental_time();
  std::vector<std::pair<Minutes, std::uint64_t>> subsets;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Minutes total(0);
    for (const auto c : members(mask)) total += rental[c];
    subsets.emplace_back(total, mask);
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  Result result;
  for (const auto& [total, mask] : subsets) {
    ++result.subsets_checked;
    if (Search(inst, members(mask)).run()) {
      result.objective = total;
      result.served = members(mask);
      return result;
    }
  }
  return result;  // unreachable: the empty set is always servable
}

std::optional<Witness> nonmonotone_witness_in(const Instance& inst, WitnessMode mode, const Limits& limits) {
  check_limits(inst, limits);
  const std::size_t n = inst.customers().size();
  if (n == 0) return std::nullopt;
  const auto feasible = feasibility_table(inst);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  auto make = [&](std::uint64_t small, std::uint64_t large) {
    Witness w{inst, 0, members(small), members(large)};
    // Re-verify both sides with fresh searches.
    if (Search(inst, w.smaller).run() || !Search(inst, w.larger).run()) return std::optional<Witness>();
    return std::optional<Witness>(std::move(w));
  };
  if (mode == WitnessMode::Subset) {
    for (std::size_t size = 0; size < n; ++size) {
      for (std::uint64_t mask = 0; mask <= all; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != size || feasible[mask]) continue;
        for (std::size_t c = 0; c < n; ++c) {
          const auto bigger = mask | (std::uint64_t{1} << c);
          if (bigger != mask && feasible[bigger]) return make(mask, bigger);
        }
      }
    }
    return std::nullopt;
  }
  std::vector<int> any_feasible(n + 1, 0);
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    if (feasible[mask]) any_feasible[static_cast<std::size_t>(std::popcount(mask))] = 1;
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (any_feasible[k] || !any_feasible[k + 1]) continue;
    for (std::uint64_t mask = 0; mask <= all; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != k + 1 || !feasible[mask]) continue;
      const auto smaller = mask & (mask - 1);  // drop the lowest customer
      return make(smaller, mask);
    }
  }
  return std::nullopt;
}

std::optional<Witness> find_nonmonotone_witness(const std::function<Instance(std::uint64_t)>& make, std::uint64_t first,
                                                std::size_t count, WitnessMode mode, const Limits& limits) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = first + i;
    auto w = nonmonotone_witness_in(make(seed), mode, limits);
    if (w) {
      w->seed = seed;
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace evsp::oracle
