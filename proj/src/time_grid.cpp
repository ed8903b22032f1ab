#include "evsp/time_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace evsp {

TimeGrid::TimeGrid(const Instance& inst) : inst_(&inst), times_(inst.stations().size()) {
  for (const auto& d : inst.demands()) {
    times_[d.from].push_back(d.depart);
    times_[d.to].push_back(d.arrive);
  }
  for (auto& ts : times_) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }
  for (const auto& d : inst.demands()) {
    depart_index_.push_back(index_of(d.from, d.depart));
    arrive_index_.push_back(index_of(d.to, d.arrive));
  }
}

std::size_t TimeGrid::index_of(std::size_t station, const Minutes& t) const {
  const auto& ts = times_.at(station);
  const auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it == ts.end() || *it != t) throw std::out_of_range("time " + t.to_string() + " is not on the station grid");
  return static_cast<std::size_t>(it - ts.begin()) + 1;
}

double TimeGrid::charge(std::size_t space, std::size_t k) const {
  const auto& p = inst_->spaces()[space];
  if (!p.has_charger || k < 2) return 0.0;
  const auto& ts = times_[p.station];
  return inst_->charge_rate() * (ts[k - 1] - ts[k - 2]).to_double();
}

}  // namespace evsp
