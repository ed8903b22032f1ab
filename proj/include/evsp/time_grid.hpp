#pragma once

#include <cstddef>
#include <vector>

#include "evsp/instance.hpp"

namespace evsp {

/// Event times per station. Every space of a station shares the station's
/// grid. Grid index 0 is the sentinel t_0 that precedes every demand time;
/// index k >= 1 refers to times(s)[k - 1].
class TimeGrid {
 public:
  explicit TimeGrid(const Instance& inst);

  /// Sorted distinct demand times at a station (without t_0).
  const std::vector<Minutes>& times(std::size_t station) const { return times_[station]; }
  /// Number of grid points including t_0.
  std::size_t size(std::size_t station) const { return times_[station].size() + 1; }
  /// Grid index of a time that belongs to the station's grid.
  std::size_t index_of(std::size_t station, const Minutes& t) const;
  const Minutes& time_at(std::size_t station, std::size_t k) const { return times_[station].at(k - 1); }

  /// E^p_t for a space at grid index k: mu * (t_k - t_{k-1}) on charger
  /// spaces, 0 elsewhere. E at the first real time is 0 because t_0 has no
  /// numeric value.
  double charge(std::size_t space, std::size_t k) const;

  std::size_t depart_index(std::size_t demand) const { return depart_index_[demand]; }
  std::size_t arrive_index(std::size_t demand) const { return arrive_index_[demand]; }

 private:
  const Instance* inst_;
  std::vector<std::vector<Minutes>> times_;
  std::vector<std::size_t> depart_index_;
  std::vector<std::size_t> arrive_index_;
};

}  // namespace evsp
