#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace coarsetop {

// Radii, windows, depth factor α and connectivity scale s of a sweep.
struct ScaleSchedule {
  std::vector<double> radii{1, 2, 4, 8};
  std::vector<double> windows{8, 16, 32, 64};
  double alpha = 0.5;
  double connect = 1;

  static ScaleSchedule defaults() { return {}; }

  // "default", an inline form such as "windows=8,16;radii=1,2;alpha=0.5;connect=1",
  // or the path of a JSON file with the same keys.
  static ScaleSchedule parse(std::string_view text);

  // Throws InputError when lists are empty or not strictly increasing, or when
  // the largest radius exceeds the largest window.
  void validate() const;

  // Positions of the windows that make up the top half of the schedule: the last
  // ceil(n/2) entries.
  std::vector<std::size_t> top_half() const;

  nlohmann::json to_json() const;
  static ScaleSchedule from_json(const nlohmann::json& j);
};

// True when every value at a top-half position equals the first of them.
template <class T>
bool stable_over_top_half(const ScaleSchedule& schedule, const std::vector<T>& by_window) {
  const auto top = schedule.top_half();
  for (std::size_t i : top)
    if (!(by_window[i] == by_window[top.front()])) return false;
  return true;
}

}  // namespace coarsetop

namespace coarsetop {

inline bool stable_over_top_half(const ScaleSchedule& schedule, const std::vector<double>& by_window,
                                 double tolerance) {
  const auto top = schedule.top_half();
  const double ref = by_window[top.front()];
  for (std::size_t i : top) {
    const double v = by_window[i];
    if (v == ref) continue;  // also covers matching infinities
    if (!(v - ref <= tolerance && ref - v <= tolerance)) return false;
  }
  return true;
}

}  // namespace coarsetop
