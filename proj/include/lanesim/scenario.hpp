#pragma once

#include <cstdint>

namespace lanesim {

inline constexpr double kKmhToMps = 1.0 / 3.6;

// Traffic generation and clock settings, SI units. Produced by the config
// loader, which converts the km/h keys on load.
struct ScenarioConfig {
  double departure_interval_min_s = 5.0;
  double departure_interval_max_s = 10.0;
  double v_limit_min = 80.0 * kKmhToMps;   // m/s
  double v_limit_max = 120.0 * kKmhToMps;  // m/s
  double dt = 0.1;                         // s
  std::uint64_t seed = 1;
  double command_x_min = 100.0;  // m, lane-change command issuance window
  double command_x_max = 600.0;  // m
  long max_sim_steps = 40000;
  double vehicle_length = 5.0;   // m
  double entrance_clear_x = 15.0;  // m, lane entrance must be clear of traffic
};

}  // namespace lanesim
