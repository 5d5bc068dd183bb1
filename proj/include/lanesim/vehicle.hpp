#pragma once

#include <cstdint>

#include "lanesim/road.hpp"

namespace lanesim {

// Full kinematic record of one vehicle. All units SI; theta is the heading
// relative to the road axis, positive toward increasing y.
struct VehicleState {
  std::uint64_t vid = 0;
  double x = 0.0;        // m along road
  double y = 0.0;        // m lateral, global
  double v = 0.0;        // m/s
  double a = 0.0;        // m/s^2 longitudinal
  double theta = 0.0;    // rad
  double omega = 0.0;    // rad/s yaw rate
  double length = 5.0;   // m
  double v_limit = 30.0; // m/s individual speed limit

  int lane_index(const RoadGeometry& road) const {
    return road.lane_index_for_y(y);
  }
};

}  // namespace lanesim
