#include "lanesim/lateral.hpp"

#include <algorithm>
#include <cmath>

namespace lanesim {

void integrate_lateral(VehicleState& ego, double a_yaw, double dt) {
  ego.omega = std::clamp(ego.omega + a_yaw * dt, -kOmegaLimit, kOmegaLimit);
  ego.theta = std::clamp(ego.theta + ego.omega * dt, -kThetaLimit, kThetaLimit);
  ego.y += ego.v * std::sin(ego.theta) * dt;
}

bool check_terminal(const VehicleState& ego, int target_lane, const RoadGeometry& road) {
  const double dy = road.lane_center(target_lane) - ego.y;
  return std::abs(dy) <= kTerminalLatTol && std::abs(ego.theta) <= kTerminalThetaTol &&
         std::abs(ego.omega) <= kTerminalOmegaTol;
}

}  // namespace lanesim
