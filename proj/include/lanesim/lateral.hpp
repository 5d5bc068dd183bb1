#pragma once

#include "lanesim/road.hpp"
#include "lanesim/vehicle.hpp"

namespace lanesim {

// Clamps applied during lateral integration; they keep lateral speeds
// physically plausible at highway speed.
inline constexpr double kOmegaLimit = 0.3;  // rad/s
inline constexpr double kThetaLimit = 0.3;  // rad

// Terminal test thresholds: settled at the target lane center.
inline constexpr double kTerminalLatTol = 0.1;     // m
inline constexpr double kTerminalThetaTol = 0.02;  // rad
inline constexpr double kTerminalOmegaTol = 0.05;  // rad/s

// Semi-implicit lateral step from the yaw-acceleration action:
// omega' = clamp(omega + a_yaw*dt), theta' = clamp(theta + omega'*dt),
// y' = y + v*sin(theta')*dt. x is handled by the world step.
void integrate_lateral(VehicleState& ego, double a_yaw, double dt);

// True iff the ego has settled at the target lane center with near-zero
// heading and yaw rate.
bool check_terminal(const VehicleState& ego, int target_lane, const RoadGeometry& road);

}  // namespace lanesim
