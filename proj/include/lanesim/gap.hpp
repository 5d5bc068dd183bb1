#pragma once

#include <optional>

#include "lanesim/vehicle.hpp"
#include "lanesim/world.hpp"

namespace lanesim {

struct SafetyParams {
  double d_min = 2.0;  // m minimum safety distance
  double b_max = 3.0;  // m/s^2 allowable deceleration for closing speed
};

// Neighbor snapshot on the target lane: bumper gap and speed.
struct NeighborObs {
  double gap;    // m
  double speed;  // m/s
};

struct GapAssessment {
  double lead_gap;       // +inf when the neighbor is absent
  double lag_gap;
  double lead_required;
  double lag_required;
  bool accepted;
};

// Gap acceptance at lane-change initiation: each side must accommodate the
// speed difference under the allowable deceleration plus the minimum safety
// distance. Required gaps grow quadratically with adverse speed difference.
GapAssessment assess_gap(double v_ego, const std::optional<NeighborObs>& target_lead,
                         const std::optional<NeighborObs>& target_lag,
                         const SafetyParams& params = {});

enum class GuardDecision { kContinue, kAbort };

// Re-checks the gap against the current target-lane neighbors every step of
// a maneuver. Aborts only while the ego has crossed less than half of the
// lateral distance to the target lane center; past halfway the maneuver
// completes regardless.
GuardDecision safety_guard(const VehicleState& ego, int origin_lane, int target_lane,
                           const World& world, const SafetyParams& params = {});

// Lateral blocking: a lane-boundary crossing is only allowed when the
// entered lane's instantaneous gap passes assess_gap; otherwise the lateral
// move is held just short of the boundary, so a vehicle can never slide into
// space another vehicle's body occupies.
double blocked_lateral_y(const VehicleState& ego, double y_old, double y_new,
                         const World& world, const SafetyParams& params = {});

}  // namespace lanesim
