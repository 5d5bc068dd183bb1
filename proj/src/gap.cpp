#include "lanesim/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lanesim {

GapAssessment assess_gap(double v_ego, const std::optional<NeighborObs>& target_lead,
                         const std::optional<NeighborObs>& target_lag,
                         const SafetyParams& params) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  GapAssessment out{};
  out.lead_gap = target_lead ? target_lead->gap : kInf;
  out.lag_gap = target_lag ? target_lag->gap : kInf;

  const double v_lead = target_lead ? target_lead->speed : v_ego;
  const double v_lag = target_lag ? target_lag->speed : v_ego;
  out.lead_required =
      params.d_min + std::max(0.0, (v_ego * v_ego - v_lead * v_lead) / (2.0 * params.b_max));
  out.lag_required =
      params.d_min + std::max(0.0, (v_lag * v_lag - v_ego * v_ego) / (2.0 * params.b_max));

  out.accepted = out.lead_gap >= out.lead_required && out.lag_gap >= out.lag_required;
  return out;
}

double blocked_lateral_y(const VehicleState& ego, double y_old, double y_new,
                         const World& world, const SafetyParams& params) {
  const auto& road = world.road();
  const int lane_old = road.lane_index_for_y(y_old);
  const int lane_new = road.lane_index_for_y(y_new);
  if (lane_new == lane_old) return y_new;

  // One step can cross at most one boundary (lateral speed is clamped well
  // below a lane width per step).
  VehicleState probe = ego;
  probe.y = y_new;
  auto lead = world.leader_in_lane(lane_new, probe);
  auto lag = world.follower_in_lane(lane_new, probe);
  std::optional<NeighborObs> lead_obs, lag_obs;
  if (lead) lead_obs = NeighborObs{lead->gap, lead->vehicle->v};
  if (lag) lag_obs = NeighborObs{lag->gap, lag->vehicle->v};
  if (assess_gap(ego.v, lead_obs, lag_obs, params).accepted) return y_new;

  const double boundary =
      lane_new > lane_old ? (lane_old + 1) * road.lane_width : lane_old * road.lane_width;
  const double hold_off = 1e-3;
  return lane_new > lane_old ? boundary - hold_off : boundary + hold_off;
}

GuardDecision safety_guard(const VehicleState& ego, int origin_lane, int target_lane,
                           const World& world, const SafetyParams& params) {
  const auto& road = world.road();
  const double origin_c = road.lane_center(origin_lane);
  const double target_c = road.lane_center(target_lane);
  const double progress = (ego.y - origin_c) / (target_c - origin_c);
  if (progress >= 0.5) {
    return GuardDecision::kContinue;  // committed past halfway
  }

  auto lead = world.leader_in_lane(target_lane, ego);
  auto lag = world.follower_in_lane(target_lane, ego);
  std::optional<NeighborObs> lead_obs, lag_obs;
  if (lead) lead_obs = NeighborObs{lead->gap, lead->vehicle->v};
  if (lag) lag_obs = NeighborObs{lag->gap, lag->vehicle->v};

  const auto assessment = assess_gap(ego.v, lead_obs, lag_obs, params);
  return assessment.accepted ? GuardDecision::kContinue : GuardDecision::kAbort;
}

}  // namespace lanesim
