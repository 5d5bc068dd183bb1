#include "lanesim/state.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lanesim {

RewardParts immediate_reward(double a_yaw, double omega, double delta_d_lat,
                             const RewardWeights& weights) {
  RewardParts parts{};
  parts.r_acce = weights.w_acce * std::abs(a_yaw);
  parts.r_rate = weights.w_rate * std::abs(omega);
  parts.r_time = weights.w_time * std::abs(delta_d_lat);
  parts.r = parts.r_acce + parts.r_rate + parts.r_time;
  return parts;
}

StateVector build_state(const VehicleState& ego, const RoadGeometry& road,
                        int target_lane) {
  if (!road.valid_lane(target_lane)) {
    throw std::invalid_argument("build_state: target lane out of range");
  }
  const int current = ego.lane_index(road);
  if (std::abs(target_lane - current) > 1) {
    throw std::invalid_argument("build_state: target lane not adjacent to current lane");
  }
  StateVector s;
  s.v = ego.v;
  s.a = ego.a;
  s.x = ego.x;
  s.y = ego.y;
  s.theta = ego.theta;
  s.target_lane = target_lane;
  s.lane_width = road.lane_width;
  s.curvature = road.curvature;
  return s;
}

}  // namespace lanesim
