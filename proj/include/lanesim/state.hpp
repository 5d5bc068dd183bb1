#pragma once

#include <array>

#include "lanesim/road.hpp"
#include "lanesim/vehicle.hpp"

namespace lanesim {

// Fixed normalization scales for the 8 state components
// (v, a, x, y, theta, id, w, c); curvature is scaled up by 1000.
inline constexpr std::array<double, 8> kStateScales = {40.0, 3.0,  1000.0, 11.25,
                                                       0.2,  2.0,  5.0,    0.001};

// The 8-dimensional lateral-control state: ego kinematics plus target lane
// and road information, with the normalized vector fed to the networks.
struct StateVector {
  double v = 0.0;      // m/s
  double a = 0.0;      // m/s^2 longitudinal
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad
  int target_lane = 0;
  double lane_width = 3.75;  // m
  double curvature = 0.0;    // 1/m

  std::array<double, 8> raw() const {
    return {v, a, x, y, theta, static_cast<double>(target_lane), lane_width, curvature};
  }

  std::array<double, 8> normalized() const {
    const auto r = raw();
    std::array<double, 8> n{};
    for (std::size_t i = 0; i < 8; ++i) n[i] = r[i] / kStateScales[i];
    return n;
  }
};

// Yaw-acceleration action with the hard environment clamp.
inline constexpr double kActionLimit = 0.5;  // rad/s^2

struct Action {
  double a_yaw = 0.0;  // rad/s^2
};

// Cost-formulated reward weights; every reward output is <= 0.
struct RewardWeights {
  double w_acce = -1.0;
  double w_rate = -1.0;
  double w_time = -0.05;
};

struct RewardParts {
  double r;       // sum of the three parts
  double r_acce;  // yaw-acceleration smoothness cost
  double r_rate;  // yaw-rate comfort cost
  double r_time;  // lateral-deviation efficiency cost
};

RewardParts immediate_reward(double a_yaw, double omega, double delta_d_lat,
                             const RewardWeights& weights = {});

// Builds the state for an ego vehicle heading to an adjacent target lane.
StateVector build_state(const VehicleState& ego, const RoadGeometry& road,
                        int target_lane);

}  // namespace lanesim
