#pragma once

#include <optional>

namespace lanesim {

// Intelligent Driver Model parameters, standard values from the literature.
struct IdmParams {
  double a_max = 1.5;    // m/s^2 maximum acceleration
  double b_comf = 2.0;   // m/s^2 comfortable deceleration
  double s0 = 2.0;       // m jam distance
  double headway = 1.5;  // s desired time headway T
  double delta = 4.0;    // free-flow exponent
  double k_free = 5.0;   // interaction dropped when gap > k_free * s_star
};

// Commanded deceleration is clamped at this physical brake limit.
inline constexpr double kBrakeLimit = 8.0;  // m/s^2

// Leader observation: bumper-to-bumper gap and leader speed.
struct LeaderObs {
  double gap;    // m, must be > 0
  double speed;  // m/s
};

// Desired minimum gap s* = s0 + max(0, v*T + v*dv / (2*sqrt(a_max*b_comf))).
double idm_desired_gap(double v, double v_lead, const IdmParams& p);

// Plain IDM: a = a_max * (1 - (v/v_limit)^delta - (s*/gap)^2).
// Without a leader the interaction term is zero. Throws on a nonpositive
// gap with a leader present (collision state).
double idm_accel(double v, double v_limit, const std::optional<LeaderObs>& leader,
                 const IdmParams& p = {});

// IDM with the free-gap gate: the interaction term is dropped whenever
// gap > k_free * s*, so lightly constrained vehicles reach v_limit.
double modified_idm_accel(double v, double v_limit,
                          const std::optional<LeaderObs>& leader,
                          const IdmParams& p = {});

// During a lane change the ego balances between the leaders observed in its
// current lane and the target lane; the smaller acceleration wins.
double dual_leader_accel(double v, double v_limit,
                         const std::optional<LeaderObs>& leader_ego_lane,
                         const std::optional<LeaderObs>& leader_target_lane,
                         const IdmParams& p = {});

}  // namespace lanesim
