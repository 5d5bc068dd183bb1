#include "lanesim/idm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lanesim {

double idm_desired_gap(double v, double v_lead, const IdmParams& p) {
  const double dv = v - v_lead;
  const double dynamic = v * p.headway + v * dv / (2.0 * std::sqrt(p.a_max * p.b_comf));
  return p.s0 + std::max(0.0, dynamic);
}

namespace {

double idm_accel_impl(double v, double v_limit, const std::optional<LeaderObs>& leader,
                      const IdmParams& p, bool free_gap_gate) {
  if (v < 0.0 || v_limit <= 0.0) {
    throw std::invalid_argument("idm_accel: speeds must be nonnegative, v_limit positive");
  }
  const double free_term = 1.0 - std::pow(v / v_limit, p.delta);
  if (!leader) {
    return p.a_max * free_term;
  }
  if (leader->gap <= 0.0) {
    throw std::invalid_argument("idm_accel: nonpositive gap with a leader present");
  }
  const double s_star = idm_desired_gap(v, leader->speed, p);
  if (free_gap_gate && leader->gap > p.k_free * s_star) {
    return p.a_max * free_term;
  }
  const double ratio = s_star / leader->gap;
  return p.a_max * (free_term - ratio * ratio);
}

}  // namespace

double idm_accel(double v, double v_limit, const std::optional<LeaderObs>& leader,
                 const IdmParams& p) {
  return idm_accel_impl(v, v_limit, leader, p, false);
}

double modified_idm_accel(double v, double v_limit,
                          const std::optional<LeaderObs>& leader, const IdmParams& p) {
  return idm_accel_impl(v, v_limit, leader, p, true);
}

double dual_leader_accel(double v, double v_limit,
                         const std::optional<LeaderObs>& leader_ego_lane,
                         const std::optional<LeaderObs>& leader_target_lane,
                         const IdmParams& p) {
  if (!leader_ego_lane && !leader_target_lane) {
    return modified_idm_accel(v, v_limit, std::nullopt, p);
  }
  double accel = std::numeric_limits<double>::infinity();
  if (leader_ego_lane) {
    accel = std::min(accel, modified_idm_accel(v, v_limit, leader_ego_lane, p));
  }
  if (leader_target_lane) {
    accel = std::min(accel, modified_idm_accel(v, v_limit, leader_target_lane, p));
  }
  return accel;
}

}  // namespace lanesim
