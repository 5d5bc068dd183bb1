#include "lanesim/episode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lanesim/lateral.hpp"

namespace lanesim {

const char* phase_name(EpisodePhase phase) {
  switch (phase) {
    case EpisodePhase::kSeeking: return "seeking";
    case EpisodePhase::kChanging: return "changing";
    case EpisodePhase::kAborting: return "aborting";
    case EpisodePhase::kDone: return "done";
    case EpisodePhase::kTimedOut: return "timed_out";
  }
  return "unknown";
}

namespace {

std::optional<NeighborObs> to_obs(const std::optional<World::Neighbor>& n) {
  if (!n) return std::nullopt;
  return NeighborObs{n->gap, n->vehicle->v};
}

}  // namespace

EpisodeStepResult episode_step(LaneChangeEpisode& episode, World& world,
                               const PolicyFn& policy, const RewardWeights& weights,
                               const SafetyParams& safety) {
  if (!episode.active()) {
    throw std::logic_error("episode_step: episode already finished");
  }
  VehicleState* ego = world.find_mutable(episode.vid);
  if (!ego) {
    throw std::logic_error("episode_step: vehicle not in world");
  }
  const auto& road = world.road();
  const double dt = world.dt();

  if (episode.phase == EpisodePhase::kSeeking) {
    const auto lead = world.leader_in_lane(episode.target_lane, *ego);
    const auto lag = world.follower_in_lane(episode.target_lane, *ego);
    const auto assessment = assess_gap(ego->v, to_obs(lead), to_obs(lag), safety);
    if (assessment.accepted) {
      episode.phase = EpisodePhase::kChanging;
      ego->omega = 0.0;
    }
    return {};
  }

  if (episode.phase == EpisodePhase::kChanging) {
    const double origin_c = road.lane_center(episode.origin_lane);
    const double target_c = road.lane_center(episode.target_lane);
    if ((ego->y - origin_c) / (target_c - origin_c) >= 0.5) {
      episode.passed_halfway = true;  // committed, even if it wobbles back
    }
    if (!episode.passed_halfway &&
        safety_guard(*ego, episode.origin_lane, episode.target_lane, world, safety) ==
            GuardDecision::kAbort) {
      episode.phase = EpisodePhase::kAborting;
      episode.entered_abort = true;
    }
  }

  const int target = episode.current_target();

  // A heavily exploring policy can drive the ego off course; once it leaves
  // (or can leave within one step) the lanes adjacent to the current target,
  // the maneuver is unrecoverable within the step budget and the episode is
  // timed out. The margin covers the largest lateral move one step allows.
  const double max_lateral_step = ego->v * std::sin(kThetaLimit) * dt;
  if (std::abs(road.lane_center(target) - ego->y) >=
      1.5 * road.lane_width - max_lateral_step - 1e-9) {
    episode.phase = EpisodePhase::kTimedOut;
    return {};
  }

  const StateVector s = build_state(*ego, road, target);
  const double a_yaw = std::clamp(policy(s), -kActionLimit, kActionLimit);

  const double y_before = ego->y;
  integrate_lateral(*ego, a_yaw, dt);
  ego->y = blocked_lateral_y(*ego, y_before, ego->y, world, safety);
  ego->y = std::clamp(ego->y, 0.0, road.width());

  const RewardParts parts =
      immediate_reward(a_yaw, ego->omega, road.lane_center(target) - ego->y, weights);
  const bool terminal = check_terminal(*ego, target, road);
  const StateVector s_next = build_state(*ego, road, target);

  Transition t{s, a_yaw, parts.r, s_next, terminal};
  episode.transitions.push_back(t);
  episode.sum_acce += parts.r_acce;
  episode.sum_rate += parts.r_rate;
  episode.sum_time += parts.r_time;
  ++episode.step_count;

  if (terminal) {
    episode.phase = EpisodePhase::kDone;
  } else if (episode.step_count >= kEpisodeStepLimit) {
    // Timeouts are recorded with terminal=false; the state is not a true
    // completion and the TD target keeps bootstrapping.
    episode.phase = EpisodePhase::kTimedOut;
  }
  return {t};
}

}  // namespace lanesim
