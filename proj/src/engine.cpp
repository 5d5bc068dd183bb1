#include "lanesim/engine.hpp"

#include <algorithm>
#include <cmath>

#include "lanesim/lateral.hpp"

namespace lanesim {

const char* outcome_name(EpisodeOutcome outcome) {
  switch (outcome) {
    case EpisodeOutcome::kDone: return "done";
    case EpisodeOutcome::kAbortedDone: return "aborted";
    case EpisodeOutcome::kTimedOut: return "timeout";
    case EpisodeOutcome::kCancelled: return "cancelled";
  }
  return "unknown";
}

TrafficEnv::TrafficEnv(RoadGeometry road, ScenarioConfig scenario, IdmParams idm,
                       SafetyParams safety, RewardWeights rewards, std::uint64_t seed,
                       EngineOptions options)
    : world_(road, scenario, idm, seed),
      safety_(safety),
      rewards_(rewards),
      options_(options) {}

const TrafficEnv::ActiveEpisode* TrafficEnv::episode_for(std::uint64_t vid) const {
  for (const auto& ae : episodes_) {
    if (ae.episode.vid == vid) return &ae;
  }
  return nullptr;
}

double TrafficEnv::accel_for(const World& w, const VehicleState& v) const {
  const ActiveEpisode* ae = episode_for(v.vid);
  if (!ae || ae->episode.phase == EpisodePhase::kSeeking) {
    return w.default_accel(v);
  }
  // Mid-maneuver: balance between the leaders in the current lane and the
  // target lane; the smaller acceleration wins.
  const int current = v.lane_index(w.road());
  const int target = ae->episode.current_target();
  auto lead_current = w.leader_in_lane(current, v);
  auto lead_target =
      target != current ? w.leader_in_lane(target, v) : std::optional<World::Neighbor>{};
  if ((lead_current && lead_current->gap <= 0.0) ||
      (lead_target && lead_target->gap <= 0.0)) {
    return -kBrakeLimit;
  }
  std::optional<LeaderObs> ego_obs, target_obs;
  if (lead_current) ego_obs = LeaderObs{lead_current->gap, lead_current->vehicle->v};
  if (lead_target) target_obs = LeaderObs{lead_target->gap, lead_target->vehicle->v};
  return dual_leader_accel(v.v, v.v_limit, ego_obs, target_obs, w.idm());
}

void TrafficEnv::recovery_step(VehicleState& v) {
  const auto& road = world_.road();
  const int lane = road.nearest_lane(v.y);
  const double ey = v.y - road.lane_center(lane);
  const double v_eff = std::max(v.v, 5.0);
  // Pole placement for the y/theta/omega triple integrator, all poles at
  // -1.2: u = -(l^3/v)*ey - 3l^2*theta - 3l*omega.
  const double u =
      std::clamp(-1.728 * ey / v_eff - 4.32 * v.theta - 3.6 * v.omega, -kActionLimit,
                 kActionLimit);
  const double y_before = v.y;
  integrate_lateral(v, u, world_.dt());
  v.y = blocked_lateral_y(v, y_before, v.y, world_, safety_);
  v.y = std::clamp(v.y, 0.0, road.width());

  const double ey_after = v.y - road.lane_center(road.nearest_lane(v.y));
  if (std::abs(ey_after) <= 0.05 && std::abs(v.theta) <= 0.005 &&
      std::abs(v.omega) <= 0.01) {
    v.theta = 0.0;
    v.omega = 0.0;
    recovery_.erase(v.vid);
  }
}

void TrafficEnv::lateral_pass(World& w, const PolicyFn& policy, StepResult& out) {
  for (auto& ae : episodes_) {
    if (!ae.episode.active()) continue;
    const auto res = episode_step(ae.episode, w, policy, rewards_, safety_);
    if (res.logged) {
      out.transitions.push_back(*res.logged);
      ae.sum_abs_a += std::abs(res.logged->a);
      if (const VehicleState* ego = w.find(ae.episode.vid)) {
        ae.max_abs_omega = std::max(ae.max_abs_omega, std::abs(ego->omega));
      }
    }
  }
  // Settle vehicles carrying lateral residue outside any episode.
  for (const auto& snapshot : w.vehicles()) {
    if (!recovery_.count(snapshot.vid) || episode_for(snapshot.vid)) continue;
    if (VehicleState* v = w.find_mutable(snapshot.vid)) {
      recovery_step(*v);
    }
  }
}

EpisodeSummary TrafficEnv::summarize(const ActiveEpisode& ae,
                                     EpisodeOutcome outcome) const {
  const auto& ep = ae.episode;
  EpisodeSummary s;
  s.episode_id = ep.id;
  s.vid = ep.vid;
  s.outcome = outcome;
  s.steps = ep.step_count;
  s.duration_s = ep.step_count * world_.dt();
  s.r_acce = ep.sum_acce;
  s.r_rate = ep.sum_rate;
  s.r_time = ep.sum_time;
  s.r = ep.total_return();
  s.mean_abs_a_yaw = ep.step_count > 0 ? ae.sum_abs_a / ep.step_count : 0.0;
  s.max_abs_omega = ae.max_abs_omega;
  s.finished_env_step = world_.clock_step();
  return s;
}

void TrafficEnv::start_episode(std::uint64_t vid, int origin_lane, int target_lane) {
  ActiveEpisode ae;
  ae.episode.id = next_episode_id_++;
  ae.episode.vid = vid;
  ae.episode.phase = EpisodePhase::kSeeking;
  ae.episode.origin_lane = origin_lane;
  ae.episode.target_lane = target_lane;
  episodes_.push_back(std::move(ae));
  ++episodes_started_;
  recovery_.erase(vid);
}

void TrafficEnv::issue_commands() {
  if (!options_.commands_enabled) return;
  if (options_.single_episode && !episodes_.empty()) return;
  for (const auto& v : world_.vehicles()) {
    if (command_consumed_.count(v.vid)) continue;
    const auto& draws = world_.spawn_draws(v.vid);
    if (v.x < draws.command_x) continue;
    command_consumed_.insert(v.vid);
    const int origin = v.lane_index(world_.road());
    const int target = origin + draws.command_dir;
    if (!world_.road().valid_lane(target)) continue;
    start_episode(v.vid, origin, target);
    if (options_.single_episode) return;
  }
}

TrafficEnv::StepResult TrafficEnv::advance(const PolicyFn& policy) {
  StepResult out;

  World::StepHooks hooks;
  hooks.accel = [this](const World& w, const VehicleState& v) {
    return accel_for(w, v);
  };
  hooks.lateral_pass = [this, &policy, &out](World& w) {
    lateral_pass(w, policy, out);
  };

  const auto report = world_.step(hooks);

  // Harvest finished episodes in id order.
  for (std::size_t i = 0; i < episodes_.size();) {
    auto& ae = episodes_[i];
    if (ae.episode.active()) {
      ++i;
      continue;
    }
    const EpisodeOutcome outcome =
        ae.episode.phase == EpisodePhase::kTimedOut ? EpisodeOutcome::kTimedOut
        : ae.episode.entered_abort                  ? EpisodeOutcome::kAbortedDone
                                                    : EpisodeOutcome::kDone;
    out.finished.push_back(summarize(ae, outcome));
    const std::uint64_t vid = ae.episode.vid;
    const int origin = ae.episode.origin_lane;
    const int target = ae.episode.target_lane;
    episodes_.erase(episodes_.begin() + static_cast<long>(i));
    recovery_.insert(vid);

    // An aborted maneuver completes back in the origin lane and may seek a
    // new gap toward the original target.
    if (outcome == EpisodeOutcome::kAbortedDone && options_.commands_enabled &&
        !options_.single_episode && world_.find(vid)) {
      start_episode(vid, origin, target);
    }
  }

  // Episodes whose vehicle left the segment are cancelled and dropped.
  for (std::uint64_t vid : report.removed) {
    recovery_.erase(vid);
    command_consumed_.erase(vid);
    for (std::size_t i = 0; i < episodes_.size(); ++i) {
      if (episodes_[i].episode.vid == vid) {
        out.finished.push_back(summarize(episodes_[i], EpisodeOutcome::kCancelled));
        episodes_.erase(episodes_.begin() + static_cast<long>(i));
        break;
      }
    }
  }

  issue_commands();
  return out;
}

}  // namespace lanesim
