#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "lanesim/episode.hpp"
#include "lanesim/world.hpp"

namespace lanesim {

enum class EpisodeOutcome { kDone, kAbortedDone, kTimedOut, kCancelled };

const char* outcome_name(EpisodeOutcome outcome);

struct EpisodeSummary {
  std::uint64_t episode_id = 0;
  std::uint64_t vid = 0;
  EpisodeOutcome outcome = EpisodeOutcome::kCancelled;
  int steps = 0;           // logged transitions
  double duration_s = 0.0;
  double r = 0.0;          // total return and its exact decomposition
  double r_acce = 0.0;
  double r_rate = 0.0;
  double r_time = 0.0;
  double mean_abs_a_yaw = 0.0;
  double max_abs_omega = 0.0;
  long finished_env_step = 0;
};

struct EngineOptions {
  // The scenario-configured command generator: each spawned vehicle receives
  // a lane-change command toward its drawn adjacent lane when it crosses its
  // drawn command point.
  bool commands_enabled = true;
  // Evaluation mode: at most one episode runs at a time and aborted
  // maneuvers do not re-seek.
  bool single_episode = false;
};

// Steps the world together with the lane-change episodes: per-vehicle
// longitudinal control (dual-leader during maneuvers), episode phase
// machinery, command issuance, and a deterministic recovery steer that
// settles vehicles left off-center by timed-out maneuvers.
class TrafficEnv {
 public:
  TrafficEnv(RoadGeometry road, ScenarioConfig scenario, IdmParams idm,
             SafetyParams safety, RewardWeights rewards, std::uint64_t seed,
             EngineOptions options = {});

  struct StepResult {
    std::vector<Transition> transitions;
    std::vector<EpisodeSummary> finished;
  };

  StepResult advance(const PolicyFn& policy);

  const World& world() const { return world_; }
  World& world_mutable() { return world_; }
  std::uint64_t episodes_started() const { return episodes_started_; }
  std::size_t active_episode_count() const { return episodes_.size(); }

 private:
  struct ActiveEpisode {
    LaneChangeEpisode episode;
    double sum_abs_a = 0.0;
    double max_abs_omega = 0.0;
  };

  double accel_for(const World& w, const VehicleState& v) const;
  void lateral_pass(World& w, const PolicyFn& policy, StepResult& out);
  void recovery_step(VehicleState& v);
  void issue_commands();
  EpisodeSummary summarize(const ActiveEpisode& ae, EpisodeOutcome outcome) const;
  const ActiveEpisode* episode_for(std::uint64_t vid) const;
  void start_episode(std::uint64_t vid, int origin_lane, int target_lane);

  World world_;
  SafetyParams safety_;
  RewardWeights rewards_;
  EngineOptions options_;
  std::vector<ActiveEpisode> episodes_;
  std::unordered_set<std::uint64_t> command_consumed_;
  std::unordered_set<std::uint64_t> recovery_;
  std::uint64_t next_episode_id_ = 1;
  std::uint64_t episodes_started_ = 0;
};

}  // namespace lanesim
