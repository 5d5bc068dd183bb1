#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lanesim/gap.hpp"
#include "lanesim/replay.hpp"
#include "lanesim/state.hpp"
#include "lanesim/world.hpp"

namespace lanesim {

enum class EpisodePhase { kSeeking, kChanging, kAborting, kDone, kTimedOut };

const char* phase_name(EpisodePhase phase);

// Transitions are logged only while Changing/Aborting; an episode times out
// after this many logged steps.
inline constexpr int kEpisodeStepLimit = 100;

// Phase machine for one lane-change maneuver with its logged transitions and
// per-term reward sums.
struct LaneChangeEpisode {
  std::uint64_t id = 0;
  std::uint64_t vid = 0;
  EpisodePhase phase = EpisodePhase::kSeeking;
  int origin_lane = 0;
  int target_lane = 0;
  int step_count = 0;  // logged transitions
  bool entered_abort = false;
  // Latched once lateral progress reaches one half; from then on the
  // maneuver is committed and the safety guard is no longer consulted.
  bool passed_halfway = false;
  std::vector<Transition> transitions;
  double sum_acce = 0.0;
  double sum_rate = 0.0;
  double sum_time = 0.0;

  // Total return decomposes exactly into the three component sums.
  double total_return() const { return sum_acce + sum_rate + sum_time; }

  // Target the maneuver currently steers toward; an abort retargets the
  // origin lane.
  int current_target() const {
    return phase == EpisodePhase::kAborting ? origin_lane : target_lane;
  }

  bool active() const {
    return phase == EpisodePhase::kSeeking || phase == EpisodePhase::kChanging ||
           phase == EpisodePhase::kAborting;
  }
};

// Policy callback: normalized-state action request, returns yaw acceleration
// (clamped by the environment to +/-kActionLimit).
using PolicyFn = std::function<double(const StateVector&)>;

struct EpisodeStepResult {
  std::optional<Transition> logged;
};

// Advances one episode by one time step. Seeking runs gap acceptance;
// Changing consults the safety guard, then builds the state, applies the
// policy action, integrates laterally, computes the reward and logs the
// transition; Aborting does the same toward the origin lane. Stepping a
// finished episode is rejected.
EpisodeStepResult episode_step(LaneChangeEpisode& episode, World& world,
                               const PolicyFn& policy, const RewardWeights& weights,
                               const SafetyParams& safety);

}  // namespace lanesim
