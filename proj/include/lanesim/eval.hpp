#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanesim/config.hpp"
#include "lanesim/engine.hpp"
#include "lanesim/qmodel.hpp"

namespace lanesim {

inline constexpr const char* kEvalHeader =
    "episode,seed,outcome,steps,duration_s,r,r_acce,r_rate,r_time,"
    "mean_abs_a_yaw,max_abs_omega";

struct EvalEpisodeRow {
  int index = 0;
  std::uint64_t seed = 0;
  EpisodeOutcome outcome = EpisodeOutcome::kTimedOut;
  int steps = 0;
  double duration_s = 0.0;
  double r = 0.0;
  double r_acce = 0.0;
  double r_rate = 0.0;
  double r_time = 0.0;
  double mean_abs_a_yaw = 0.0;
  double max_abs_omega = 0.0;
};

struct EvalSummary {
  int episodes = 0;
  double completion_rate = 0.0;  // finished in Done without aborting
  double abort_rate = 0.0;
  double timeout_rate = 0.0;
  double mean_duration_s = 0.0;  // over completed episodes
  double mean_abs_a_yaw = 0.0;   // over all logged transitions
  double max_abs_omega = 0.0;
  double mean_r = 0.0;           // per-episode means
  double mean_r_acce = 0.0;
  double mean_r_rate = 0.0;
  double mean_r_time = 0.0;
};

struct EvalResult {
  std::vector<EvalEpisodeRow> rows;
  EvalSummary summary;
};

// Greedy evaluation over isolated seeded worlds: each episode index gets a
// fresh traffic world (seed derived from the run seed and the index) with a
// single active maneuver driven by the model's greedy policy. Results merge
// deterministically by episode index.
EvalResult evaluate_policy(const QuadraticQ& model, const RunConfig& cfg, int episodes,
                           std::uint64_t seed);

void write_eval_csv(const EvalResult& result, const std::string& path);

}  // namespace lanesim
