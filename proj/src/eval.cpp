#include "lanesim/eval.hpp"

#include "lanesim/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lanesim {

namespace {

// One isolated scenario: run fresh traffic until a commanded maneuver
// finishes; the first commanded vehicle that completes (or times out) is the
// measured episode. Candidates that exit while still seeking fall through to
// the next commanded vehicle.
EvalEpisodeRow run_one(const QuadraticQ& model, const RunConfig& cfg, int index,
                       std::uint64_t episode_seed) {
  EngineOptions options;
  options.commands_enabled = true;
  options.single_episode = true;
  TrafficEnv env(cfg.road(), cfg.scenario(), cfg.idm(), cfg.safety(), cfg.rewards(),
                 episode_seed, options);

  const PolicyFn policy = [&model](const StateVector& s) {
    return model.greedy(s.normalized());
  };

  const long step_cap = 200000;
  for (long step = 0; step < step_cap; ++step) {
    const auto res = env.advance(policy);
    for (const auto& fin : res.finished) {
      if (fin.outcome == EpisodeOutcome::kCancelled) continue;
      EvalEpisodeRow row;
      row.index = index;
      row.seed = episode_seed;
      row.outcome = fin.outcome;
      row.steps = fin.steps;
      row.duration_s = fin.duration_s;
      row.r = fin.r;
      row.r_acce = fin.r_acce;
      row.r_rate = fin.r_rate;
      row.r_time = fin.r_time;
      row.mean_abs_a_yaw = fin.mean_abs_a_yaw;
      row.max_abs_omega = fin.max_abs_omega;
      return row;
    }
  }
  throw std::runtime_error("evaluate_policy: no maneuver finished within the step cap");
}

}  // namespace

EvalResult evaluate_policy(const QuadraticQ& model, const RunConfig& cfg, int episodes,
                           std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("evaluate_policy: episodes must be > 0");

  EvalResult result;
  result.rows.reserve(static_cast<std::size_t>(episodes));

  double sum_duration_done = 0.0;
  int done = 0, aborted = 0, timed_out = 0;
  double sum_abs_a = 0.0;
  long total_steps = 0;
  double sum_r = 0.0, sum_acce = 0.0, sum_rate = 0.0, sum_time = 0.0;
  double max_omega = 0.0;

  for (int i = 0; i < episodes; ++i) {
    const std::uint64_t episode_seed = derive_seed(seed, kStreamEval + i);
    EvalEpisodeRow row = run_one(model, cfg, i, episode_seed);
    switch (row.outcome) {
      case EpisodeOutcome::kDone:
        ++done;
        sum_duration_done += row.duration_s;
        break;
      case EpisodeOutcome::kAbortedDone: ++aborted; break;
      case EpisodeOutcome::kTimedOut: ++timed_out; break;
      case EpisodeOutcome::kCancelled: break;
    }
    sum_abs_a += row.mean_abs_a_yaw * row.steps;
    total_steps += row.steps;
    sum_r += row.r;
    sum_acce += row.r_acce;
    sum_rate += row.r_rate;
    sum_time += row.r_time;
    max_omega = std::max(max_omega, row.max_abs_omega);
    result.rows.push_back(row);
  }

  auto& s = result.summary;
  s.episodes = episodes;
  s.completion_rate = static_cast<double>(done) / episodes;
  s.abort_rate = static_cast<double>(aborted) / episodes;
  s.timeout_rate = static_cast<double>(timed_out) / episodes;
  s.mean_duration_s = done > 0 ? sum_duration_done / done : 0.0;
  s.mean_abs_a_yaw = total_steps > 0 ? sum_abs_a / total_steps : 0.0;
  s.max_abs_omega = max_omega;
  s.mean_r = sum_r / episodes;
  s.mean_r_acce = sum_acce / episodes;
  s.mean_r_rate = sum_rate / episodes;
  s.mean_r_time = sum_time / episodes;
  return result;
}

void write_eval_csv(const EvalResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open eval file for writing: " + path);
  out << kEvalHeader << '\n';
  char head[96];
  for (const auto& row : result.rows) {
    std::snprintf(head, sizeof head, "%d,%llu,%s,%d,%.3f", row.index,
                  static_cast<unsigned long long>(row.seed), outcome_name(row.outcome),
                  row.steps, row.duration_s);
    out << head;
    for (double v : {row.r, row.r_acce, row.r_rate, row.r_time, row.mean_abs_a_yaw,
                     row.max_abs_omega}) {
      out << ',' << format_double_exact(v);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing eval file: " + path);
}

}  // namespace lanesim
