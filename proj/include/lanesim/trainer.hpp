#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lanesim/config.hpp"
#include "lanesim/engine.hpp"
#include "lanesim/metrics.hpp"
#include "lanesim/qmodel.hpp"
#include "lanesim/replay.hpp"

namespace lanesim {

struct TrainConfig {
  long total_gradient_steps = 40000;
  double gamma = 0.9;
  double alpha = 0.01;
  long batch_size = 64;
  long replay_capacity = 50000;
  long warmup_transitions = 1000;
  long target_sync_period = 500;
  double sigma_start = 0.2;
  double sigma_end = 0.01;
  long sigma_anneal_steps = 30000;
  std::uint64_t seed = 1;
};

TrainConfig train_config_from(const RunConfig& cfg);

// Exploration noise, annealed linearly over the gradient-step schedule.
double sigma_at(long gradient_step, const TrainConfig& cfg);

// Bootstrapped TD target: r for terminal transitions, else
// r + gamma * C_target(s' with terminal flag 0). The max over actions of the
// quadratic Q is C because A is strictly negative.
double td_target(const QuadraticQ& target, double r, const StateVector& s_next,
                 bool terminal, double gamma);

// Reusable forward caches and gradient accumulators for the five networks.
struct TrainWorkspace {
  explicit TrainWorkspace(const QuadraticQ& q);
  ForwardCache cache_a, cache_c, cache_pre, cache_sen, cache_max;
  Gradients g_a, g_c, g_pre, g_sen, g_max;
};

// Mean-squared TD loss over a batch with analytic gradients accumulated into
// the workspace. Gradients flow through the quadratic form and the B
// composition (zero into the pre/sen subnets where the clamp is active).
double td_loss_and_grads(const QuadraticQ& online, const QuadraticQ& target,
                         std::span<const Transition* const> batch, double gamma,
                         TrainWorkspace& ws);

// One TD update over a uniformly sampled batch: td_loss_and_grads followed
// by one norm-clipped gradient step on every network. Returns the batch
// loss.
double train_step(QuadraticQ& online, const QuadraticQ& target,
                  std::span<const Transition* const> batch, double alpha, double gamma,
                  TrainWorkspace& ws);

// Hard copy of all online parameters into the target.
void sync_target(const QuadraticQ& online, QuadraticQ& target);

struct TrainResult {
  QuadraticQ model;
  std::vector<MetricsRow> rows;
  std::vector<EpisodeSummary> episodes;  // finished, in completion order
  std::uint64_t episodes_done = 0;
  std::uint64_t episodes_aborted = 0;
  std::uint64_t episodes_timeout = 0;
  long env_steps = 0;
  long gradient_steps = 0;
  long sync_count = 0;
};

// Full training run: seeded traffic with scenario-generated lane-change
// commands, epsilon-free Gaussian exploration around the greedy action, one
// gradient step per environment step once the replay buffer is warm, and
// periodic hard target syncs. Deterministic for a fixed config.
TrainResult run_training(const RunConfig& cfg);

}  // namespace lanesim
