#include "lanesim/trainer.hpp"

#include <cmath>
#include <stdexcept>

namespace lanesim {

TrainConfig train_config_from(const RunConfig& cfg) {
  TrainConfig t;
  t.total_gradient_steps = cfg.total_gradient_steps;
  t.gamma = cfg.gamma;
  t.alpha = cfg.alpha;
  t.batch_size = cfg.batch_size;
  t.replay_capacity = cfg.replay_capacity;
  t.warmup_transitions = cfg.warmup_transitions;
  t.target_sync_period = cfg.target_sync_period;
  t.sigma_start = cfg.sigma_start;
  t.sigma_end = cfg.sigma_end;
  t.sigma_anneal_steps = cfg.sigma_anneal_steps;
  t.seed = cfg.seed;
  return t;
}

double sigma_at(long gradient_step, const TrainConfig& cfg) {
  if (gradient_step >= cfg.sigma_anneal_steps) return cfg.sigma_end;
  const double frac = static_cast<double>(gradient_step) / cfg.sigma_anneal_steps;
  return cfg.sigma_start + (cfg.sigma_end - cfg.sigma_start) * frac;
}

double td_target(const QuadraticQ& target, double r, const StateVector& s_next,
                 bool terminal, double gamma) {
  if (terminal) return r;
  return r + gamma * target.state_value(s_next.normalized(), false);
}

TrainWorkspace::TrainWorkspace(const QuadraticQ& q)
    : g_a(q.net_a().make_gradients()),
      g_c(q.net_c().make_gradients()),
      g_pre(q.net_b_pre().make_gradients()),
      g_sen(q.net_b_sen().make_gradients()),
      g_max(q.net_b_max().make_gradients()) {}

double td_loss_and_grads(const QuadraticQ& online, const QuadraticQ& target,
                         std::span<const Transition* const> batch, double gamma,
                         TrainWorkspace& ws) {
  if (batch.empty()) throw std::invalid_argument("td_loss_and_grads: empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  ws.g_a.zero();
  ws.g_c.zero();
  ws.g_pre.zero();
  ws.g_sen.zero();
  ws.g_max.zero();

  double loss = 0.0;
  for (const Transition* t : batch) {
    const auto s = t->s.normalized();

    const double pre = online.net_b_pre().forward(s, ws.cache_pre);
    const double sen = online.net_b_sen().forward(s, ws.cache_sen);
    const double max_out = online.net_b_max().forward(s, ws.cache_max);
    BInfo bi;
    const double b =
        QuadraticQ::compose_from_outputs(pre, sen, max_out, online.mode(), &bi);

    const double a_coeff = online.net_a().forward(s, ws.cache_a);
    const auto c_in = QuadraticQ::c_input(s, t->terminal);
    const double c = online.net_c().forward(c_in, ws.cache_c);

    const double diff = b - t->a;
    const double q = a_coeff * diff * diff + c;
    const double y = td_target(target, t->r, t->s_next, t->terminal, gamma);
    const double err = q - y;
    loss += err * err;

    const double dq = 2.0 * err * inv_n;
    online.net_a().backward(ws.cache_a, dq * diff * diff, ws.g_a);
    online.net_c().backward(ws.cache_c, dq, ws.g_c);

    const double db = dq * 2.0 * a_coeff * diff;
    if (bi.branch == 0) {
      online.net_b_pre().backward(ws.cache_pre, db * bi.sen, ws.g_pre);
      online.net_b_sen().backward(ws.cache_sen, db * bi.pre, ws.g_sen);
    } else {
      online.net_b_max().backward(ws.cache_max, db * bi.branch, ws.g_max);
    }
  }
  loss *= inv_n;
  return loss;
}

double train_step(QuadraticQ& online, const QuadraticQ& target,
                  std::span<const Transition* const> batch, double alpha, double gamma,
                  TrainWorkspace& ws) {
  const double loss = td_loss_and_grads(online, target, batch, gamma, ws);
  if (!std::isfinite(loss)) {
    throw std::runtime_error("train_step: non-finite loss");
  }
  sgd_step(online.net_a(), ws.g_a, alpha);
  sgd_step(online.net_c(), ws.g_c, alpha);
  sgd_step(online.net_b_pre(), ws.g_pre, alpha);
  sgd_step(online.net_b_sen(), ws.g_sen, alpha);
  sgd_step(online.net_b_max(), ws.g_max, alpha);
  return loss;
}

void sync_target(const QuadraticQ& online, QuadraticQ& target) {
  if (target.mode() != online.mode()) {
    throw std::invalid_argument("sync_target: mismatched compose modes");
  }
  std::vector<double> params;
  const Mlp* src[] = {&online.net_a(), &online.net_c(), &online.net_b_pre(),
                      &online.net_b_sen(), &online.net_b_max()};
  Mlp* dst[] = {&target.net_a(), &target.net_c(), &target.net_b_pre(),
                &target.net_b_sen(), &target.net_b_max()};
  for (int i = 0; i < 5; ++i) {
    src[i]->params_to(params);
    dst[i]->params_from(params);
  }
}

TrainResult run_training(const RunConfig& cfg) {
  const TrainConfig train = train_config_from(cfg);

  TrafficEnv env(cfg.road(), cfg.scenario(), cfg.idm(), cfg.safety(), cfg.rewards(),
                 train.seed, EngineOptions{});

  QuadraticQ online(cfg.b_compose);
  online.init(train.seed);
  QuadraticQ target = online;

  ReplayBuffer buffer(static_cast<std::size_t>(train.replay_capacity));
  Rng explore_rng = make_rng(train.seed, kStreamExplore);
  Rng replay_rng = make_rng(train.seed, kStreamReplay);
  TrainWorkspace ws(online);
  std::vector<const Transition*> batch;

  TrainResult result;
  result.rows.reserve(static_cast<std::size_t>(train.total_gradient_steps));

  EpisodeSummary last_finished;
  bool have_finished = false;
  double sigma = sigma_at(0, train);

  // Environment-step budget guard: training must complete its gradient steps
  // well within this bound or something is starving the replay buffer.
  const long env_step_cap = 4 * train.total_gradient_steps + 100000;

  while (result.gradient_steps < train.total_gradient_steps) {
    sigma = sigma_at(result.gradient_steps, train);
    const auto step = env.advance([&](const StateVector& s) {
      return online.explore(s.normalized(), sigma, explore_rng);
    });
    ++result.env_steps;

    for (const auto& t : step.transitions) buffer.push(t);
    for (const auto& fin : step.finished) {
      if (fin.outcome == EpisodeOutcome::kCancelled) continue;
      result.episodes.push_back(fin);
      last_finished = fin;
      have_finished = true;
      switch (fin.outcome) {
        case EpisodeOutcome::kDone: ++result.episodes_done; break;
        case EpisodeOutcome::kAbortedDone: ++result.episodes_aborted; break;
        case EpisodeOutcome::kTimedOut: ++result.episodes_timeout; break;
        case EpisodeOutcome::kCancelled: break;
      }
    }

    if (buffer.size() >= static_cast<std::size_t>(train.warmup_transitions)) {
      buffer.sample(static_cast<std::size_t>(train.batch_size), replay_rng, batch);
      const double loss =
          train_step(online, target, batch, train.alpha, train.gamma, ws);
      ++result.gradient_steps;
      if (result.gradient_steps % train.target_sync_period == 0) {
        sync_target(online, target);
        ++result.sync_count;
      }

      MetricsRow row;
      row.step = result.gradient_steps;
      row.episode_id = have_finished ? static_cast<long long>(last_finished.episode_id)
                                     : -1;
      row.loss = loss;
      if (have_finished) {
        row.r = last_finished.r;
        row.r_acce = last_finished.r_acce;
        row.r_rate = last_finished.r_rate;
        row.r_time = last_finished.r_time;
      }
      row.sigma = sigma;
      row.episodes_done = result.episodes_done;
      row.episodes_aborted = result.episodes_aborted;
      row.episodes_timeout = result.episodes_timeout;
      result.rows.push_back(row);
    }

    if (result.env_steps > env_step_cap) {
      throw std::runtime_error(
          "run_training: environment step budget exhausted before the gradient "
          "step target; replay warmup is starving");
    }
  }

  result.model = std::move(online);
  return result;
}

}  // namespace lanesim
