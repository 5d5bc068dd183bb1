#include "lanesim_c.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>

#include "lanesim/checkpoint.hpp"
#include "lanesim/config.hpp"
#include "lanesim/engine.hpp"
#include "lanesim/eval.hpp"
#include "lanesim/gradcheck.hpp"
#include "lanesim/metrics.hpp"
#include "lanesim/trainer.hpp"

using namespace lanesim;

struct ls_config {
  RunConfig cfg;
  std::string formatted;  // backing storage for ls_config_format
};

struct ls_model {
  QuadraticQ q;
  CheckpointMeta meta;
  RunConfig config_echo;
};

namespace {

thread_local std::string g_last_error;

ls_status fail(ls_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
ls_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    return fail(LS_ERR_PARSE, e.what());
  } catch (const CheckpointError& e) {
    return fail(LS_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(LS_ERR_IO, e.what());
  } catch (const std::exception& e) {
    const std::string what = e.what();
    if (what.find("cannot open") != std::string::npos ||
        what.find("failed writing") != std::string::npos) {
      return fail(LS_ERR_IO, what);
    }
    return fail(LS_ERR_RUNTIME, what);
  }
}

ls_status require(bool condition, const char* message) {
  return condition ? LS_OK : fail(LS_ERR_INVALID_ARGUMENT, message);
}

}  // namespace

extern "C" {

const char* ls_status_name(ls_status status) {
  switch (status) {
    case LS_OK: return "ok";
    case LS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LS_ERR_PARSE: return "parse_error";
    case LS_ERR_IO: return "io_error";
    case LS_ERR_RUNTIME: return "runtime_error";
  }
  return "unknown";
}

const char* ls_last_error(void) { return g_last_error.c_str(); }

ls_status ls_config_create(ls_config** out) {
  if (ls_status s = require(out != nullptr, "ls_config_create: out is null"); s != LS_OK)
    return s;
  return guarded([&]() {
    *out = new ls_config();
    return LS_OK;
  });
}

ls_status ls_config_load(const char* path, ls_config** out) {
  if (ls_status s = require(path && out, "ls_config_load: null argument"); s != LS_OK)
    return s;
  return guarded([&]() {
    auto cfg = std::make_unique<ls_config>();
    cfg->cfg = load_run_config(path);
    *out = cfg.release();
    return LS_OK;
  });
}

ls_status ls_config_set(ls_config* config, const char* key, const char* value) {
  if (ls_status s = require(config && key && value, "ls_config_set: null argument");
      s != LS_OK)
    return s;
  return guarded([&]() {
    apply_config_value(config->cfg, key, value);
    return LS_OK;
  });
}

ls_status ls_config_set_seed(ls_config* config, uint64_t seed) {
  if (ls_status s = require(config != nullptr, "ls_config_set_seed: config is null");
      s != LS_OK)
    return s;
  config->cfg.seed = seed;
  return LS_OK;
}

ls_status ls_config_get_seed(const ls_config* config, uint64_t* out) {
  if (ls_status s = require(config && out, "ls_config_get_seed: null argument");
      s != LS_OK)
    return s;
  *out = config->cfg.seed;
  return LS_OK;
}

const char* ls_config_format(const ls_config* config) {
  if (!config) return "";
  auto* mutable_config = const_cast<ls_config*>(config);
  mutable_config->formatted = serialize_run_config(config->cfg);
  return mutable_config->formatted.c_str();
}

void ls_config_destroy(ls_config* config) { delete config; }

ls_status ls_train(const ls_config* config, const char* out_dir,
                   ls_train_summary* summary, ls_model** out_model) {
  if (ls_status s = require(config && out_dir, "ls_train: null argument"); s != LS_OK)
    return s;
  return guarded([&]() {
    std::filesystem::create_directories(out_dir);
    TrainResult result = run_training(config->cfg);

    const std::filesystem::path dir(out_dir);
    write_metrics_csv(result.rows, (dir / "metrics.csv").string());

    CheckpointMeta meta;
    meta.seed = config->cfg.seed;
    meta.steps = static_cast<std::uint64_t>(result.gradient_steps);
    save_checkpoint(result.model, config->cfg, meta, (dir / "model.ckpt").string());

    if (summary) {
      *summary = {};
      summary->gradient_steps = static_cast<std::uint64_t>(result.gradient_steps);
      summary->env_steps = static_cast<std::uint64_t>(result.env_steps);
      summary->episodes_done = result.episodes_done;
      summary->episodes_aborted = result.episodes_aborted;
      summary->episodes_timeout = result.episodes_timeout;
      const std::size_t window = 4000;
      const auto& rows = result.rows;
      auto window_mean = [&rows](std::size_t begin, std::size_t end) {
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i) sum += rows[i].loss;
        return end > begin ? sum / static_cast<double>(end - begin) : 0.0;
      };
      if (rows.size() >= 2 * window) {
        summary->first_window_loss = window_mean(0, window);
        summary->final_window_loss = window_mean(rows.size() - window, rows.size());
      } else if (!rows.empty()) {
        const std::size_t half = rows.size() / 2;
        summary->first_window_loss = window_mean(0, half);
        summary->final_window_loss = window_mean(rows.size() - half, rows.size());
      }
    }
    if (out_model) {
      auto model = std::make_unique<ls_model>();
      model->q = std::move(result.model);
      model->meta.seed = config->cfg.seed;
      model->meta.steps = static_cast<std::uint64_t>(result.gradient_steps);
      model->config_echo = config->cfg;
      *out_model = model.release();
    }
    return LS_OK;
  });
}

ls_status ls_model_load(const char* path, ls_model** out) {
  if (ls_status s = require(path && out, "ls_model_load: null argument"); s != LS_OK)
    return s;
  return guarded([&]() {
    LoadedCheckpoint loaded = load_checkpoint(path);
    auto model = std::make_unique<ls_model>();
    model->q = std::move(loaded.model);
    model->meta = loaded.meta;
    model->config_echo = parse_run_config_text(loaded.config_echo);
    *out = model.release();
    return LS_OK;
  });
}

ls_status ls_model_save(const ls_model* model, const char* path) {
  if (ls_status s = require(model && path, "ls_model_save: null argument"); s != LS_OK)
    return s;
  return guarded([&]() {
    save_checkpoint(model->q, model->config_echo, model->meta, path);
    return LS_OK;
  });
}

ls_status ls_model_greedy(const ls_model* model, const double raw_state[8],
                          double* a_yaw) {
  if (ls_status s = require(model && raw_state && a_yaw, "ls_model_greedy: null argument");
      s != LS_OK)
    return s;
  return guarded([&]() {
    std::array<double, 8> normalized{};
    for (std::size_t i = 0; i < 8; ++i) normalized[i] = raw_state[i] / kStateScales[i];
    *a_yaw = model->q.greedy(normalized);
    return LS_OK;
  });
}

void ls_model_destroy(ls_model* model) { delete model; }

ls_status ls_eval(const ls_model* model, const ls_config* config, int32_t episodes,
                  uint64_t seed, const char* csv_path, ls_eval_summary* summary) {
  if (ls_status s = require(model && config, "ls_eval: null argument"); s != LS_OK)
    return s;
  if (ls_status s = require(episodes > 0, "ls_eval: episodes must be positive");
      s != LS_OK)
    return s;
  return guarded([&]() {
    const EvalResult result = evaluate_policy(model->q, config->cfg, episodes, seed);
    if (csv_path) write_eval_csv(result, csv_path);
    if (summary) {
      const auto& s = result.summary;
      *summary = {};
      summary->episodes = s.episodes;
      summary->completion_rate = s.completion_rate;
      summary->abort_rate = s.abort_rate;
      summary->timeout_rate = s.timeout_rate;
      summary->mean_duration_s = s.mean_duration_s;
      summary->mean_abs_a_yaw = s.mean_abs_a_yaw;
      summary->max_abs_omega = s.max_abs_omega;
      summary->mean_r = s.mean_r;
      summary->mean_r_acce = s.mean_r_acce;
      summary->mean_r_rate = s.mean_r_rate;
      summary->mean_r_time = s.mean_r_time;
    }
    return LS_OK;
  });
}

ls_status ls_simulate(const ls_config* config, uint64_t steps, const char* trace_path,
                      ls_sim_summary* summary) {
  if (ls_status s = require(config != nullptr, "ls_simulate: config is null");
      s != LS_OK)
    return s;
  return guarded([&]() {
    const RunConfig& cfg = config->cfg;
    const long n_steps =
        steps > 0 ? static_cast<long>(steps) : cfg.max_sim_steps;

    EngineOptions options;
    options.commands_enabled = false;  // traffic only, no lane changes
    TrafficEnv env(cfg.road(), cfg.scenario(), cfg.idm(), cfg.safety(), cfg.rewards(),
                   cfg.seed, options);

    std::unique_ptr<TraceWriter> trace;
    if (trace_path) trace = std::make_unique<TraceWriter>(trace_path);

    const PolicyFn no_policy = [](const StateVector&) { return 0.0; };
    double min_gap = std::numeric_limits<double>::infinity();
    for (long step = 0; step < n_steps; ++step) {
      env.advance(no_policy);
      min_gap = std::min(min_gap, env.world().min_bumper_gap());
      if (trace) trace->write_step(env.world());
    }

    if (summary) {
      *summary = {};
      summary->steps = static_cast<uint64_t>(n_steps);
      summary->spawned = env.world().spawned_count();
      summary->exited = env.world().exited_count();
      summary->final_vehicle_count = env.world().vehicles().size();
      summary->min_bumper_gap = min_gap;
    }
    return LS_OK;
  });
}

ls_status ls_gradcheck(int verbose, double* max_head_error, double* max_loss_error) {
  return guarded([&]() {
    const GradCheckReport report = run_all_gradient_checks(verbose != 0);
    if (max_head_error) *max_head_error = report.max_head_error;
    if (max_loss_error) *max_loss_error = report.max_loss_error;
    if (!report.passed) {
      return fail(LS_ERR_RUNTIME, "gradient checks failed");
    }
    return LS_OK;
  });
}

}  // extern "C"
