// Command-line front end for the lane-change simulator and trainer. Talks to
// the core exclusively through the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "lanesim_c.h"

namespace {

struct ConfigHandle {
  ls_config* ptr = nullptr;
  ~ConfigHandle() { ls_config_destroy(ptr); }
};

struct ModelHandle {
  ls_model* ptr = nullptr;
  ~ModelHandle() { ls_model_destroy(ptr); }
};

int report_failure(const char* what, ls_status status) {
  std::fprintf(stderr, "lanesim: %s failed (%s): %s\n", what, ls_status_name(status),
               ls_last_error());
  return 1;
}

int load_config(const std::string& path, bool seed_set, std::uint64_t seed,
                ConfigHandle& out) {
  ls_status status =
      path.empty() ? ls_config_create(&out.ptr) : ls_config_load(path.c_str(), &out.ptr);
  if (status != LS_OK) return report_failure("loading config", status);
  if (seed_set) {
    status = ls_config_set_seed(out.ptr, seed);
    if (status != LS_OK) return report_failure("setting seed", status);
  }
  return 0;
}

int cmd_train(const std::string& config_path, bool seed_set, std::uint64_t seed,
              const std::string& out_dir) {
  ConfigHandle config;
  if (int rc = load_config(config_path, seed_set, seed, config)) return rc;

  ls_train_summary summary{};
  const ls_status status = ls_train(config.ptr, out_dir.c_str(), &summary, nullptr);
  if (status != LS_OK) return report_failure("training", status);

  std::uint64_t used_seed = 0;
  ls_config_get_seed(config.ptr, &used_seed);
  std::printf("training complete (seed %" PRIu64 ")\n", used_seed);
  std::printf("  gradient steps:   %" PRIu64 "\n", summary.gradient_steps);
  std::printf("  env steps:        %" PRIu64 "\n", summary.env_steps);
  std::printf("  episodes done:    %" PRIu64 "\n", summary.episodes_done);
  std::printf("  episodes aborted: %" PRIu64 "\n", summary.episodes_aborted);
  std::printf("  episodes timeout: %" PRIu64 "\n", summary.episodes_timeout);
  std::printf("  TD loss mean, first/final 4k steps: %.6f / %.6f\n",
              summary.first_window_loss, summary.final_window_loss);
  std::printf("  wrote %s/metrics.csv and %s/model.ckpt\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& config_path,
             int episodes, std::uint64_t seed, const std::string& out_csv) {
  ConfigHandle config;
  if (int rc = load_config(config_path, false, 0, config)) return rc;

  ModelHandle model;
  ls_status status = ls_model_load(model_path.c_str(), &model.ptr);
  if (status != LS_OK) return report_failure("loading model", status);

  ls_eval_summary summary{};
  status = ls_eval(model.ptr, config.ptr, episodes, seed, out_csv.c_str(), &summary);
  if (status != LS_OK) return report_failure("evaluation", status);

  std::printf("evaluation over %d episodes (seed %" PRIu64 ")\n", summary.episodes,
              seed);
  std::printf("  completion rate: %.3f\n", summary.completion_rate);
  std::printf("  abort rate:      %.3f\n", summary.abort_rate);
  std::printf("  timeout rate:    %.3f\n", summary.timeout_rate);
  std::printf("  mean duration:   %.2f s\n", summary.mean_duration_s);
  std::printf("  mean |a_yaw|:    %.4f rad/s^2\n", summary.mean_abs_a_yaw);
  std::printf("  max |omega|:     %.4f rad/s\n", summary.max_abs_omega);
  std::printf("  mean R:          %.4f (acce %.4f, rate %.4f, time %.4f)\n",
              summary.mean_r, summary.mean_r_acce, summary.mean_r_rate,
              summary.mean_r_time);
  std::printf("  wrote %s\n", out_csv.c_str());
  return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t steps,
                 const std::string& trace_path) {
  ConfigHandle config;
  if (int rc = load_config(config_path, false, 0, config)) return rc;

  ls_sim_summary summary{};
  const ls_status status = ls_simulate(config.ptr, steps, trace_path.c_str(), &summary);
  if (status != LS_OK) return report_failure("simulation", status);

  std::printf("simulated %" PRIu64 " steps\n", summary.steps);
  std::printf("  vehicles spawned: %" PRIu64 "\n", summary.spawned);
  std::printf("  vehicles exited:  %" PRIu64 "\n", summary.exited);
  std::printf("  on road at end:   %" PRIu64 "\n", summary.final_vehicle_count);
  std::printf("  min bumper gap:   %.3f m\n", summary.min_bumper_gap);
  std::printf("  wrote %s\n", trace_path.c_str());
  return 0;
}

int cmd_gradcheck() {
  double head_error = 0.0, loss_error = 0.0;
  const ls_status status = ls_gradcheck(1, &head_error, &loss_error);
  std::printf("max head relative error: %.3e (tolerance 1e-5)\n", head_error);
  std::printf("max loss relative error: %.3e (tolerance 1e-4)\n", loss_error);
  if (status != LS_OK) {
    std::fprintf(stderr, "lanesim: gradient checks failed: %s\n", ls_last_error());
    return 1;
  }
  std::printf("all gradient checks passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Highway lane-change simulator and continuous-action Q-learning trainer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string model_path;
  std::string eval_csv = "eval.csv";
  std::string trace_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int episodes = 200;
  std::uint64_t steps = 0;

  auto* train = app.add_subcommand("train", "Train a lane-change policy");
  train->add_option("--config", config_path, "Config file (defaults when omitted)");
  train->add_option("--seed", seed, "Override the config seed")
      ->each([&seed_set](const std::string&) { seed_set = true; });
  train->add_option("--out", out_dir, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a trained model greedily");
  eval->add_option("--model", model_path, "Checkpoint file")->required();
  eval->add_option("--config", config_path, "Config file (defaults when omitted)");
  eval->add_option("--episodes", episodes, "Number of evaluation episodes");
  eval->add_option("--seed", seed, "Evaluation seed");
  eval->add_option("--out", eval_csv, "Per-episode CSV path");

  auto* simulate = app.add_subcommand("simulate", "Run traffic without lane changes");
  simulate->add_option("--config", config_path, "Config file (defaults when omitted)");
  simulate->add_option("--steps", steps, "Steps to run (default: config max_sim_steps)");
  simulate->add_option("--trace", trace_path, "Per-step vehicle trace CSV")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "Run all gradient checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  if (train->parsed()) return cmd_train(config_path, seed_set, seed, out_dir);
  if (eval->parsed()) return cmd_eval(model_path, config_path, episodes, seed, eval_csv);
  if (simulate->parsed()) return cmd_simulate(config_path, steps, trace_path);
  if (gradcheck->parsed()) return cmd_gradcheck();
  return 2;
}
