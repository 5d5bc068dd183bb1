/* C API for the lane-change simulator and trainer. All entry points return
 * a status code; ls_last_error() describes the most recent failure on the
 * calling thread. Handles are opaque and freed with their destroy function.
 */
#ifndef LANESIM_C_H
#define LANESIM_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LANESIM_API __declspec(dllexport)
#else
#define LANESIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ls_status {
  LS_OK = 0,
  LS_ERR_INVALID_ARGUMENT = 1,
  LS_ERR_PARSE = 2,
  LS_ERR_IO = 3,
  LS_ERR_RUNTIME = 4
} ls_status;

typedef struct ls_config ls_config;
typedef struct ls_model ls_model;

LANESIM_API const char* ls_status_name(ls_status status);

/* Message for the most recent failed call on this thread; empty string when
 * no failure has occurred. */
LANESIM_API const char* ls_last_error(void);

/* ---- configuration ---- */

LANESIM_API ls_status ls_config_create(ls_config** out);
LANESIM_API ls_status ls_config_load(const char* path, ls_config** out);
/* Same validation as one config file line. */
LANESIM_API ls_status ls_config_set(ls_config* config, const char* key,
                                    const char* value);
LANESIM_API ls_status ls_config_set_seed(ls_config* config, uint64_t seed);
LANESIM_API ls_status ls_config_get_seed(const ls_config* config, uint64_t* out);
/* Effective config as reloadable text; caller copies before the next call. */
LANESIM_API const char* ls_config_format(const ls_config* config);
LANESIM_API void ls_config_destroy(ls_config* config);

/* ---- training ---- */

typedef struct ls_train_summary {
  uint64_t gradient_steps;
  uint64_t env_steps;
  uint64_t episodes_done;
  uint64_t episodes_aborted;
  uint64_t episodes_timeout;
  double first_window_loss; /* mean TD loss over the first 4000 trained steps */
  double final_window_loss; /* mean TD loss over the final 4000 trained steps */
} ls_train_summary;

/* Runs a full training and writes <out_dir>/metrics.csv and
 * <out_dir>/model.ckpt. summary and out_model may be NULL. */
LANESIM_API ls_status ls_train(const ls_config* config, const char* out_dir,
                               ls_train_summary* summary, ls_model** out_model);

/* ---- models ---- */

LANESIM_API ls_status ls_model_load(const char* path, ls_model** out);
LANESIM_API ls_status ls_model_save(const ls_model* model, const char* path);
/* Greedy action for a raw state (v, a, x, y, theta, target_lane, lane_width,
 * curvature); normalization is applied internally. */
LANESIM_API ls_status ls_model_greedy(const ls_model* model, const double raw_state[8],
                                      double* a_yaw);
LANESIM_API void ls_model_destroy(ls_model* model);

/* ---- evaluation ---- */

typedef struct ls_eval_summary {
  int32_t episodes;
  double completion_rate;
  double abort_rate;
  double timeout_rate;
  double mean_duration_s;
  double mean_abs_a_yaw;
  double max_abs_omega;
  double mean_r;
  double mean_r_acce;
  double mean_r_rate;
  double mean_r_time;
} ls_eval_summary;

/* Greedy evaluation over isolated seeded episodes; csv_path may be NULL to
 * skip the per-episode file. */
LANESIM_API ls_status ls_eval(const ls_model* model, const ls_config* config,
                              int32_t episodes, uint64_t seed, const char* csv_path,
                              ls_eval_summary* summary);

/* ---- traffic-only simulation ---- */

typedef struct ls_sim_summary {
  uint64_t steps;
  uint64_t spawned;
  uint64_t exited;
  uint64_t final_vehicle_count;
  double min_bumper_gap; /* smallest same-lane gap observed, +inf if none */
} ls_sim_summary;

/* Runs traffic with no lane changes for `steps` steps (0 = config
 * max_sim_steps); trace_path may be NULL to skip the per-step trace. */
LANESIM_API ls_status ls_simulate(const ls_config* config, uint64_t steps,
                                  const char* trace_path, ls_sim_summary* summary);

/* ---- gradient checks ---- */

/* Runs the analytic-vs-finite-difference checks for every network head and
 * the full training loss. Returns LS_OK iff all pass; writes a report to
 * stdout when verbose is nonzero. */
LANESIM_API ls_status ls_gradcheck(int verbose, double* max_head_error,
                                   double* max_loss_error);

#ifdef __cplusplus
}
#endif

#endif /* LANESIM_C_H */
