#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>

#include "lanesim/gap.hpp"
#include "lanesim/idm.hpp"
#include "lanesim/qmodel.hpp"
#include "lanesim/road.hpp"
#include "lanesim/scenario.hpp"
#include "lanesim/state.hpp"

namespace lanesim {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_number)
      : std::runtime_error(line_number > 0
                               ? msg + " (line " + std::to_string(line_number) + ")"
                               : msg),
        line(line_number) {}
  int line;
};

// Flat run configuration, stored in the units the config file uses so that
// serializing the effective config and reloading reproduces it exactly.
// Everything downstream consumes the SI-converted views below.
struct RunConfig {
  // road
  long n_lanes = 3;
  double lane_width_m = 3.75;
  double segment_length_m = 1000.0;
  double curvature_inv_m = 0.0;
  // traffic scenario
  double dt_s = 0.1;
  double departure_interval_min_s = 5.0;
  double departure_interval_max_s = 10.0;
  double speed_limit_min_kmh = 80.0;
  double speed_limit_max_kmh = 120.0;
  double vehicle_length_m = 5.0;
  double command_x_min_m = 100.0;
  double command_x_max_m = 600.0;
  long max_sim_steps = 40000;
  std::uint64_t seed = 1;
  // longitudinal control
  double idm_a_max = 1.5;
  double idm_b_comf = 2.0;
  double idm_s0 = 2.0;
  double idm_time_headway = 1.5;
  double idm_delta = 4.0;
  double idm_free_gap_factor = 5.0;
  // gap safety
  double safety_d_min_m = 2.0;
  double safety_b_max_mps2 = 3.0;
  // reward weights
  double w_acce = -1.0;
  double w_rate = -1.0;
  double w_time = -0.05;
  // training
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
  BComposeMode b_compose = BComposeMode::kSymmetricClamp;

  RoadGeometry road() const;
  ScenarioConfig scenario() const;  // speeds converted to m/s
  IdmParams idm() const;
  SafetyParams safety() const;
  RewardWeights rewards() const;
};

// Parses `key = value` lines; '#' starts a comment. Unspecified keys keep
// the documented defaults. Unknown keys, unparsable values and out-of-range
// values are rejected with the offending line number.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Applies one key/value pair with the same validation as a file line.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value,
                        int line_number = 0);

// Effective config as a reloadable file; reload yields an identical config.
std::string serialize_run_config(const RunConfig& cfg);

}  // namespace lanesim
