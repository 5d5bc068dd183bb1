#include "lanesim/config.hpp"

#include "lanesim/text.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace lanesim {

RoadGeometry RunConfig::road() const {
  RoadGeometry r;
  r.n_lanes = static_cast<int>(n_lanes);
  r.lane_width = lane_width_m;
  r.segment_length = segment_length_m;
  r.curvature = curvature_inv_m;
  return r;
}

ScenarioConfig RunConfig::scenario() const {
  ScenarioConfig s;
  s.departure_interval_min_s = departure_interval_min_s;
  s.departure_interval_max_s = departure_interval_max_s;
  s.v_limit_min = speed_limit_min_kmh * kKmhToMps;
  s.v_limit_max = speed_limit_max_kmh * kKmhToMps;
  s.dt = dt_s;
  s.seed = seed;
  s.command_x_min = command_x_min_m;
  s.command_x_max = command_x_max_m;
  s.max_sim_steps = max_sim_steps;
  s.vehicle_length = vehicle_length_m;
  return s;
}

IdmParams RunConfig::idm() const {
  IdmParams p;
  p.a_max = idm_a_max;
  p.b_comf = idm_b_comf;
  p.s0 = idm_s0;
  p.headway = idm_time_headway;
  p.delta = idm_delta;
  p.k_free = idm_free_gap_factor;
  return p;
}

SafetyParams RunConfig::safety() const { return {safety_d_min_m, safety_b_max_mps2}; }

RewardWeights RunConfig::rewards() const { return {w_acce, w_rate, w_time}; }

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("unparsable value for " + key + ": '" + value + "'", line);
  }
}

long parse_long(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("unparsable value for " + key + ": '" + value + "'", line);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("unparsable value for " + key + ": '" + value + "'", line);
  }
}

struct KeySpec {
  const char* name;
  std::function<void(RunConfig&, const std::string&, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

// check(v) returns an error string for out-of-range values, empty otherwise.
KeySpec double_key(const char* name, double RunConfig::*field,
                   std::function<std::string(double)> check) {
  return KeySpec{
      name,
      [name, field, check](RunConfig& c, const std::string& value, int line) {
        const double v = parse_double(name, value, line);
        if (check) {
          const std::string err = check(v);
          if (!err.empty()) throw ConfigError(std::string(name) + " " + err, line);
        }
        c.*field = v;
      },
      [field](const RunConfig& c) { return format_double_exact(c.*field); }};
}

KeySpec long_key(const char* name, long RunConfig::*field, long min_value,
                 long max_value) {
  return KeySpec{
      name,
      [name, field, min_value, max_value](RunConfig& c, const std::string& value,
                                          int line) {
        const long v = parse_long(name, value, line);
        if (v < min_value || v > max_value) {
          throw ConfigError(std::string(name) + " out of range", line);
        }
        c.*field = v;
      },
      [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

std::string positive(double v) { return v > 0.0 ? "" : "out of range"; }
std::string nonnegative(double v) { return v >= 0.0 ? "" : "out of range"; }
std::string nonpositive(double v) { return v <= 0.0 ? "" : "out of range"; }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      long_key("n_lanes", &RunConfig::n_lanes, 2, 16),
      double_key("lane_width_m", &RunConfig::lane_width_m, positive),
      double_key("segment_length_m", &RunConfig::segment_length_m, positive),
      double_key("curvature_inv_m", &RunConfig::curvature_inv_m, nullptr),
      double_key("dt_s", &RunConfig::dt_s, positive),
      double_key("departure_interval_min_s", &RunConfig::departure_interval_min_s,
                 positive),
      double_key("departure_interval_max_s", &RunConfig::departure_interval_max_s,
                 positive),
      double_key("speed_limit_min_kmh", &RunConfig::speed_limit_min_kmh, positive),
      double_key("speed_limit_max_kmh", &RunConfig::speed_limit_max_kmh, positive),
      double_key("vehicle_length_m", &RunConfig::vehicle_length_m, positive),
      double_key("command_x_min_m", &RunConfig::command_x_min_m, nonnegative),
      double_key("command_x_max_m", &RunConfig::command_x_max_m, nonnegative),
      long_key("max_sim_steps", &RunConfig::max_sim_steps, 1, 1000000000L),
      KeySpec{"seed",
              [](RunConfig& c, const std::string& value, int line) {
                c.seed = parse_u64("seed", value, line);
              },
              [](const RunConfig& c) { return std::to_string(c.seed); }},
      double_key("idm_a_max", &RunConfig::idm_a_max, positive),
      double_key("idm_b_comf", &RunConfig::idm_b_comf, positive),
      double_key("idm_s0", &RunConfig::idm_s0, positive),
      double_key("idm_time_headway", &RunConfig::idm_time_headway, positive),
      double_key("idm_delta", &RunConfig::idm_delta,
                 [](double v) { return v >= 1.0 ? "" : "out of range"; }),
      double_key("idm_free_gap_factor", &RunConfig::idm_free_gap_factor, positive),
      double_key("safety_d_min_m", &RunConfig::safety_d_min_m, positive),
      double_key("safety_b_max_mps2", &RunConfig::safety_b_max_mps2, positive),
      double_key("w_acce", &RunConfig::w_acce, nonpositive),
      double_key("w_rate", &RunConfig::w_rate, nonpositive),
      double_key("w_time", &RunConfig::w_time, nonpositive),
      long_key("total_gradient_steps", &RunConfig::total_gradient_steps, 1,
               1000000000L),
      double_key("gamma", &RunConfig::gamma,
                 [](double v) { return v > 0.0 && v < 1.0 ? "" : "out of range"; }),
      double_key("alpha", &RunConfig::alpha, positive),
      long_key("batch_size", &RunConfig::batch_size, 1, 1000000L),
      long_key("replay_capacity", &RunConfig::replay_capacity, 1, 100000000L),
      long_key("warmup_transitions", &RunConfig::warmup_transitions, 1, 100000000L),
      long_key("target_sync_period", &RunConfig::target_sync_period, 1, 100000000L),
      double_key("sigma_start", &RunConfig::sigma_start, nonnegative),
      double_key("sigma_end", &RunConfig::sigma_end, nonnegative),
      long_key("sigma_anneal_steps", &RunConfig::sigma_anneal_steps, 1, 1000000000L),
      KeySpec{"b_compose",
              [](RunConfig& c, const std::string& value, int line) {
                try {
                  c.b_compose = b_compose_from_name(value);
                } catch (const std::exception&) {
                  throw ConfigError("unparsable value for b_compose: '" + value + "'",
                                    line);
                }
              },
              [](const RunConfig& c) { return b_compose_name(c.b_compose); }},
  };
  return table;
}

void validate_cross_fields(const RunConfig& c) {
  if (c.departure_interval_min_s > c.departure_interval_max_s) {
    throw ConfigError("departure_interval_min_s exceeds departure_interval_max_s", 0);
  }
  if (c.speed_limit_min_kmh > c.speed_limit_max_kmh) {
    throw ConfigError("speed_limit_min_kmh exceeds speed_limit_max_kmh", 0);
  }
  if (c.command_x_min_m > c.command_x_max_m) {
    throw ConfigError("command_x_min_m exceeds command_x_max_m", 0);
  }
  if (c.command_x_max_m >= c.segment_length_m) {
    throw ConfigError("command_x_max_m must lie inside the segment", 0);
  }
  if (c.sigma_end > c.sigma_start) {
    throw ConfigError("sigma_end exceeds sigma_start", 0);
  }
  if (c.warmup_transitions < c.batch_size) {
    throw ConfigError("warmup_transitions below batch_size", 0);
  }
  if (c.replay_capacity < c.batch_size) {
    throw ConfigError("replay_capacity below batch_size", 0);
  }
}

}  // namespace

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value,
                        int line_number) {
  for (const auto& spec : key_table()) {
    if (key == spec.name) {
      spec.set(cfg, value, line_number);
      return;
    }
  }
  throw ConfigError("unknown key: '" + key + "'", line_number);
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value'", line_number);
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_number);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_number);
    apply_config_value(cfg, key, value, line_number);
  }
  validate_cross_fields(cfg);
  return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  return parse_run_config(in);
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& spec : key_table()) {
    out += spec.name;
    out += " = ";
    out += spec.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace lanesim
