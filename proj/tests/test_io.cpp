#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lanesim/checkpoint.hpp"
#include "lanesim/config.hpp"
#include "lanesim/eval.hpp"
#include "lanesim/metrics.hpp"

using namespace lanesim;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig cfg = parse_run_config_text("");
  CHECK(cfg.dt_s == doctest::Approx(0.1));
  CHECK(cfg.gamma == doctest::Approx(0.9));
  CHECK(cfg.alpha == doctest::Approx(0.01));
  CHECK(cfg.total_gradient_steps == 40000);
  CHECK(cfg.n_lanes == 3);
  CHECK(cfg.lane_width_m == doctest::Approx(3.75));
  CHECK(cfg.segment_length_m == doctest::Approx(1000.0));
  CHECK(cfg.departure_interval_min_s == doctest::Approx(5.0));
  CHECK(cfg.departure_interval_max_s == doctest::Approx(10.0));
  CHECK(cfg.speed_limit_min_kmh == doctest::Approx(80.0));
  CHECK(cfg.speed_limit_max_kmh == doctest::Approx(120.0));
  CHECK(cfg.b_compose == BComposeMode::kSymmetricClamp);
}

TEST_CASE("config parsing and validation") {
  SUBCASE("km/h speeds convert to SI on load") {
    const RunConfig cfg = parse_run_config_text("speed_limit_max_kmh = 120\n");
    CHECK(cfg.scenario().v_limit_max == doctest::Approx(33.3333333).epsilon(1e-6));
    CHECK(cfg.scenario().v_limit_min == doctest::Approx(80.0 / 3.6));
  }
  SUBCASE("comments and blank lines") {
    const RunConfig cfg = parse_run_config_text(
        "# full comment line\n"
        "\n"
        "gamma = 0.8  # trailing comment\n");
    CHECK(cfg.gamma == doctest::Approx(0.8));
  }
  SUBCASE("out-of-range value carries its line number") {
    try {
      parse_run_config_text("dt_s = 0.1\ngamma = 1.5\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line == 2);
      CHECK(std::string(e.what()).find("gamma out of range") != std::string::npos);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_run_config_text("not_a_key = 1\n"), ConfigError);
  }
  SUBCASE("unparsable values are rejected") {
    CHECK_THROWS_AS(parse_run_config_text("alpha = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config_text("alpha = 0.01x\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config_text("alpha\n"), ConfigError);
  }
  SUBCASE("cross-field constraints") {
    CHECK_THROWS_AS(parse_run_config_text("departure_interval_min_s = 12\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config_text("sigma_end = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_run_config_text("warmup_transitions = 10\nbatch_size = 64\n"),
        ConfigError);
  }
  SUBCASE("reward weights must be nonpositive") {
    CHECK_THROWS_AS(parse_run_config_text("w_acce = 0.5\n"), ConfigError);
    CHECK(parse_run_config_text("w_acce = -2\n").w_acce == doctest::Approx(-2.0));
  }
  SUBCASE("b_compose switch") {
    CHECK(parse_run_config_text("b_compose = literal_max\n").b_compose ==
          BComposeMode::kLiteralMax);
    CHECK_THROWS_AS(parse_run_config_text("b_compose = sometimes\n"), ConfigError);
  }
}

TEST_CASE("config round-trip is exact") {
  RunConfig cfg = parse_run_config_text(
      "gamma = 0.87\n"
      "alpha = 0.0123\n"
      "speed_limit_max_kmh = 117.3\n"
      "sigma_start = 0.19\n"
      "seed = 18446744073709551615\n");
  const std::string text = serialize_run_config(cfg);
  const RunConfig again = parse_run_config_text(text);
  CHECK(serialize_run_config(again) == text);
  CHECK(again.gamma == cfg.gamma);
  CHECK(again.alpha == cfg.alpha);
  CHECK(again.speed_limit_max_kmh == cfg.speed_limit_max_kmh);
  CHECK(again.seed == cfg.seed);
  // The derived SI views agree bit-for-bit as well.
  CHECK(again.scenario().v_limit_max == cfg.scenario().v_limit_max);
}

TEST_CASE("metrics csv format") {
  CHECK(std::string(kMetricsHeader) ==
        "step,episode_id,loss,r,r_acce,r_rate,r_time,sigma,"
        "episodes_done,episodes_aborted,episodes_timeout");

  std::vector<MetricsRow> rows(3);
  rows[0].step = 1;
  rows[1].step = 2;
  rows[2].step = 3;
  rows[2].loss = 0.125;
  const auto path = temp_file("lanesim_test_metrics.csv");
  write_metrics_csv(rows, path.string());
  const std::string text = slurp(path);
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == rows.size() + 1);  // header + one line per gradient step
  CHECK(text.rfind(kMetricsHeader, 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint round-trip") {
  QuadraticQ q;
  q.init(123);
  RunConfig cfg;
  cfg.seed = 123;
  CheckpointMeta meta{123, 777};
  const auto path = temp_file("lanesim_test_model.ckpt");
  save_checkpoint(q, cfg, meta, path.string());

  const LoadedCheckpoint loaded = load_checkpoint(path.string());
  CHECK(loaded.meta.seed == 123);
  CHECK(loaded.meta.steps == 777);
  CHECK(loaded.model.mode() == q.mode());

  // Greedy actions agree to the last digit on random states.
  Rng rng = make_rng(9, 0);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 8> s{};
    for (auto& x : s) x = dist(rng);
    CHECK(loaded.model.greedy(s) == q.greedy(s));
    CHECK(loaded.model.value(s, 0.1, false) == q.value(s, 0.1, false));
  }

  // The embedded config echo reloads to the same effective config.
  const RunConfig echoed = parse_run_config_text(loaded.config_echo);
  CHECK(echoed.seed == cfg.seed);
  CHECK(serialize_run_config(echoed) == serialize_run_config(cfg));

  // Saving the loaded model reproduces the file byte for byte.
  const auto path2 = temp_file("lanesim_test_model2.ckpt");
  save_checkpoint(loaded.model, echoed, loaded.meta, path2.string());
  CHECK(slurp(path) == slurp(path2));

  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("checkpoint rejects damage") {
  QuadraticQ q;
  q.init(5);
  RunConfig cfg;
  CheckpointMeta meta{5, 10};
  const auto path = temp_file("lanesim_test_damage.ckpt");
  save_checkpoint(q, cfg, meta, path.string());
  const std::string full = slurp(path);

  SUBCASE("truncation carries a parameter-count diagnostic") {
    std::ofstream out(path, std::ios::binary);
    out << full.substr(0, full.size() / 2);
    out.close();
    try {
      load_checkpoint(path.string());
      FAIL("expected CheckpointError");
    } catch (const CheckpointError& e) {
      const std::string msg = e.what();
      const bool informative = msg.find("truncated") != std::string::npos ||
                               msg.find("parameter") != std::string::npos ||
                               msg.find("expected net") != std::string::npos;
      CHECK(informative);
    }
  }

  SUBCASE("architecture mismatch is rejected") {
    std::string tampered = full;
    const auto pos = tampered.find("layers 8 100 1");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 14, "layers 8 101 1");
    std::ofstream out(path, std::ios::binary);
    out << tampered;
    out.close();
    CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointError);
  }

  SUBCASE("unknown header is rejected") {
    std::ofstream out(path, std::ios::binary);
    out << "something-else v9\n";
    out.close();
    CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointError);
  }

  std::filesystem::remove(path);
}

TEST_CASE("eval csv schema and determinism") {
  CHECK(std::string(kEvalHeader) ==
        "episode,seed,outcome,steps,duration_s,r,r_acce,r_rate,r_time,"
        "mean_abs_a_yaw,max_abs_omega");

  QuadraticQ q;
  q.init(17);
  RunConfig cfg;
  const EvalResult a = evaluate_policy(q, cfg, 4, 99);
  const EvalResult b = evaluate_policy(q, cfg, 4, 99);
  REQUIRE(a.rows.size() == 4);
  CHECK(a.summary.episodes == 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].r == b.rows[i].r);
    CHECK(a.rows[i].steps == b.rows[i].steps);
    CHECK(a.rows[i].outcome == b.rows[i].outcome);
    CHECK(a.rows[i].r ==
          a.rows[i].r_acce + a.rows[i].r_rate + a.rows[i].r_time);
  }

  const auto path = temp_file("lanesim_test_eval.csv");
  write_eval_csv(a, path.string());
  const std::string text = slurp(path);
  CHECK(text.rfind(kEvalHeader, 0) == 0);
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == a.rows.size() + 1);
  std::filesystem::remove(path);
}
