#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanesim/world.hpp"

namespace lanesim {

inline constexpr const char* kMetricsHeader =
    "step,episode_id,loss,r,r_acce,r_rate,r_time,sigma,"
    "episodes_done,episodes_aborted,episodes_timeout";

// One row per gradient step. The reward fields carry the total return of the
// most recently finished episode (zero before the first completes).
struct MetricsRow {
  long step = 0;
  long long episode_id = -1;
  double loss = 0.0;
  double r = 0.0;
  double r_acce = 0.0;
  double r_rate = 0.0;
  double r_time = 0.0;
  double sigma = 0.0;
  std::uint64_t episodes_done = 0;
  std::uint64_t episodes_aborted = 0;
  std::uint64_t episodes_timeout = 0;
};

std::string format_metrics_row(const MetricsRow& row);
void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);

inline constexpr const char* kTraceHeader = "step,time_s,vid,lane,x,y,v,a,theta,omega";

// Streams one per-vehicle row per step of a traffic run.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void write_step(const World& world);
  std::uint64_t rows_written() const { return rows_; }

 private:
  struct Impl;
  Impl* impl_;
  std::uint64_t rows_ = 0;
};

}  // namespace lanesim
