#include "lanesim/metrics.hpp"

#include "lanesim/text.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lanesim {

namespace {

void append_double(std::string& out, double v) {
  out += format_double_exact(v);
}

}  // namespace

std::string format_metrics_row(const MetricsRow& row) {
  std::string out;
  out += std::to_string(row.step);
  out += ',';
  out += std::to_string(row.episode_id);
  out += ',';
  append_double(out, row.loss);
  out += ',';
  append_double(out, row.r);
  out += ',';
  append_double(out, row.r_acce);
  out += ',';
  append_double(out, row.r_rate);
  out += ',';
  append_double(out, row.r_time);
  out += ',';
  append_double(out, row.sigma);
  out += ',';
  out += std::to_string(row.episodes_done);
  out += ',';
  out += std::to_string(row.episodes_aborted);
  out += ',';
  out += std::to_string(row.episodes_timeout);
  return out;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open metrics file for writing: " + path);
  out << kMetricsHeader << '\n';
  for (const auto& row : rows) {
    out << format_metrics_row(row) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing metrics file: " + path);
}

struct TraceWriter::Impl {
  std::ofstream out;
};

TraceWriter::TraceWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open trace file for writing: " + path);
  }
  impl_->out << kTraceHeader << '\n';
}

TraceWriter::~TraceWriter() { delete impl_; }

void TraceWriter::write_step(const World& world) {
  char buf[256];
  for (const auto& v : world.vehicles()) {
    std::snprintf(buf, sizeof buf, "%ld,%.3f,%llu,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  world.clock_step(), world.time_s(),
                  static_cast<unsigned long long>(v.vid), v.lane_index(world.road()),
                  v.x, v.y, v.v, v.a, v.theta, v.omega);
    impl_->out << buf;
    ++rows_;
  }
  if (!impl_->out) throw std::runtime_error("failed writing trace file");
}

}  // namespace lanesim
