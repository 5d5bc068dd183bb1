#include "lanesim/qmodel.hpp"

#include <algorithm>
#include <stdexcept>

namespace lanesim {

const char* b_compose_name(BComposeMode mode) {
  return mode == BComposeMode::kSymmetricClamp ? "clamp" : "literal_max";
}

BComposeMode b_compose_from_name(const std::string& name) {
  if (name == "clamp") return BComposeMode::kSymmetricClamp;
  if (name == "literal_max") return BComposeMode::kLiteralMax;
  throw std::invalid_argument("unknown b_compose mode: " + name);
}

QuadraticQ::QuadraticQ(BComposeMode mode)
    : mode_(mode),
      net_a_({8, 100, 1}, OutputHead::kNegSoftplus),
      net_c_({9, 100, 1}, OutputHead::kLinear),
      net_b_pre_({8, 150, 1}, OutputHead::kLinear),
      net_b_sen_({8, 150, 1}, OutputHead::kPosSoftplus),
      net_b_max_({8, 150, 1}, OutputHead::kPosSoftplus) {}

void QuadraticQ::init(std::uint64_t seed) {
  Mlp* nets[] = {&net_a_, &net_c_, &net_b_pre_, &net_b_sen_, &net_b_max_};
  for (std::size_t i = 0; i < 5; ++i) {
    Rng rng = make_rng(seed, kStreamNetInit + i);
    nets[i]->init_uniform(rng);
  }
}

double QuadraticQ::compose_from_outputs(double pre, double sen, double max_out,
                                        BComposeMode mode, BInfo* info) {
  const double m = max_out + kBoundFloor;
  const double product = pre * sen;
  double value = 0.0;
  int branch = 0;
  if (mode == BComposeMode::kSymmetricClamp) {
    if (product > m) {
      value = m;
      branch = 1;
    } else if (product < -m) {
      value = -m;
      branch = -1;
    } else {
      value = product;
      branch = 0;
    }
  } else {
    if (product > m) {
      value = product;
      branch = 0;
    } else {
      value = m;
      branch = 1;
    }
  }
  if (info) {
    info->pre = pre;
    info->sen = sen;
    info->bound = m;
    info->value = value;
    info->branch = branch;
  }
  return value;
}

double QuadraticQ::compose_b(const std::array<double, 8>& s, BInfo* info) const {
  const double pre = net_b_pre_.forward(s);
  const double sen = net_b_sen_.forward(s);
  const double max_out = net_b_max_.forward(s);
  return compose_from_outputs(pre, sen, max_out, mode_, info);
}

double QuadraticQ::curvature(const std::array<double, 8>& s) const {
  return net_a_.forward(s);
}

std::array<double, 9> QuadraticQ::c_input(const std::array<double, 8>& s,
                                          bool terminal) {
  std::array<double, 9> in{};
  std::copy(s.begin(), s.end(), in.begin());
  in[8] = terminal ? 1.0 : 0.0;
  return in;
}

double QuadraticQ::state_value(const std::array<double, 8>& s, bool terminal) const {
  const auto in = c_input(s, terminal);
  return net_c_.forward(in);
}

double QuadraticQ::value(const std::array<double, 8>& s, double a, bool terminal) const {
  const double b = compose_b(s);
  const double diff = b - a;
  return curvature(s) * diff * diff + state_value(s, terminal);
}

double QuadraticQ::greedy(const std::array<double, 8>& s) const {
  return std::clamp(compose_b(s), -kActionLimit, kActionLimit);
}

double QuadraticQ::explore(const std::array<double, 8>& s, double sigma, Rng& rng) const {
  if (sigma < 0.0) throw std::invalid_argument("explore: negative sigma");
  const double a = greedy(s) + sigma * normal_unit(rng);
  return std::clamp(a, -kActionLimit, kActionLimit);
}

}  // namespace lanesim
