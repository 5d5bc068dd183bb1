#pragma once

#include <array>
#include <cstdint>

#include "lanesim/mlp.hpp"
#include "lanesim/state.hpp"

namespace lanesim {

// How B combines its three subnet outputs. The symmetric clamp bounds the
// signed preliminary action by the learned magnitude; the literal max form
// is kept available behind this switch.
enum class BComposeMode { kSymmetricClamp, kLiteralMax };

const char* b_compose_name(BComposeMode mode);
BComposeMode b_compose_from_name(const std::string& name);

// Learned bound magnitude never falls below this floor.
inline constexpr double kBoundFloor = 0.01;  // rad/s^2

// A(s) stays at or below this value, keeping Q strictly concave in the
// action.
inline constexpr double kMaxCurvature = -kNegSoftplusOffset;

struct BInfo {
  double pre = 0.0;    // preliminary yaw acceleration subnet output
  double sen = 0.0;    // sensitivity factor subnet output
  double bound = 0.0;  // bound magnitude m = subnet output + kBoundFloor
  double value = 0.0;
  // Which operand determined the output: 0 = pre*sen (interior/product
  // branch), +1/-1 = upper/lower bound.
  int branch = 0;
};

// Quadratic Q-function approximator: Q(s, a) = A(s)*(B(s) - a)^2 + C(s).
// A is strictly negative, so the greedy action is B(s) and the state value
// is C(s). C additionally takes a terminal-completion flag as a ninth
// input.
class QuadraticQ {
 public:
  explicit QuadraticQ(BComposeMode mode = BComposeMode::kSymmetricClamp);

  void init(std::uint64_t seed);

  static double compose_from_outputs(double pre, double sen, double max_out,
                                     BComposeMode mode, BInfo* info = nullptr);

  double compose_b(const std::array<double, 8>& s, BInfo* info = nullptr) const;
  double curvature(const std::array<double, 8>& s) const;  // A(s), always < 0
  double state_value(const std::array<double, 8>& s, bool terminal) const;  // C
  double value(const std::array<double, 8>& s, double a, bool terminal) const;

  // Closed-form greedy action: B(s) under the environment clamp.
  double greedy(const std::array<double, 8>& s) const;
  // Greedy plus Gaussian exploration noise, clamped.
  double explore(const std::array<double, 8>& s, double sigma, Rng& rng) const;

  BComposeMode mode() const { return mode_; }

  Mlp& net_a() { return net_a_; }
  Mlp& net_c() { return net_c_; }
  Mlp& net_b_pre() { return net_b_pre_; }
  Mlp& net_b_sen() { return net_b_sen_; }
  Mlp& net_b_max() { return net_b_max_; }
  const Mlp& net_a() const { return net_a_; }
  const Mlp& net_c() const { return net_c_; }
  const Mlp& net_b_pre() const { return net_b_pre_; }
  const Mlp& net_b_sen() const { return net_b_sen_; }
  const Mlp& net_b_max() const { return net_b_max_; }

  static std::array<double, 9> c_input(const std::array<double, 8>& s, bool terminal);

 private:
  BComposeMode mode_;
  Mlp net_a_;
  Mlp net_c_;
  Mlp net_b_pre_;
  Mlp net_b_sen_;
  Mlp net_b_max_;
};

}  // namespace lanesim
