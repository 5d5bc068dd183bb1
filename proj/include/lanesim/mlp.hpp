#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lanesim/rng.hpp"

namespace lanesim {

enum class OutputHead { kLinear, kNegSoftplus, kPosSoftplus };

const char* head_name(OutputHead head);
OutputHead head_from_name(const std::string& name);

// Gradient updates are scaled so the per-network global norm never exceeds
// this bound.
inline constexpr double kGradClipNorm = 10.0;

// The neg_softplus head carries a small negative offset so its output stays
// strictly below zero even in the softplus tail.
inline constexpr double kNegSoftplusOffset = 1e-6;

double softplus(double z);
double sigmoid(double z);

// Per-parameter partials, shape-congruent with the network.
struct Gradients {
  struct LayerGrads {
    std::vector<double> w;
    std::vector<double> b;
  };
  std::vector<LayerGrads> layers;

  void zero();
  double global_norm() const;
};

// Cached activations from one forward pass, reusable across calls.
struct ForwardCache {
  std::vector<std::vector<double>> acts;  // acts[0] = input, then post-tanh layers
  double z_out = 0.0;                     // pre-head scalar
  double out = 0.0;
};

// Dense feed-forward scalar-output network: affine + tanh hidden layers and
// a {linear, neg_softplus, pos_softplus} output head.
class Mlp {
 public:
  Mlp(std::vector<int> layer_sizes, OutputHead head);

  // Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
  void init_uniform(Rng& rng);

  double forward(std::span<const double> input, ForwardCache& cache) const;
  double forward(std::span<const double> input) const;

  // Exact reverse-mode partials of (d_output * output) w.r.t. every weight,
  // bias and optionally the input. Accumulates into grads.
  void backward(const ForwardCache& cache, double d_output, Gradients& grads,
                std::vector<double>* d_input = nullptr) const;

  Gradients make_gradients() const;

  const std::vector<int>& layer_sizes() const { return sizes_; }
  OutputHead head() const { return head_; }
  int input_size() const { return sizes_.front(); }

  // Flat canonical parameter order: per layer, row-major weights then biases.
  std::size_t param_count() const;
  double param(std::size_t index) const;
  void set_param(std::size_t index, double value);
  void params_to(std::vector<double>& out) const;
  void params_from(std::span<const double> in);

 private:
  struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;
  };

  std::vector<int> sizes_;
  std::vector<Layer> layers_;
  OutputHead head_;
};

// p <- p - alpha * g, with the gradient set pre-scaled to global norm
// kGradClipNorm when it exceeds it. Non-finite gradients halt with a
// diagnostic.
void sgd_step(Mlp& net, const Gradients& grads, double alpha);

struct GradCheckResult {
  double max_rel_error = 0.0;
  bool passed = false;
};

// Compares analytic parameter gradients against central finite differences
// (f(p+h) - f(p-h)) / 2h over random (input, parameter) trials. Relative
// error is 0 when both sides are below 1e-12.
GradCheckResult gradient_check(const Mlp& net, int trials, double h, double tol,
                               Rng& rng);

}  // namespace lanesim
