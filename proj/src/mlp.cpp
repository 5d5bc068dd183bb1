#include "lanesim/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lanesim {

const char* head_name(OutputHead head) {
  switch (head) {
    case OutputHead::kLinear: return "linear";
    case OutputHead::kNegSoftplus: return "neg_softplus";
    case OutputHead::kPosSoftplus: return "pos_softplus";
  }
  return "unknown";
}

OutputHead head_from_name(const std::string& name) {
  if (name == "linear") return OutputHead::kLinear;
  if (name == "neg_softplus") return OutputHead::kNegSoftplus;
  if (name == "pos_softplus") return OutputHead::kPosSoftplus;
  throw std::invalid_argument("unknown output head: " + name);
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void Gradients::zero() {
  for (auto& layer : layers) {
    std::fill(layer.w.begin(), layer.w.end(), 0.0);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
}

double Gradients::global_norm() const {
  double sq = 0.0;
  for (const auto& layer : layers) {
    for (double g : layer.w) sq += g * g;
    for (double g : layer.b) sq += g * g;
  }
  return std::sqrt(sq);
}

Mlp::Mlp(std::vector<int> layer_sizes, OutputHead head)
    : sizes_(std::move(layer_sizes)), head_(head) {
  if (sizes_.size() < 2) {
    throw std::invalid_argument("Mlp: need at least input and output sizes");
  }
  if (sizes_.back() != 1) {
    throw std::invalid_argument("Mlp: scalar output expected");
  }
  for (int n : sizes_) {
    if (n <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
  layers_.resize(sizes_.size() - 1);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].in = sizes_[l];
    layers_[l].out = sizes_[l + 1];
    layers_[l].w.assign(static_cast<std::size_t>(layers_[l].in) * layers_[l].out, 0.0);
    layers_[l].b.assign(layers_[l].out, 0.0);
  }
}

void Mlp::init_uniform(Rng& rng) {
  for (auto& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (auto& w : layer.w) w = uniform_real(rng, -bound, bound);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
}

double Mlp::forward(std::span<const double> input, ForwardCache& cache) const {
  if (static_cast<int>(input.size()) != sizes_.front()) {
    throw std::invalid_argument("Mlp::forward: input length mismatch");
  }
  cache.acts.resize(layers_.size());
  if (cache.acts.empty()) {
    throw std::logic_error("Mlp::forward: no layers");
  }
  cache.acts[0].assign(input.begin(), input.end());

  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const std::vector<double>& in = cache.acts[l];
    std::vector<double>& out = cache.acts[l + 1];
    out.resize(layer.out);
    const double* wp = layer.w.data();
    for (int i = 0; i < layer.out; ++i) {
      double z = layer.b[i];
      for (int j = 0; j < layer.in; ++j) z += wp[j] * in[j];
      out[i] = std::tanh(z);
      wp += layer.in;
    }
  }

  const Layer& last = layers_.back();
  const std::vector<double>& in = cache.acts.back();
  double z = last.b[0];
  for (int j = 0; j < last.in; ++j) z += last.w[j] * in[j];
  cache.z_out = z;

  switch (head_) {
    case OutputHead::kLinear:
      cache.out = z;
      break;
    case OutputHead::kNegSoftplus:
      cache.out = -softplus(z) - kNegSoftplusOffset;
      break;
    case OutputHead::kPosSoftplus:
      cache.out = softplus(z);
      break;
  }
  return cache.out;
}

double Mlp::forward(std::span<const double> input) const {
  ForwardCache cache;
  return forward(input, cache);
}

void Mlp::backward(const ForwardCache& cache, double d_output, Gradients& grads,
                   std::vector<double>* d_input) const {
  if (grads.layers.size() != layers_.size()) {
    throw std::invalid_argument("Mlp::backward: gradient shape mismatch");
  }

  double dz = d_output;
  switch (head_) {
    case OutputHead::kLinear:
      break;
    case OutputHead::kNegSoftplus:
      dz *= -sigmoid(cache.z_out);
      break;
    case OutputHead::kPosSoftplus:
      dz *= sigmoid(cache.z_out);
      break;
  }

  // Output layer: scalar delta.
  const std::size_t last = layers_.size() - 1;
  std::vector<double> delta_prev(layers_[last].in);
  {
    const Layer& layer = layers_[last];
    auto& g = grads.layers[last];
    const std::vector<double>& in = cache.acts[last];
    for (int j = 0; j < layer.in; ++j) {
      g.w[j] += dz * in[j];
      delta_prev[j] = layer.w[j] * dz;
    }
    g.b[0] += dz;
  }

  for (std::size_t l = last; l-- > 0;) {
    const Layer& layer = layers_[l];
    auto& g = grads.layers[l];
    const std::vector<double>& in = cache.acts[l];
    const std::vector<double>& act = cache.acts[l + 1];
    std::vector<double> delta(layer.in, 0.0);
    const double* wp = layer.w.data();
    double* gwp = g.w.data();
    for (int i = 0; i < layer.out; ++i) {
      const double d = delta_prev[i] * (1.0 - act[i] * act[i]);
      for (int j = 0; j < layer.in; ++j) {
        gwp[j] += d * in[j];
        delta[j] += wp[j] * d;
      }
      g.b[i] += d;
      wp += layer.in;
      gwp += layer.in;
    }
    delta_prev = std::move(delta);
  }

  if (d_input) *d_input = std::move(delta_prev);
}

Gradients Mlp::make_gradients() const {
  Gradients g;
  g.layers.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    g.layers[l].w.assign(layers_[l].w.size(), 0.0);
    g.layers[l].b.assign(layers_[l].b.size(), 0.0);
  }
  return g;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.w.size() + layer.b.size();
  return n;
}

double Mlp::param(std::size_t index) const {
  for (const auto& layer : layers_) {
    if (index < layer.w.size()) return layer.w[index];
    index -= layer.w.size();
    if (index < layer.b.size()) return layer.b[index];
    index -= layer.b.size();
  }
  throw std::out_of_range("Mlp::param: index out of range");
}

void Mlp::set_param(std::size_t index, double value) {
  for (auto& layer : layers_) {
    if (index < layer.w.size()) {
      layer.w[index] = value;
      return;
    }
    index -= layer.w.size();
    if (index < layer.b.size()) {
      layer.b[index] = value;
      return;
    }
    index -= layer.b.size();
  }
  throw std::out_of_range("Mlp::set_param: index out of range");
}

void Mlp::params_to(std::vector<double>& out) const {
  out.clear();
  out.reserve(param_count());
  for (const auto& layer : layers_) {
    out.insert(out.end(), layer.w.begin(), layer.w.end());
    out.insert(out.end(), layer.b.begin(), layer.b.end());
  }
}

void Mlp::params_from(std::span<const double> in) {
  if (in.size() != param_count()) {
    throw std::invalid_argument("Mlp::params_from: parameter count mismatch");
  }
  std::size_t k = 0;
  for (auto& layer : layers_) {
    for (auto& w : layer.w) w = in[k++];
    for (auto& b : layer.b) b = in[k++];
  }
}

void sgd_step(Mlp& net, const Gradients& grads, double alpha) {
  double sq = 0.0;
  for (const auto& layer : grads.layers) {
    for (double g : layer.w) sq += g * g;
    for (double g : layer.b) sq += g * g;
  }
  if (!std::isfinite(sq)) {
    throw std::runtime_error("sgd_step: non-finite gradient");
  }
  const double norm = std::sqrt(sq);
  const double factor = norm > kGradClipNorm ? kGradClipNorm / norm : 1.0;
  const double step = alpha * factor;

  std::vector<double> params;
  net.params_to(params);
  std::size_t k = 0;
  for (const auto& layer : grads.layers) {
    for (double g : layer.w) params[k++] -= step * g;
    for (double g : layer.b) params[k++] -= step * g;
  }
  net.params_from(params);
}

GradCheckResult gradient_check(const Mlp& net, int trials, double h, double tol,
                               Rng& rng) {
  if (h < 1e-7 || h > 1e-4) {
    throw std::invalid_argument("gradient_check: h out of [1e-7, 1e-4]");
  }
  Mlp probe = net;
  GradCheckResult result;
  std::vector<double> input(static_cast<std::size_t>(net.input_size()));
  ForwardCache cache;
  Gradients grads = probe.make_gradients();

  for (int t = 0; t < trials; ++t) {
    for (auto& x : input) x = uniform_real(rng, -2.0, 2.0);
    grads.zero();
    probe.forward(input, cache);
    probe.backward(cache, 1.0, grads);

    const std::size_t k = uniform_index(rng, probe.param_count());
    double analytic = 0.0;
    {
      std::size_t idx = k;
      for (const auto& layer : grads.layers) {
        if (idx < layer.w.size()) {
          analytic = layer.w[idx];
          break;
        }
        idx -= layer.w.size();
        if (idx < layer.b.size()) {
          analytic = layer.b[idx];
          break;
        }
        idx -= layer.b.size();
      }
    }

    const double saved = probe.param(k);
    probe.set_param(k, saved + h);
    const double f_plus = probe.forward(input);
    probe.set_param(k, saved - h);
    const double f_minus = probe.forward(input);
    probe.set_param(k, saved);
    const double numeric = (f_plus - f_minus) / (2.0 * h);

    const double denom = std::max(std::abs(analytic), std::abs(numeric));
    const double rel = denom < 1e-12 ? 0.0 : std::abs(analytic - numeric) / denom;
    result.max_rel_error = std::max(result.max_rel_error, rel);
  }
  result.passed = result.max_rel_error < tol;
  return result;
}

}  // namespace lanesim
