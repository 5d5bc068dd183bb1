#include "lanesim/gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace lanesim {

std::vector<Transition> make_clamp_interior_batch(const QuadraticQ& online,
                                                  std::size_t batch_size, Rng& rng) {
  auto unit = [&rng]() { return uniform_real(rng, -1.0, 1.0); };
  auto random_state = [&](StateVector& s) {
    s.v = 15.0 + 10.0 * (unit() + 1.0);
    s.a = 1.5 * unit();
    s.x = 500.0 * (unit() + 1.0);
    s.y = 5.625 + 5.0 * unit();
    s.theta = 0.2 * unit();
    s.target_lane = static_cast<int>(uniform_index(rng, 3));
    s.lane_width = 3.75;
    s.curvature = 0.0;
  };

  // The probe point must sit safely away from the branch boundary of the B
  // composition so finite differences stay on one branch.
  auto well_inside_branch = [&](const BInfo& info) {
    const double product = info.pre * info.sen;
    if (online.mode() == BComposeMode::kSymmetricClamp) {
      return info.branch == 0 && std::abs(product) <= 0.8 * info.bound;
    }
    return (info.branch == 0 && product >= 1.25 * info.bound) ||
           (info.branch == 1 && product <= 0.8 * info.bound);
  };

  std::vector<Transition> batch(batch_size);
  for (auto& t : batch) {
    bool interior = false;
    for (int attempt = 0; attempt < 1000 && !interior; ++attempt) {
      random_state(t.s);
      BInfo info;
      online.compose_b(t.s.normalized(), &info);
      interior = well_inside_branch(info);
    }
    if (!interior) {
      throw std::runtime_error(
          "make_clamp_interior_batch: could not find a clamp-interior state");
    }
    random_state(t.s_next);
    t.a = uniform_real(rng, -kActionLimit, kActionLimit);
    t.r = uniform_real(rng, -1.0, 0.0);
    t.terminal = uniform_index(rng, 4) == 0;
  }
  return batch;
}

CompositeGradCheckResult composite_loss_gradcheck(int param_samples, double h,
                                                  double tol, std::uint64_t seed,
                                                  BComposeMode mode) {
  QuadraticQ online(mode);
  online.init(seed);
  QuadraticQ target(mode);
  target.init(seed + 1);  // distinct target parameters, as during training

  Rng rng = make_rng(seed, 101);
  const auto batch = make_clamp_interior_batch(online, 4, rng);
  std::vector<const Transition*> ptrs;
  for (const auto& t : batch) ptrs.push_back(&t);

  const double gamma = 0.9;
  TrainWorkspace ws(online);
  td_loss_and_grads(online, target, ptrs, gamma, ws);

  Mlp* nets[] = {&online.net_a(), &online.net_c(), &online.net_b_pre(),
                 &online.net_b_sen(), &online.net_b_max()};
  const Gradients* grads[] = {&ws.g_a, &ws.g_c, &ws.g_pre, &ws.g_sen, &ws.g_max};

  std::size_t total_params = 0;
  for (const Mlp* net : nets) total_params += net->param_count();

  auto loss_only = [&]() {
    TrainWorkspace scratch(online);
    return td_loss_and_grads(online, target, ptrs, gamma, scratch);
  };

  CompositeGradCheckResult result;
  for (int sample = 0; sample < param_samples; ++sample) {
    std::size_t flat = uniform_index(rng, total_params);
    int net_idx = 0;
    while (flat >= nets[net_idx]->param_count()) {
      flat -= nets[net_idx]->param_count();
      ++net_idx;
    }
    Mlp& net = *nets[net_idx];

    double analytic = 0.0;
    {
      std::size_t idx = flat;
      for (const auto& layer : grads[net_idx]->layers) {
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

    const double saved = net.param(flat);
    net.set_param(flat, saved + h);
    const double loss_plus = loss_only();
    net.set_param(flat, saved - h);
    const double loss_minus = loss_only();
    net.set_param(flat, saved);
    const double numeric = (loss_plus - loss_minus) / (2.0 * h);

    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    const double rel = std::abs(analytic - numeric) / denom;
    result.max_rel_error = std::max(result.max_rel_error, rel);
  }
  result.passed = result.max_rel_error < tol;
  return result;
}

GradCheckReport run_all_gradient_checks(bool verbose) {
  GradCheckReport report;
  report.passed = true;

  struct HeadCase {
    const char* name;
    std::vector<int> sizes;
    OutputHead head;
    std::uint64_t seed;
  };
  const HeadCase cases[] = {
      {"neg_softplus 8-100-1", {8, 100, 1}, OutputHead::kNegSoftplus, 11},
      {"linear 9-100-1", {9, 100, 1}, OutputHead::kLinear, 12},
      {"pos_softplus 8-150-1", {8, 150, 1}, OutputHead::kPosSoftplus, 13},
  };
  for (const auto& c : cases) {
    Mlp net(c.sizes, c.head);
    Rng init_rng = make_rng(c.seed, kStreamNetInit);
    net.init_uniform(init_rng);
    Rng check_rng = make_rng(c.seed, 50);
    const auto res = gradient_check(net, 100, 1e-5, 1e-5, check_rng);
    if (verbose) {
      std::printf("gradcheck head %-22s max rel error %.3e  %s\n", c.name,
                  res.max_rel_error, res.passed ? "ok" : "FAILED");
    }
    report.max_head_error = std::max(report.max_head_error, res.max_rel_error);
    report.passed = report.passed && res.passed;
  }

  for (BComposeMode mode : {BComposeMode::kSymmetricClamp, BComposeMode::kLiteralMax}) {
    const auto res = composite_loss_gradcheck(100, 1e-5, 1e-4, 21, mode);
    if (verbose) {
      std::printf("gradcheck td loss (%-11s) max rel error %.3e  %s\n",
                  b_compose_name(mode), res.max_rel_error, res.passed ? "ok" : "FAILED");
    }
    report.max_loss_error = std::max(report.max_loss_error, res.max_rel_error);
    report.passed = report.passed && res.passed;
  }
  return report;
}

}  // namespace lanesim
