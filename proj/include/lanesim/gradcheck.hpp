#pragma once

#include <cstdint>

#include "lanesim/qmodel.hpp"
#include "lanesim/replay.hpp"
#include "lanesim/trainer.hpp"

namespace lanesim {

struct CompositeGradCheckResult {
  double max_rel_error = 0.0;
  bool passed = false;
};

// Random batch of synthetic transitions whose states keep the B composition
// strictly inside its clamp, so the loss is differentiable at the probe
// point.
std::vector<Transition> make_clamp_interior_batch(const QuadraticQ& online,
                                                  std::size_t batch_size, Rng& rng);

// Central finite differences of the full batch TD loss through all five
// networks at `param_samples` random parameter points. Relative error uses
// an absolute floor of 1e-6 because fd noise dominates below it.
CompositeGradCheckResult composite_loss_gradcheck(int param_samples, double h,
                                                  double tol, std::uint64_t seed,
                                                  BComposeMode mode);

struct GradCheckReport {
  double max_head_error = 0.0;  // worst per-head relative error (tol 1e-5)
  double max_loss_error = 0.0;  // composite loss relative error (tol 1e-4)
  bool passed = false;
};

// Runs every gradient check: one per output head plus the composite loss.
GradCheckReport run_all_gradient_checks(bool verbose);

}  // namespace lanesim
