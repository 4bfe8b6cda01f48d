#pragma once

#include <span>

#include "hignn/surrogate.hpp"

namespace hignn {

/// lr = base * 0.5^floor(epoch / halving_period).
double lr_schedule(int epoch, double base_lr = 1e-3, int halving_period = 100);

/// First/second moment accumulators mirroring both kernel networks.
struct AdamState {
  MlpParams m_h, v_h, m_g, v_g;
  long step = 0;

  static AdamState for_params(const SurrogateParams& params);
};

/// Bias-corrected Adam update on a flat parameter slice.
void adam_update_span(std::span<double> params, std::span<const double> grads,
                      std::span<double> m, std::span<double> v, long step, double lr,
                      double beta1, double beta2, double epsilon, const char* what);

/// One Adam step over both kernels; throws TrainingError naming the offending
/// parameter slice if a gradient is not finite.
void adam_step(SurrogateParams& params, const MlpParams& grad_h, const MlpParams& grad_g,
               AdamState& state, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double epsilon = 1e-8);

}  // namespace hignn
