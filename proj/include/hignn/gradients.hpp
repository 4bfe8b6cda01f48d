#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hignn/loss.hpp"
#include "hignn/surrogate.hpp"
#include "hignn/training_data.hpp"

namespace hignn {

/// A training sample lowered to flat evaluation arrays: the sample's graph is
/// built once (matching build_graph ordering) and its edge/face features are
/// frozen, since positions never change during training.
struct CompiledSample {
  int n_particles = 0;
  std::vector<Vec3> u_base;    // alpha1 . F_i
  std::vector<Vec3> u_true;
  std::vector<double> denom;   // max(|U|^2, delta)
  std::vector<double> edge_in;    // 3 per edge
  std::vector<double> edge_force; // 6 per edge
  std::vector<std::int32_t> edge_target;
  std::vector<double> face_in;    // 6 per face
  std::vector<double> face_force; // 6 per face
  std::vector<std::int32_t> face_target;
};

CompiledSample compile_sample(const TrainingSample& sample, const Vec3& alpha1_diag,
                              double face_r_cut, double delta);

std::vector<CompiledSample> compile_dataset(std::span<const TrainingSample> samples,
                                            const Vec3& alpha1_diag, double face_r_cut,
                                            double delta);

/// Unnormalized loss sum, term count, and raw parameter-gradient sums over a
/// list of compiled samples. Work is cut into fixed-size chunks reduced in
/// chunk order, so the result does not depend on the worker count.
struct BatchResult {
  double loss_sum = 0.0;
  std::size_t term_count = 0;
  MlpParams grad_h;
  MlpParams grad_g;
};

BatchResult batch_gradients(std::span<const CompiledSample> samples,
                            std::span<const std::size_t> indices, const SurrogateParams& params,
                            int n_workers);

/// Forward-only loss over a list of compiled samples.
std::pair<double, std::size_t> batch_loss(std::span<const CompiledSample> samples,
                                          std::span<const std::size_t> indices,
                                          const SurrogateParams& params, int n_workers);

/// Mean loss and its exact reverse-mode gradients for one batch of raw
/// samples; the loss denominator guard is `delta`.
struct GradResult {
  double loss = 0.0;
  std::size_t term_count = 0;
  MlpParams grad_h;
  MlpParams grad_g;
};

GradResult hignn_gradients(std::span<const TrainingSample> batch, const SurrogateParams& params,
                           double delta = kLossGuardDelta, int n_workers = 1);

}  // namespace hignn
