#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hignn/gradients.hpp"
#include "hignn/optimizer.hpp"
#include "hignn/surrogate.hpp"
#include "hignn/training_data.hpp"

namespace hignn {

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  int batch_size = 512;
  int epochs = 400;
  double base_lr = 1e-3;
  int lr_halving_period = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int train_ratio = 5;
  int test_ratio = 1;
  std::uint64_t seed = 0;
  double loss_guard_delta = kLossGuardDelta;
  int workers = 0;  // 0 -> hardware concurrency

  void validate() const;
};

/// Model pieces fixed before training: the analytic single-body mobility and
/// the face cutoff used to build sample graphs.
struct ModelSetup {
  Vec3 alpha1_diag;
  double face_r_cut = 5.0;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
};

struct TrainResult {
  SurrogateParams params;  // best-on-test checkpoint
  std::vector<EpochRecord> history;
  double best_test_loss = 0.0;
  int best_epoch = -1;
};

/// Seeded end to end (split, init, per-epoch shuffles); gradients fan out
/// over fixed-size chunks so results are independent of the worker count.
/// Progress is reported through the optional callback after each epoch.
TrainResult train(std::span<const TrainingSample> samples, const ModelSetup& setup,
                  const TrainConfig& config,
                  void (*progress)(const EpochRecord&) = nullptr);

/// CSV: epoch, lr, train_loss, test_loss.
void write_loss_history_csv(const std::string& path, std::span<const EpochRecord> history);

}  // namespace hignn
