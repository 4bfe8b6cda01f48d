#include "hignn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "hignn/text_io.hpp"

namespace hignn {

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::domain_error("train: batch_size must be >= 1");
  if (epochs < 1) throw std::domain_error("train: epochs must be >= 1");
  if (train_ratio < 1 || test_ratio < 1)
    throw std::domain_error("train: ratio parts must be positive");
  if (!(base_lr > 0.0)) throw std::domain_error("train: base_lr must be positive");
  if (lr_halving_period < 1) throw std::domain_error("train: lr halving period must be >= 1");
  if (workers < 0) throw std::domain_error("train: workers must be >= 0");
}

TrainResult train(std::span<const TrainingSample> samples, const ModelSetup& setup,
                  const TrainConfig& config, void (*progress)(const EpochRecord&)) {
  config.validate();
  if (samples.size() < 2) throw TrainingError("training needs at least two samples");

  const int workers = config.workers > 0
                          ? config.workers
                          : std::max(1u, std::thread::hardware_concurrency());

  // seeded split: shuffle indices, carve off the test share
  std::mt19937_64 rng(splitmix64(config.seed));
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_test = std::max<std::size_t>(
      1, samples.size() * static_cast<std::size_t>(config.test_ratio) /
             static_cast<std::size_t>(config.train_ratio + config.test_ratio));
  const std::size_t n_train = samples.size() - n_test;
  if (n_train == 0) throw TrainingError("training split left no training samples");
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  const std::vector<std::size_t> test_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                                          order.end());

  SurrogateParams params;
  params.h_theta2 = make_kernel_mlp(3, splitmix64(config.seed ^ 0x4869ULL));
  params.g_theta3 = make_kernel_mlp(6, splitmix64(config.seed ^ 0x4774ULL));
  params.alpha1_diag = setup.alpha1_diag;
  params.face_r_cut = setup.face_r_cut;
  params.validate();

  const std::vector<CompiledSample> compiled =
      compile_dataset(samples, setup.alpha1_diag, setup.face_r_cut, config.loss_guard_delta);

  AdamState adam = AdamState::for_params(params);
  TrainResult result;
  result.best_test_loss = std::numeric_limits<double>::infinity();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, config.base_lr, config.lr_halving_period);
    std::shuffle(train_idx.begin(), train_idx.end(), rng);

    double epoch_loss_sum = 0.0;
    std::size_t epoch_terms = 0;
    const std::size_t n_batches = (n_train + static_cast<std::size_t>(config.batch_size) - 1) /
                                  static_cast<std::size_t>(config.batch_size);
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t lo = b * static_cast<std::size_t>(config.batch_size);
      const std::size_t hi = std::min(n_train, lo + static_cast<std::size_t>(config.batch_size));
      BatchResult r = batch_gradients(compiled, std::span<const std::size_t>(train_idx).subspan(lo, hi - lo),
                                      params, workers);
      const double batch_loss_value = r.loss_sum / static_cast<double>(r.term_count);
      if (!std::isfinite(batch_loss_value))
        throw TrainingError("loss diverged at epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(b));
      const double scale = 1.0 / static_cast<double>(r.term_count);
      for (MlpParams* mp : {&r.grad_h, &r.grad_g})
        for (MlpLayer& l : mp->layers) {
          for (double& v : l.w) v *= scale;
          for (double& v : l.b) v *= scale;
        }
      adam_step(params, r.grad_h, r.grad_g, adam, lr, config.beta1, config.beta2,
                config.epsilon);
      epoch_loss_sum += r.loss_sum;
      epoch_terms += r.term_count;
    }

    const auto [test_sum, test_terms] = batch_loss(compiled, test_idx, params, workers);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_loss = epoch_loss_sum / static_cast<double>(epoch_terms);
    rec.test_loss = test_sum / static_cast<double>(test_terms);
    result.history.push_back(rec);
    if (progress) progress(rec);

    if (rec.test_loss < result.best_test_loss) {
      result.best_test_loss = rec.test_loss;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

void write_loss_history_csv(const std::string& path, std::span<const EpochRecord> history) {
  std::ostringstream os;
  os << "epoch,lr,train_loss,test_loss\n";
  for (const EpochRecord& r : history)
    os << r.epoch << ',' << format_g17(r.lr) << ',' << format_g17(r.train_loss) << ','
       << format_g17(r.test_loss) << "\n";
  write_text_file(path, os.str());
}

}  // namespace hignn
