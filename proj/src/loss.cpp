#include "hignn/loss.hpp"

#include <algorithm>
#include <stdexcept>

namespace hignn {

double relative_mse_loss(std::span<const Vec3> predicted, std::span<const Vec3> truth,
                         double delta) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("relative_mse_loss: length mismatch");
  if (truth.empty()) throw std::invalid_argument("relative_mse_loss: empty inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Vec3 d = predicted[i] - truth[i];
    acc += norm_sq(d) / std::max(norm_sq(truth[i]), delta);
  }
  return acc / static_cast<double>(truth.size());
}

}  // namespace hignn
