#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hignn/geometry.hpp"

namespace hignn {

struct MlpLayer {
  int in = 0;
  int out = 0;
  std::vector<double> w;  // out x in, row-major
  std::vector<double> b;  // out
};

/// Fully-connected network: tanh on hidden layers, identity on the output
/// layer. The 18-wide output reshapes to a 3x6 kernel block.
struct MlpParams {
  std::vector<MlpLayer> layers;

  int input_width() const { return layers.empty() ? 0 : layers.front().in; }
  int output_width() const { return layers.empty() ? 0 : layers.back().out; }
  std::size_t parameter_count() const;

  /// Shape chaining plus finiteness of every entry.
  void validate() const;
};

inline constexpr std::array<int, 4> kDefaultHiddenWidths{64, 256, 128, 64};
inline constexpr int kKernelOutputWidth = 18;

/// Glorot-uniform weights, zero biases, seeded per-layer.
MlpParams make_mlp(int input_width, std::span<const int> hidden_widths, int output_width,
                   std::uint64_t seed);

/// Convenience: the project-default architecture for a given input width.
MlpParams make_kernel_mlp(int input_width, std::uint64_t seed);

/// Zero-valued parameter set with the same shapes (gradient accumulators).
MlpParams zeros_like(const MlpParams& p);

struct MlpWorkspace {
  std::vector<double> a;
  std::vector<double> b;
};

/// y = W x + b with y[o] accumulated in ascending-k order. Out-of-line on
/// purpose: every forward path shares this one compiled kernel, which is what
/// makes batched, serial, and brute-force evaluations bit-identical.
void affine_rowmajor(const double* w, const double* bias, int out_n, int in_n, const double* x,
                     double* y);

void mlp_forward(const MlpParams& params, const double* input, double* output, MlpWorkspace& ws);

/// Allocating single-shot forward, reshaped to the 3x6 kernel block.
Mat36 mlp_forward36(const MlpParams& params, std::span<const double> input);

}  // namespace hignn
