#include "hignn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hignn/text_io.hpp"

namespace hignn {

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const MlpLayer& l : layers) n += l.w.size() + l.b.size();
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw std::invalid_argument("mlp: no layers");
  int prev = layers.front().in;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const MlpLayer& l = layers[i];
    if (l.in != prev) throw std::invalid_argument("mlp: layer width mismatch");
    if (l.w.size() != static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out) ||
        l.b.size() != static_cast<std::size_t>(l.out))
      throw std::invalid_argument("mlp: layer buffer size mismatch");
    for (double v : l.w)
      if (!std::isfinite(v)) throw std::invalid_argument("mlp: non-finite weight");
    for (double v : l.b)
      if (!std::isfinite(v)) throw std::invalid_argument("mlp: non-finite bias");
    prev = l.out;
  }
}

MlpParams make_mlp(int input_width, std::span<const int> hidden_widths, int output_width,
                   std::uint64_t seed) {
  MlpParams p;
  int prev = input_width;
  std::size_t layer_index = 0;
  auto add_layer = [&](int out) {
    MlpLayer l;
    l.in = prev;
    l.out = out;
    l.w.resize(static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out));
    l.b.assign(static_cast<std::size_t>(l.out), 0.0);
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(layer_index)));
    const double limit = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (double& v : l.w) v = u(rng);
    p.layers.push_back(std::move(l));
    prev = out;
    ++layer_index;
  };
  for (int h : hidden_widths) add_layer(h);
  add_layer(output_width);
  return p;
}

MlpParams make_kernel_mlp(int input_width, std::uint64_t seed) {
  return make_mlp(input_width, kDefaultHiddenWidths, kKernelOutputWidth, seed);
}

MlpParams zeros_like(const MlpParams& p) {
  MlpParams z;
  z.layers.reserve(p.layers.size());
  for (const MlpLayer& l : p.layers) {
    MlpLayer g;
    g.in = l.in;
    g.out = l.out;
    g.w.assign(l.w.size(), 0.0);
    g.b.assign(l.b.size(), 0.0);
    z.layers.push_back(std::move(g));
  }
  return z;
}

void affine_rowmajor(const double* w, const double* bias, int out_n, int in_n, const double* x,
                     double* y) {
  for (int o = 0; o < out_n; ++o) {
    const double* row = w + static_cast<std::size_t>(o) * static_cast<std::size_t>(in_n);
    double acc = bias[o];
    for (int k = 0; k < in_n; ++k) acc += row[k] * x[k];
    y[o] = acc;
  }
}

void mlp_forward(const MlpParams& params, const double* input, double* output, MlpWorkspace& ws) {
  const std::size_t n_layers = params.layers.size();
  std::size_t max_width = 0;
  for (const MlpLayer& l : params.layers) max_width = std::max(max_width, static_cast<std::size_t>(l.out));
  if (ws.a.size() < max_width) ws.a.resize(max_width);
  if (ws.b.size() < max_width) ws.b.resize(max_width);

  const double* cur = input;
  for (std::size_t li = 0; li < n_layers; ++li) {
    const MlpLayer& l = params.layers[li];
    const bool last = (li + 1 == n_layers);
    double* dst = last ? output : (li % 2 == 0 ? ws.a.data() : ws.b.data());
    affine_rowmajor(l.w.data(), l.b.data(), l.out, l.in, cur, dst);
    if (!last)
      for (int o = 0; o < l.out; ++o) dst[o] = std::tanh(dst[o]);
    cur = dst;
  }
}

Mat36 mlp_forward36(const MlpParams& params, std::span<const double> input) {
  if (static_cast<int>(input.size()) != params.input_width())
    throw std::invalid_argument("mlp_forward: input width mismatch");
  if (params.output_width() != kKernelOutputWidth)
    throw std::invalid_argument("mlp_forward: kernel output must be 18-wide");
  MlpWorkspace ws;
  Mat36 out;
  mlp_forward(params, input.data(), out.m.data(), ws);
  return out;
}

}  // namespace hignn
