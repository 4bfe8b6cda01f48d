#include "hignn/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hignn/trainer.hpp"

namespace hignn {

double lr_schedule(int epoch, double base_lr, int halving_period) {
  if (epoch < 0) throw std::domain_error("lr_schedule: negative epoch");
  return base_lr * std::pow(0.5, static_cast<double>(epoch / halving_period));
}

AdamState AdamState::for_params(const SurrogateParams& params) {
  AdamState s;
  s.m_h = zeros_like(params.h_theta2);
  s.v_h = zeros_like(params.h_theta2);
  s.m_g = zeros_like(params.g_theta3);
  s.v_g = zeros_like(params.g_theta3);
  return s;
}

void adam_update_span(std::span<double> params, std::span<const double> grads,
                      std::span<double> m, std::span<double> v, long step, double lr,
                      double beta1, double beta2, double epsilon, const char* what) {
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g))
      throw TrainingError(std::string("non-finite gradient at ") + what + "[" +
                          std::to_string(i) + "]");
    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
    v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + epsilon);
  }
}

void adam_step(SurrogateParams& params, const MlpParams& grad_h, const MlpParams& grad_g,
               AdamState& state, double lr, double beta1, double beta2, double epsilon) {
  ++state.step;
  auto update_mlp = [&](MlpParams& p, const MlpParams& g, MlpParams& m, MlpParams& v,
                        const char* name) {
    for (std::size_t li = 0; li < p.layers.size(); ++li) {
      const std::string w_path = std::string(name) + ".layer" + std::to_string(li) + ".w";
      const std::string b_path = std::string(name) + ".layer" + std::to_string(li) + ".b";
      adam_update_span(p.layers[li].w, g.layers[li].w, m.layers[li].w, v.layers[li].w,
                       state.step, lr, beta1, beta2, epsilon, w_path.c_str());
      adam_update_span(p.layers[li].b, g.layers[li].b, m.layers[li].b, v.layers[li].b,
                       state.step, lr, beta1, beta2, epsilon, b_path.c_str());
    }
  };
  update_mlp(params.h_theta2, grad_h, state.m_h, state.v_h, "h_theta2");
  update_mlp(params.g_theta3, grad_g, state.m_g, state.v_g, "g_theta3");
}

}  // namespace hignn
