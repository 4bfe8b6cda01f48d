#pragma once

#include <span>

#include "hignn/geometry.hpp"

namespace hignn {

/// Default guard added to the squared-velocity denominator so zero-velocity
/// records cannot divide by zero.
inline constexpr double kLossGuardDelta = 1e-30;

/// Relative mean-squared error: mean over particles of
/// |U - U_pred|^2 / max(|U|^2, delta). One term per particle.
double relative_mse_loss(std::span<const Vec3> predicted, std::span<const Vec3> truth,
                         double delta = kLossGuardDelta);

}  // namespace hignn
