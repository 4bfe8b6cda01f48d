#pragma once

#include <span>
#include <vector>

#include "hignn/domain.hpp"
#include "hignn/geometry.hpp"

namespace hignn {

/// N equal spheres in a viscous fluid.
struct ParticleSystem {
  std::vector<Vec3> positions;
  double radius = 1.0;
  double viscosity = 1.0;
  Domain domain;

  int size() const { return static_cast<int>(positions.size()); }

  /// Smallest center-to-center distance under the domain metric.
  double min_pair_distance() const;

  /// Throws std::domain_error on non-positive radius/viscosity,
  /// std::invalid_argument on particle overlap or out-of-box coordinates.
  void validate() const;
};

}  // namespace hignn
