#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hignn/domain.hpp"
#include "hignn/geometry.hpp"

namespace hignn {

struct MorseParams {
  double rho = 1.0;    // inverse interaction range
  double depth = 1.0;  // well depth D_e
  double r_eq = 2.5;   // equilibrium distance

  void validate() const;
};

/// Signed pair force magnitude along the unit vector from j to i: positive is
/// repulsive (short range), negative attractive (long range), zero at r_eq,
/// vanishing as r -> infinity.
double morse_force(double r, const MorseParams& params);

/// F_i = sum_{j != i} morse(r_ij) rhat_ij + uniform term; pair terms are
/// exactly equal and opposite. Periodic domains use minimum-image separations.
std::vector<Vec3> total_external_force(std::span<const Vec3> positions, const Domain& domain,
                                       const std::optional<MorseParams>& morse,
                                       const std::optional<Vec3>& uniform);

struct ForceModel {
  std::optional<Vec3> uniform;
  std::optional<MorseParams> morse;

  std::string describe() const;
};

}  // namespace hignn
