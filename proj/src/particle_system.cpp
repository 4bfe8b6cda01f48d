#include "hignn/particle_system.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace hignn {

double ParticleSystem::min_pair_distance() const {
  const int n = size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = domain.distance(positions[static_cast<std::size_t>(i)],
                                       positions[static_cast<std::size_t>(j)]);
      if (d < best) best = d;
    }
  return best;
}

void ParticleSystem::validate() const {
  if (!(radius > 0.0)) throw std::domain_error("particle radius must be positive");
  if (!(viscosity > 0.0)) throw std::domain_error("fluid viscosity must be positive");
  if (domain.is_periodic()) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const Vec3& p = positions[i];
      const double L = domain.edge;
      if (p.x < 0.0 || p.x >= L || p.y < 0.0 || p.y >= L || p.z < 0.0 || p.z >= L)
        throw std::invalid_argument("particle " + std::to_string(i) +
                                    " lies outside the periodic box [0, edge)");
    }
  }
  if (size() >= 2) {
    const double dmin = min_pair_distance();
    if (dmin < 2.0 * radius)
      throw std::invalid_argument("overlapping particles: min pair distance " +
                                  std::to_string(dmin) + " < 2a");
  }
}

}  // namespace hignn
