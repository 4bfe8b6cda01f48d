#include "hignn/mobility.hpp"

#include <stdexcept>

#include "hignn/kernels.hpp"

namespace hignn {

void MobilityMatrix::set_block(int i, int j, const Mat3& b) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) at(3 * i + r, 3 * j + c) = b(r, c);
}

Mat3 MobilityMatrix::block(int i, int j) const {
  Mat3 b;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) b(r, c) = at(3 * i + r, 3 * j + c);
  return b;
}

std::vector<Vec3> MobilityMatrix::multiply(std::span<const Vec3> forces) const {
  if (static_cast<int>(forces.size()) != n_particles)
    throw std::invalid_argument("mobility multiply: force count mismatch");
  std::vector<double> f(static_cast<std::size_t>(dim()));
  for (int i = 0; i < n_particles; ++i) {
    f[static_cast<std::size_t>(3 * i)] = forces[static_cast<std::size_t>(i)].x;
    f[static_cast<std::size_t>(3 * i + 1)] = forces[static_cast<std::size_t>(i)].y;
    f[static_cast<std::size_t>(3 * i + 2)] = forces[static_cast<std::size_t>(i)].z;
  }
  std::vector<Vec3> out(static_cast<std::size_t>(n_particles));
  const int d = dim();
  for (int r = 0; r < d; ++r) {
    double acc = 0.0;
    const double* row = data.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(d);
    for (int c = 0; c < d; ++c) acc += row[c] * f[static_cast<std::size_t>(c)];
    double* o = &out[static_cast<std::size_t>(r / 3)].x;
    o[r % 3] = acc;
  }
  return out;
}

MobilityMatrix grand_mobility(const ParticleSystem& system) {
  system.validate();
  if (system.domain.is_periodic())
    throw std::invalid_argument("grand_mobility: periodic domains unsupported (no Ewald sum)");
  const int n = system.size();
  MobilityMatrix m(n);
  const Mat3 self = stokes_drag(system.viscosity, system.radius, system.domain);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        m.set_block(i, i, self);
      } else {
        const Vec3 r = system.positions[static_cast<std::size_t>(j)] -
                       system.positions[static_cast<std::size_t>(i)];
        m.set_block(i, j, rpy_pair_mobility(r, system.viscosity, system.radius));
      }
    }
  }
  return m;
}

std::vector<Vec3> oracle_velocities(const ParticleSystem& system, std::span<const Vec3> forces,
                                    int order) {
  if (order < 1 || order > 3) throw std::domain_error("oracle_velocities: order must be 1, 2, or 3");
  if (system.domain.is_periodic())
    throw std::invalid_argument("oracle_velocities: periodic domains unsupported");
  system.validate();
  const int n = system.size();
  if (static_cast<int>(forces.size()) != n)
    throw std::invalid_argument("oracle_velocities: force count mismatch");

  if (order == 1) {
    const Mat3 drag = stokes_drag(system.viscosity, system.radius, system.domain);
    std::vector<Vec3> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = apply(drag, forces[static_cast<std::size_t>(i)]);
    return u;
  }

  std::vector<Vec3> u = grand_mobility(system).multiply(forces);
  if (order == 2) return u;

  // three-body (and pair self-correction) reflections via each intermediate k
  const auto& x = system.positions;
  for (int i = 0; i < n; ++i) {
    Vec3 acc;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const Vec3 q = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)];
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        const Vec3 p = x[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(j)];
        acc += stresslet_reflection_velocity(p, q, forces[static_cast<std::size_t>(j)],
                                             system.viscosity, system.radius);
      }
    }
    u[static_cast<std::size_t>(i)] += acc;
  }
  return u;
}

}  // namespace hignn
