#pragma once

#include <span>
#include <vector>

#include "hignn/particle_system.hpp"

namespace hignn {

/// Dense 3N x 3N translational grand mobility, row-major.
struct MobilityMatrix {
  int n_particles = 0;
  std::vector<double> data;

  explicit MobilityMatrix(int n = 0)
      : n_particles(n), data(static_cast<std::size_t>(3 * n) * static_cast<std::size_t>(3 * n)) {}

  int dim() const { return 3 * n_particles; }

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(c)]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(c)]; }

  void set_block(int i, int j, const Mat3& b);
  Mat3 block(int i, int j) const;

  /// Row-sequential matrix-vector product U = M F.
  std::vector<Vec3> multiply(std::span<const Vec3> forces) const;
};

/// Pairwise RPY assembly: diagonal blocks are the Stokes self-mobility,
/// off-diagonal blocks the RPY cross-mobility. Unbounded domains only.
MobilityMatrix grand_mobility(const ParticleSystem& system);

/// Ground-truth velocities at a chosen truncation: order 1 is isolated
/// Stokes drag, order 2 adds pairwise RPY coupling, order 3 adds the leading
/// stresslet reflection over every (source j, intermediate k) path with
/// k != i, k != j (j = i gives the two-body self-mobility correction).
/// Unbounded domains only.
std::vector<Vec3> oracle_velocities(const ParticleSystem& system, std::span<const Vec3> forces,
                                    int order);

}  // namespace hignn
