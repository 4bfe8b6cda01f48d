#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hignn/domain.hpp"
#include "hignn/geometry.hpp"

namespace hignn {

/// One m-particle configuration with applied forces and reference velocities.
struct TrainingSample {
  std::vector<Vec3> positions;
  std::vector<Vec3> forces;
  std::vector<Vec3> velocities;
  Domain domain;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplerConfig {
  int particles = 3;
  double radius = 1.0;
  double viscosity = 1.0;
  /// Largest pair distance drawn by the sampler.
  double max_extent = 500.0;
  /// Fraction of samples forced to contain a pair with gap <= near_contact_gap.
  double near_contact_quota = 0.30;
  /// Smallest allowed surface gap, in units of the radius.
  double min_gap = 1e-3;
  double near_contact_gap = 0.1;
  int oracle_order = 3;
  int max_retries = 1000;
};

/// Draws non-overlapping configurations (pair distances log-uniform, random
/// orientations), assigns each particle a random coordinate unit force, and
/// evaluates the analytic oracle. Deterministic in `seed` and independent of
/// any sharding: sample s uses its own generator seeded from (seed, s).
std::vector<TrainingSample> generate_training_set(int count, const SamplerConfig& config,
                                                  std::uint64_t seed);

/// CSV layout: header, then one row per sample:
/// sample_id, x/y/z per particle, fx/fy/fz per particle, ux/uy/uz per particle.
void write_training_csv(const std::string& path, std::span<const TrainingSample> samples);
std::vector<TrainingSample> read_training_csv(const std::string& path,
                                              const Domain& domain = Domain::unbounded());

/// Fraction of samples whose smallest surface gap is <= near_contact_gap.
double near_contact_fraction(std::span<const TrainingSample> samples, double radius,
                             double near_contact_gap = 0.1);

}  // namespace hignn
