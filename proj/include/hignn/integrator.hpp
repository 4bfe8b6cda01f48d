#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hignn/forces.hpp"
#include "hignn/mobility.hpp"
#include "hignn/particle_system.hpp"
#include "hignn/surrogate.hpp"

namespace hignn {

/// X <- X + dt U, folded back into the box for periodic domains.
std::vector<Vec3> euler_step(std::span<const Vec3> positions, std::span<const Vec3> velocities,
                             double dt, const Domain& domain);

struct SimulationError : std::runtime_error {
  long step;
  SimulationError(const std::string& what, long step_index)
      : std::runtime_error(what), step(step_index) {}
};

/// Velocity evaluator plugged into the integrator: either the analytic
/// truncated oracle or the trained surrogate.
class VelocityBackend {
 public:
  virtual ~VelocityBackend() = default;
  virtual std::vector<Vec3> velocities(const ParticleSystem& system,
                                       std::span<const Vec3> forces) const = 0;
  virtual std::string name() const = 0;
};

class OracleBackend final : public VelocityBackend {
 public:
  explicit OracleBackend(int order) : order_(order) {}
  std::vector<Vec3> velocities(const ParticleSystem& system,
                               std::span<const Vec3> forces) const override;
  std::string name() const override { return "oracle-order" + std::to_string(order_); }

 private:
  int order_;
};

/// Rebuilds the graph every evaluation and runs the partitioned inference.
class SurrogateBackend final : public VelocityBackend {
 public:
  SurrogateBackend(SurrogateParams params, int workers)
      : params_(std::move(params)), workers_(workers < 1 ? 1 : workers) {}
  std::vector<Vec3> velocities(const ParticleSystem& system,
                               std::span<const Vec3> forces) const override;
  std::string name() const override { return "surrogate"; }
  const SurrogateParams& params() const { return params_; }

 private:
  SurrogateParams params_;
  int workers_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<Vec3>> frames;
  double dt = 0.0;
  std::string force_model;
  std::uint64_t model_hash = 0;
};

/// Explicit Euler integration of the overdamped dynamics. Frames are recorded
/// at t = 0 and every `output_every` steps; an overlap (surface gap < 0)
/// aborts with the offending step index.
Trajectory simulate(const ParticleSystem& initial, const VelocityBackend& backend,
                    const ForceModel& force_model, double dt, long n_steps, long output_every);

/// CSV: t, particle_id, x, y, z.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

}  // namespace hignn
