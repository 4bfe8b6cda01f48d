#include "hignn/integrator.hpp"

#include <algorithm>
#include <sstream>

#include "hignn/text_io.hpp"

namespace hignn {

std::vector<Vec3> euler_step(std::span<const Vec3> positions, std::span<const Vec3> velocities,
                             double dt, const Domain& domain) {
  if (positions.size() != velocities.size())
    throw std::invalid_argument("euler_step: size mismatch");
  if (!(dt > 0.0)) throw std::domain_error("euler_step: dt must be positive");
  std::vector<Vec3> next(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    next[i] = domain.wrap(positions[i] + dt * velocities[i]);
  return next;
}

std::vector<Vec3> OracleBackend::velocities(const ParticleSystem& system,
                                            std::span<const Vec3> forces) const {
  return oracle_velocities(system, forces, order_);
}

std::vector<Vec3> SurrogateBackend::velocities(const ParticleSystem& system,
                                               std::span<const Vec3> forces) const {
  const HiGraph graph = build_graph(system.positions, system.domain, params_.face_r_cut);
  if (workers_ == 1) return hignn_velocities(graph, system.positions, forces, params_);
  const GraphPartition partition =
      partition_graph(graph, std::min(workers_, std::max(1, graph.vertex_count)));
  return parallel_infer(partition, system.positions, forces, params_, workers_);
}

Trajectory simulate(const ParticleSystem& initial, const VelocityBackend& backend,
                    const ForceModel& force_model, double dt, long n_steps, long output_every) {
  initial.validate();
  if (!(dt > 0.0)) throw std::domain_error("simulate: dt must be positive");
  if (n_steps < 0) throw std::domain_error("simulate: negative step count");
  if (output_every < 1) throw std::domain_error("simulate: output_every must be >= 1");

  ParticleSystem system = initial;
  Trajectory traj;
  traj.dt = dt;
  traj.force_model = force_model.describe();
  if (const auto* s = dynamic_cast<const SurrogateBackend*>(&backend))
    traj.model_hash = model_content_hash(s->params());

  traj.times.push_back(0.0);
  traj.frames.push_back(system.positions);

  for (long step = 1; step <= n_steps; ++step) {
    const std::vector<Vec3> forces = total_external_force(
        system.positions, system.domain, force_model.morse, force_model.uniform);
    const std::vector<Vec3> velocities = backend.velocities(system, forces);
    system.positions = euler_step(system.positions, velocities, dt, system.domain);

    if (system.size() >= 2 && system.min_pair_distance() < 2.0 * system.radius)
      throw SimulationError("particle overlap at step " + std::to_string(step), step);

    if (step % output_every == 0 || step == n_steps) {
      traj.times.push_back(dt * static_cast<double>(step));
      traj.frames.push_back(system.positions);
    }
  }
  return traj;
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  std::ostringstream os;
  os << "t,particle_id,x,y,z\n";
  for (std::size_t f = 0; f < trajectory.frames.size(); ++f) {
    const auto& frame = trajectory.frames[f];
    for (std::size_t i = 0; i < frame.size(); ++i)
      os << format_g17(trajectory.times[f]) << ',' << i << ',' << format_g17(frame[i].x) << ','
         << format_g17(frame[i].y) << ',' << format_g17(frame[i].z) << "\n";
  }
  write_text_file(path, os.str());
}

}  // namespace hignn
