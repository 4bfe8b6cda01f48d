#include "hignn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hignn/text_io.hpp"

namespace hignn {

namespace {

Vec3 force_direction(const std::string& direction) {
  if (direction == "perpendicular") return {0.0, 0.0, 1.0};
  if (direction == "parallel") return {1.0, 0.0, 0.0};
  throw std::domain_error("bench: direction must be 'perpendicular' or 'parallel'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double drag_coefficient(double force_magnitude, double speed, double viscosity, double radius) {
  if (speed == 0.0) throw std::domain_error("drag_coefficient: zero velocity");
  return force_magnitude / (6.0 * std::numbers::pi * viscosity * radius * speed);
}

std::vector<Vec3> square_lattice_positions(double L) {
  return {{0.0, 0.0, 0.0}, {L, 0.0, 0.0}, {0.0, L, 0.0}, {L, L, 0.0}};
}

std::vector<Vec3> chain_positions(int n, double L) {
  std::vector<Vec3> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = {L * static_cast<double>(i), 0.0, 0.0};
  return p;
}

std::vector<Vec3> cubic_lattice_positions(int per_side, double L) {
  std::vector<Vec3> p;
  p.reserve(static_cast<std::size_t>(per_side) * static_cast<std::size_t>(per_side) *
            static_cast<std::size_t>(per_side));
  for (int i = 0; i < per_side; ++i)
    for (int j = 0; j < per_side; ++j)
      for (int k = 0; k < per_side; ++k)
        p.push_back({L * i, L * j, L * k});
  return p;
}

namespace {

/// Evaluate one lattice/chain case under the chosen backend. `with_faces`
/// selects the truncation: surrogate keeps/drops the face term, the oracle
/// runs at order 3/2.
std::vector<Vec3> variant_velocities(const VelocityBackend& backend, const ParticleSystem& system,
                                     std::span<const Vec3> forces, bool with_faces) {
  if (const auto* surrogate = dynamic_cast<const SurrogateBackend*>(&backend)) {
    if (with_faces) return surrogate->velocities(system, forces);
    SurrogateParams trimmed = surrogate->params();
    trimmed.face_r_cut = 0.0;
    return SurrogateBackend(std::move(trimmed), 1).velocities(system, forces);
  }
  return oracle_velocities(system, forces, with_faces ? 3 : 2);
}

}  // namespace

std::vector<LatticeBenchRow> bench_square_lattice(std::span<const double> L_values,
                                                  const std::string& direction,
                                                  const VelocityBackend& backend,
                                                  double viscosity, double radius) {
  const Vec3 dir = force_direction(direction);
  std::vector<LatticeBenchRow> rows;
  for (double L : L_values) {
    if (!(L > 2.0 * radius))
      throw std::domain_error("bench_square_lattice: lattice length must exceed 2a");
    ParticleSystem system{square_lattice_positions(L), radius, viscosity, Domain::unbounded()};
    const std::vector<Vec3> forces(4, dir);
    for (bool with_faces : {true, false}) {
      const std::vector<Vec3> u = variant_velocities(backend, system, forces, with_faces);
      LatticeBenchRow row;
      row.L = L;
      row.backend = backend.name();
      row.variant = with_faces ? "with_faces" : "without_faces";
      row.direction = direction;
      row.coefficient = drag_coefficient(1.0, norm(u[0]), viscosity, radius);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ChainBenchRow> bench_chain(std::span<const int> n_values, double L,
                                       const std::string& direction,
                                       const VelocityBackend& backend, double viscosity,
                                       double radius) {
  const Vec3 dir = force_direction(direction);
  std::vector<ChainBenchRow> rows;
  for (int n : n_values) {
    if (n < 1) throw std::domain_error("bench_chain: chain needs at least one particle");
    ParticleSystem system{chain_positions(n, L), radius, viscosity, Domain::unbounded()};
    const std::vector<Vec3> forces(static_cast<std::size_t>(n), dir);
    const std::size_t center = static_cast<std::size_t>((n - 1) / 2);

    const std::vector<Vec3> u = backend.velocities(system, forces);
    const std::vector<Vec3> u_ref = oracle_velocities(system, forces, 3);

    ChainBenchRow row;
    row.n = n;
    row.L = L;
    row.direction = direction;
    row.backend = backend.name();
    row.central_velocity = norm(u[center]);
    row.rel_error_vs_oracle = norm(u[center] - u_ref[center]) / norm(u_ref[center]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TimingBenchRow> bench_timing(std::span<const int> n_values, double L,
                                         const SurrogateParams& params, int workers) {
  std::vector<TimingBenchRow> rows;
  for (int n : n_values) {
    int per_side = 1;
    while (per_side * per_side * per_side < n) ++per_side;
    std::vector<Vec3> positions = cubic_lattice_positions(per_side, L);
    positions.resize(static_cast<std::size_t>(n));
    const std::vector<Vec3> forces(positions.size(), Vec3{0.0, 0.0, -1.0});

    auto t0 = std::chrono::steady_clock::now();
    const HiGraph graph = build_graph(positions, Domain::unbounded(), params.face_r_cut);
    const double t_build = seconds_since(t0);

    const GraphPartition partition =
        partition_graph(graph, std::min(workers, std::max(1, graph.vertex_count)));
    t0 = std::chrono::steady_clock::now();
    const std::vector<Vec3> u = parallel_infer(partition, positions, forces, params, workers);
    const double t_eval = seconds_since(t0);
    (void)u;

    rows.push_back({static_cast<int>(positions.size()), t_build, t_eval});
  }
  return rows;
}

namespace {
std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}
}  // namespace

void write_lattice_bench_csv(const std::string& path, std::span<const LatticeBenchRow> rows) {
  std::ostringstream os;
  os << "L,backend,variant,direction,drag_coefficient\n";
  for (const auto& r : rows)
    os << format_g17(r.L) << ',' << r.backend << ',' << r.variant << ',' << r.direction << ','
       << format_g17(r.coefficient) << "\n";
  write_text_file(path, os.str());
}

void write_chain_bench_csv(const std::string& path, std::span<const ChainBenchRow> rows) {
  std::ostringstream os;
  os << "N,L,direction,backend,central_velocity,rel_error_vs_oracle\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_g17(r.L) << ',' << r.direction << ',' << r.backend << ','
       << format_g17(r.central_velocity) << ',' << format_g17(r.rel_error_vs_oracle) << "\n";
  write_text_file(path, os.str());
}

void write_timing_bench_csv(const std::string& path, std::span<const TimingBenchRow> rows) {
  std::ostringstream os;
  os << "N,graph_build_seconds,evaluate_seconds\n";
  for (const auto& r : rows)
    os << r.n << ',' << fixed3(r.graph_build_seconds) << ',' << fixed3(r.evaluate_seconds) << "\n";
  write_text_file(path, os.str());
}

}  // namespace hignn
