#pragma once

#include <span>
#include <string>
#include <vector>

#include "hignn/integrator.hpp"

namespace hignn {

/// F / (6 pi mu a U); 1 for an isolated sphere.
double drag_coefficient(double force_magnitude, double speed, double viscosity, double radius);

/// Lattice positions for the benchmark drivers.
std::vector<Vec3> square_lattice_positions(double L);             // 4 corners in the xy-plane
std::vector<Vec3> chain_positions(int n, double L);               // evenly spaced along x
std::vector<Vec3> cubic_lattice_positions(int per_side, double L);

struct LatticeBenchRow {
  double L = 0.0;
  std::string backend;
  std::string variant;    // with_faces | without_faces
  std::string direction;  // perpendicular | parallel
  double coefficient = 0.0;
};

/// Drag coefficient of a corner particle of the 4-sphere square lattice under
/// a uniform unit force, with and without the three-body term. For the oracle
/// the variants are truncation order 3 vs 2; for the surrogate they toggle the
/// face contribution.
std::vector<LatticeBenchRow> bench_square_lattice(std::span<const double> L_values,
                                                  const std::string& direction,
                                                  const VelocityBackend& backend,
                                                  double viscosity, double radius);

struct ChainBenchRow {
  int n = 0;
  double L = 0.0;
  std::string direction;
  std::string backend;
  double central_velocity = 0.0;
  double rel_error_vs_oracle = 0.0;
};

/// Central-particle speed of an evenly spaced chain under a uniform unit
/// force, with the relative error against the order-3 oracle.
std::vector<ChainBenchRow> bench_chain(std::span<const int> n_values, double L,
                                       const std::string& direction,
                                       const VelocityBackend& backend, double viscosity,
                                       double radius);

struct TimingBenchRow {
  int n = 0;
  double graph_build_seconds = 0.0;
  double evaluate_seconds = 0.0;
};

/// Per-step inference cost split into graph construction and evaluation for
/// cubic lattices of the given sizes.
std::vector<TimingBenchRow> bench_timing(std::span<const int> n_values, double L,
                                         const SurrogateParams& params, int workers);

void write_lattice_bench_csv(const std::string& path, std::span<const LatticeBenchRow> rows);
void write_chain_bench_csv(const std::string& path, std::span<const ChainBenchRow> rows);
void write_timing_bench_csv(const std::string& path, std::span<const TimingBenchRow> rows);

}  // namespace hignn
