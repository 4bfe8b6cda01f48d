#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hignn/domain.hpp"
#include "hignn/forces.hpp"
#include "hignn/trainer.hpp"
#include "hignn/training_data.hpp"

namespace hignn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initial particle placement for `simulate`.
struct PlacementConfig {
  std::string kind;  // cubic_lattice | file | random
  int per_side = 2;
  double spacing = 4.0;
  Vec3 origin{};
  std::string path;
  int count = 0;
  double extent = 0.0;   // random placement box edge (unbounded domains)
  double min_gap = 0.1;  // surface gap enforced by random placement
};

struct BackendConfig {
  std::string kind = "oracle";  // oracle | surrogate
  int order = 3;
  std::string model;
};

struct GenDataConfig {
  int count = 0;
  SamplerConfig sampler;
  std::string output;
};

struct TrainSectionConfig {
  std::string data;
  TrainConfig train;
  double face_r_cut = 5.0;
  std::string model_output;
  std::string loss_history_output;
};

struct PredictConfig {
  std::string model;
  std::string positions;
  std::string forces;
  std::string output;
  std::optional<double> face_r_cut;  // overrides the model file when set
};

struct SimulateConfig {
  PlacementConfig placement;
  BackendConfig backend;
  ForceModel force;
  double dt = 0.001;
  long steps = 0;
  long output_every = 1;
  std::string output;
};

struct BenchLatticeConfig {
  std::vector<double> L_values;
  std::string direction = "perpendicular";
  BackendConfig backend;
  std::string output;
};

struct BenchChainConfig {
  std::vector<int> n_values;
  double L = 3.0;
  std::string direction = "perpendicular";
  BackendConfig backend;
  std::string output;
};

struct BenchTimingConfig {
  std::vector<int> n_values;
  double L = 3.0;
  std::string model;
  std::string output;
};

struct BenchConfig {
  std::optional<BenchLatticeConfig> lattice;
  std::optional<BenchChainConfig> chain;
  std::optional<BenchTimingConfig> timing;
};

/// One JSON document per run; its "command" field must echo the subcommand.
/// Unknown keys and out-of-range values are rejected at load time.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  Domain domain;
  double radius = 1.0;
  double viscosity = 1.0;
  double periodic_alpha1_scale = 0.982;
  int workers = 0;  // 0 -> hardware concurrency

  std::optional<GenDataConfig> gen_data;
  std::optional<TrainSectionConfig> train;
  std::optional<PredictConfig> predict;
  std::optional<SimulateConfig> simulate;
  std::optional<BenchConfig> bench;
};

RunConfig load_run_config(const std::string& path);

/// Computed alpha1 diagonal for the configured domain/physics.
Vec3 config_alpha1_diag(const RunConfig& config);

}  // namespace hignn
