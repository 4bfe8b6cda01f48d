#include "hignn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "hignn/bench.hpp"
#include "hignn/text_io.hpp"

namespace hignn {

namespace {

/// Fail before any computation if an output path cannot be created.
void check_writable(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::exists(dir))
    throw ConfigError("output directory does not exist: " + dir.string());
  std::error_code ec;
  const auto space = fs::status(dir, ec);
  if (ec || (space.permissions() & fs::perms::owner_write) == fs::perms::none)
    throw ConfigError("output directory is not writable: " + dir.string());
}

std::vector<Vec3> read_vec3_csv(const std::string& path, int expected_columns) {
  const std::string content = read_text_file(path);
  std::istringstream is(content);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV: " + path);
  std::vector<Vec3> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != expected_columns)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected " +
                               std::to_string(expected_columns) + " columns");
    auto value = [&](std::size_t i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0')
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": bad numeric field '" + cells[i] + "'");
      return v;
    };
    rows.push_back({value(0), value(1), value(2)});
  }
  return rows;
}

std::vector<Vec3> build_placement(const PlacementConfig& p, const RunConfig& config) {
  if (p.kind == "cubic_lattice") {
    std::vector<Vec3> pos = cubic_lattice_positions(p.per_side, p.spacing);
    for (Vec3& x : pos) x += p.origin;
    return pos;
  }
  if (p.kind == "file") return read_vec3_csv(p.path, 3);

  // random: rejection-sampled non-overlapping placement
  const double a = config.radius;
  const double box = config.domain.is_periodic()
                         ? config.domain.edge
                         : (p.extent > 0.0 ? p.extent : 10.0 * a * std::cbrt(double(p.count)));
  std::mt19937_64 rng(splitmix64(config.seed ^ 0x706c6163ULL));
  std::uniform_real_distribution<double> u(0.0, box);
  std::vector<Vec3> pos;
  const double min_dist = 2.0 * a + p.min_gap * a;
  for (int i = 0; i < p.count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const Vec3 cand{u(rng), u(rng), u(rng)};
      bool clear = true;
      for (const Vec3& q : pos)
        if (config.domain.distance(cand, q) < min_dist) { clear = false; break; }
      if (clear) {
        pos.push_back(cand);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw std::runtime_error("random placement failed: box too crowded for " +
                               std::to_string(p.count) + " particles");
  }
  return pos;
}

std::unique_ptr<VelocityBackend> make_backend(const BackendConfig& b, const RunConfig& config) {
  if (b.kind == "oracle") return std::make_unique<OracleBackend>(b.order);
  SurrogateParams params = load_model(b.model);
  const int workers =
      config.workers > 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  return std::make_unique<SurrogateBackend>(std::move(params), workers);
}

}  // namespace

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("HIGNN_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= 1) std::cerr << "[hignn] " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= 2) std::cerr << "[hignn] " << message << "\n";
}

int cmd_gen_data(const RunConfig& config) {
  const GenDataConfig& g = *config.gen_data;
  check_writable(g.output);
  log_info("generating " + std::to_string(g.count) + " samples (seed " +
           std::to_string(config.seed) + ")");
  const std::vector<TrainingSample> samples =
      generate_training_set(g.count, g.sampler, config.seed);
  write_training_csv(g.output, samples);
  const double near = near_contact_fraction(samples, g.sampler.radius, g.sampler.near_contact_gap);
  std::cout << "samples: " << samples.size() << "\n";
  std::cout << "near_contact_fraction: " << format_g17(near) << "\n";
  std::cout << "output: " << g.output << "\n";
  return 0;
}

int cmd_train(const RunConfig& config) {
  const TrainSectionConfig& t = *config.train;
  check_writable(t.model_output);
  check_writable(t.loss_history_output);

  const std::vector<TrainingSample> samples = read_training_csv(t.data, config.domain);
  log_info("loaded " + std::to_string(samples.size()) + " samples from " + t.data);

  ModelSetup setup;
  setup.alpha1_diag = config_alpha1_diag(config);
  setup.face_r_cut = t.face_r_cut;

  TrainConfig tc = t.train;
  if (config.workers > 0) tc.workers = config.workers;

  const TrainResult result = train(samples, setup, tc, [](const EpochRecord& r) {
    if (log_level() >= 2 || (log_level() >= 1 && r.epoch % 10 == 0))
      std::cerr << "[hignn] epoch " << r.epoch << " lr " << r.lr << " train " << r.train_loss
                << " test " << r.test_loss << "\n";
  });

  save_model(t.model_output, result.params);
  write_loss_history_csv(t.loss_history_output, result.history);
  std::cout << "epochs: " << result.history.size() << "\n";
  std::cout << "final_test_loss: " << format_g17(result.history.back().test_loss) << "\n";
  std::cout << "best_test_loss: " << format_g17(result.best_test_loss) << " (epoch "
            << result.best_epoch << ")\n";
  std::cout << "model: " << t.model_output << "\n";
  return 0;
}

int cmd_predict(const RunConfig& config) {
  const PredictConfig& p = *config.predict;
  check_writable(p.output);

  SurrogateParams params = load_model(p.model);
  if (p.face_r_cut) params.face_r_cut = *p.face_r_cut;

  const std::vector<Vec3> positions = read_vec3_csv(p.positions, 3);
  const std::vector<Vec3> forces = read_vec3_csv(p.forces, 3);
  if (positions.size() != forces.size())
    throw std::runtime_error("predict: positions and forces row counts differ");

  const int workers =
      config.workers > 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  const HiGraph graph = build_graph(positions, config.domain, params.face_r_cut);
  const GraphPartition partition =
      partition_graph(graph, std::min<int>(workers, std::max(1, graph.vertex_count)));
  const std::vector<Vec3> u = parallel_infer(partition, positions, forces, params, workers);

  std::ostringstream os;
  os << "ux,uy,uz\n";
  for (const Vec3& v : u)
    os << format_g17(v.x) << ',' << format_g17(v.y) << ',' << format_g17(v.z) << "\n";
  write_text_file(p.output, os.str());
  std::cout << "particles: " << u.size() << "\n";
  std::cout << "output: " << p.output << "\n";
  return 0;
}

int cmd_simulate(const RunConfig& config) {
  const SimulateConfig& s = *config.simulate;
  check_writable(s.output);

  ParticleSystem system;
  system.positions = build_placement(s.placement, config);
  system.radius = config.radius;
  system.viscosity = config.viscosity;
  system.domain = config.domain;

  const auto backend = make_backend(s.backend, config);
  log_info("simulating " + std::to_string(system.size()) + " particles, " +
           std::to_string(s.steps) + " steps, backend " + backend->name());

  const Trajectory traj = simulate(system, *backend, s.force, s.dt, s.steps, s.output_every);
  write_trajectory_csv(s.output, traj);
  std::cout << "frames: " << traj.frames.size() << "\n";
  std::cout << "particles: " << system.size() << "\n";
  std::cout << "output: " << s.output << "\n";
  return 0;
}

int cmd_bench(const RunConfig& config) {
  const BenchConfig& b = *config.bench;
  if (b.lattice) {
    check_writable(b.lattice->output);
    const auto backend = make_backend(b.lattice->backend, config);
    const auto rows = bench_square_lattice(b.lattice->L_values, b.lattice->direction, *backend,
                                           config.viscosity, config.radius);
    write_lattice_bench_csv(b.lattice->output, rows);
    std::cout << "lattice_table: " << b.lattice->output << " (" << rows.size() << " rows)\n";
  }
  if (b.chain) {
    check_writable(b.chain->output);
    const auto backend = make_backend(b.chain->backend, config);
    const auto rows = bench_chain(b.chain->n_values, b.chain->L, b.chain->direction, *backend,
                                  config.viscosity, config.radius);
    write_chain_bench_csv(b.chain->output, rows);
    std::cout << "chain_table: " << b.chain->output << " (" << rows.size() << " rows)\n";
  }
  if (b.timing) {
    check_writable(b.timing->output);
    const SurrogateParams params = load_model(b.timing->model);
    const int workers =
        config.workers > 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    const auto rows = bench_timing(b.timing->n_values, b.timing->L, params, workers);
    write_timing_bench_csv(b.timing->output, rows);
    std::cout << "timing_table: " << b.timing->output << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

int run_command(const RunConfig& config) {
  if (config.command == "gen-data") return cmd_gen_data(config);
  if (config.command == "train") return cmd_train(config);
  if (config.command == "predict") return cmd_predict(config);
  if (config.command == "simulate") return cmd_simulate(config);
  if (config.command == "bench") return cmd_bench(config);
  throw ConfigError("unknown command: " + config.command);
}

}  // namespace hignn
