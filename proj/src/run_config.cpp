#include "hignn/run_config.hpp"

#include <initializer_list>
#include <set>

#include <nlohmann/json.hpp>

#include "hignn/kernels.hpp"
#include "hignn/text_io.hpp"

namespace hignn {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double positive(const json& j, const std::string& where) {
  const double v = j.get<double>();
  if (!(v > 0.0)) throw ConfigError(where + " must be positive");
  return v;
}

Domain parse_domain(const json& j) {
  require_keys(j, "domain", {"type", "edge"});
  const std::string type = j.at("type").get<std::string>();
  if (type == "unbounded") {
    if (j.contains("edge")) throw ConfigError("domain.edge is only valid for periodic domains");
    return Domain::unbounded();
  }
  if (type == "periodic") return Domain::periodic(positive(j.at("edge"), "domain.edge"));
  throw ConfigError("domain.type must be 'unbounded' or 'periodic'");
}

Vec3 parse_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

BackendConfig parse_backend(const json& j, const std::string& where) {
  require_keys(j, where, {"kind", "order", "model"});
  BackendConfig b;
  b.kind = j.at("kind").get<std::string>();
  if (b.kind == "oracle") {
    if (j.contains("model")) throw ConfigError(where + ": oracle backend takes no model");
    b.order = j.value("order", 3);
    if (b.order < 1 || b.order > 3) throw ConfigError(where + ".order must be 1, 2, or 3");
  } else if (b.kind == "surrogate") {
    if (!j.contains("model")) throw ConfigError(where + ": surrogate backend needs a model path");
    if (j.contains("order")) throw ConfigError(where + ": surrogate backend takes no order");
    b.model = j.at("model").get<std::string>();
  } else {
    throw ConfigError(where + ".kind must be 'oracle' or 'surrogate'");
  }
  return b;
}

PlacementConfig parse_placement(const json& j) {
  require_keys(j, "simulate.placement",
               {"kind", "per_side", "spacing", "origin", "path", "count", "extent", "min_gap"});
  PlacementConfig p;
  p.kind = j.at("kind").get<std::string>();
  if (p.kind == "cubic_lattice") {
    p.per_side = j.at("per_side").get<int>();
    if (p.per_side < 1) throw ConfigError("placement.per_side must be >= 1");
    p.spacing = positive(j.at("spacing"), "placement.spacing");
    if (j.contains("origin")) p.origin = parse_vec3(j.at("origin"), "placement.origin");
  } else if (p.kind == "file") {
    p.path = j.at("path").get<std::string>();
  } else if (p.kind == "random") {
    p.count = j.at("count").get<int>();
    if (p.count < 1) throw ConfigError("placement.count must be >= 1");
    if (j.contains("extent")) p.extent = positive(j.at("extent"), "placement.extent");
    if (j.contains("min_gap")) p.min_gap = positive(j.at("min_gap"), "placement.min_gap");
  } else {
    throw ConfigError("placement.kind must be 'cubic_lattice', 'file', or 'random'");
  }
  return p;
}

GenDataConfig parse_gen_data(const json& j, const json& output) {
  require_keys(j, "sampler",
               {"count", "particles", "max_extent", "near_contact_quota", "min_gap",
                "near_contact_gap", "oracle_order"});
  GenDataConfig g;
  g.count = j.at("count").get<int>();
  if (g.count < 1) throw ConfigError("sampler.count must be >= 1");
  if (j.contains("particles")) {
    g.sampler.particles = j.at("particles").get<int>();
    if (g.sampler.particles < 1) throw ConfigError("sampler.particles must be >= 1");
  }
  if (j.contains("max_extent")) g.sampler.max_extent = positive(j.at("max_extent"), "sampler.max_extent");
  if (j.contains("near_contact_quota")) {
    g.sampler.near_contact_quota = j.at("near_contact_quota").get<double>();
    if (g.sampler.near_contact_quota < 0.0 || g.sampler.near_contact_quota > 1.0)
      throw ConfigError("sampler.near_contact_quota must lie in [0, 1]");
  }
  if (j.contains("min_gap")) g.sampler.min_gap = positive(j.at("min_gap"), "sampler.min_gap");
  if (j.contains("near_contact_gap"))
    g.sampler.near_contact_gap = positive(j.at("near_contact_gap"), "sampler.near_contact_gap");
  if (j.contains("oracle_order")) {
    g.sampler.oracle_order = j.at("oracle_order").get<int>();
    if (g.sampler.oracle_order < 1 || g.sampler.oracle_order > 3)
      throw ConfigError("sampler.oracle_order must be 1, 2, or 3");
  }
  require_keys(output, "output", {"training_set"});
  g.output = output.at("training_set").get<std::string>();
  return g;
}

TrainSectionConfig parse_train(const json& j, const json& output) {
  require_keys(j, "train",
               {"data", "batch_size", "epochs", "base_lr", "lr_halving_period", "beta1", "beta2",
                "epsilon", "train_ratio", "test_ratio", "loss_guard_delta", "face_r_cut"});
  TrainSectionConfig t;
  t.data = j.at("data").get<std::string>();
  TrainConfig& c = t.train;
  if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<int>();
  if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
  if (j.contains("base_lr")) c.base_lr = positive(j.at("base_lr"), "train.base_lr");
  if (j.contains("lr_halving_period")) c.lr_halving_period = j.at("lr_halving_period").get<int>();
  if (j.contains("beta1")) c.beta1 = j.at("beta1").get<double>();
  if (j.contains("beta2")) c.beta2 = j.at("beta2").get<double>();
  if (j.contains("epsilon")) c.epsilon = positive(j.at("epsilon"), "train.epsilon");
  if (j.contains("train_ratio")) c.train_ratio = j.at("train_ratio").get<int>();
  if (j.contains("test_ratio")) c.test_ratio = j.at("test_ratio").get<int>();
  if (j.contains("loss_guard_delta"))
    c.loss_guard_delta = positive(j.at("loss_guard_delta"), "train.loss_guard_delta");
  if (j.contains("face_r_cut")) {
    t.face_r_cut = j.at("face_r_cut").get<double>();
    if (t.face_r_cut < 0.0) throw ConfigError("train.face_r_cut must be non-negative");
  }
  c.validate();
  require_keys(output, "output", {"model", "loss_history"});
  t.model_output = output.at("model").get<std::string>();
  t.loss_history_output = output.at("loss_history").get<std::string>();
  return t;
}

PredictConfig parse_predict(const json& j, const json& output) {
  require_keys(j, "predict", {"model", "positions", "forces", "face_r_cut"});
  PredictConfig p;
  p.model = j.at("model").get<std::string>();
  p.positions = j.at("positions").get<std::string>();
  p.forces = j.at("forces").get<std::string>();
  if (j.contains("face_r_cut")) {
    p.face_r_cut = j.at("face_r_cut").get<double>();
    if (*p.face_r_cut < 0.0) throw ConfigError("predict.face_r_cut must be non-negative");
  }
  require_keys(output, "output", {"velocities"});
  p.output = output.at("velocities").get<std::string>();
  return p;
}

SimulateConfig parse_simulate(const json& j, const json& output) {
  require_keys(j, "simulate",
               {"placement", "backend", "force", "dt", "steps", "output_every"});
  SimulateConfig s;
  s.placement = parse_placement(j.at("placement"));
  s.backend = parse_backend(j.at("backend"), "simulate.backend");
  if (j.contains("force")) {
    const json& f = j.at("force");
    require_keys(f, "simulate.force", {"uniform", "morse"});
    if (f.contains("uniform")) s.force.uniform = parse_vec3(f.at("uniform"), "force.uniform");
    if (f.contains("morse")) {
      const json& m = f.at("morse");
      require_keys(m, "simulate.force.morse", {"rho", "depth", "r_eq"});
      MorseParams mp;
      mp.rho = positive(m.at("rho"), "morse.rho");
      mp.depth = positive(m.at("depth"), "morse.depth");
      mp.r_eq = positive(m.at("r_eq"), "morse.r_eq");
      s.force.morse = mp;
    }
  }
  s.dt = positive(j.at("dt"), "simulate.dt");
  s.steps = j.at("steps").get<long>();
  if (s.steps < 1) throw ConfigError("simulate.steps must be >= 1");
  if (j.contains("output_every")) {
    s.output_every = j.at("output_every").get<long>();
    if (s.output_every < 1) throw ConfigError("simulate.output_every must be >= 1");
  }
  require_keys(output, "output", {"trajectory"});
  s.output = output.at("trajectory").get<std::string>();
  return s;
}

BenchConfig parse_bench(const json& j, const json& output) {
  require_keys(j, "bench", {"lattice", "chain", "timing"});
  require_keys(output, "output", {"lattice_table", "chain_table", "timing_table"});
  BenchConfig b;
  if (j.contains("lattice")) {
    const json& l = j.at("lattice");
    require_keys(l, "bench.lattice", {"L_values", "direction", "backend"});
    BenchLatticeConfig c;
    c.L_values = l.at("L_values").get<std::vector<double>>();
    if (c.L_values.empty()) throw ConfigError("bench.lattice.L_values must be non-empty");
    if (l.contains("direction")) c.direction = l.at("direction").get<std::string>();
    c.backend = parse_backend(l.at("backend"), "bench.lattice.backend");
    c.output = output.at("lattice_table").get<std::string>();
    b.lattice = std::move(c);
  }
  if (j.contains("chain")) {
    const json& l = j.at("chain");
    require_keys(l, "bench.chain", {"N_values", "L", "direction", "backend"});
    BenchChainConfig c;
    c.n_values = l.at("N_values").get<std::vector<int>>();
    if (c.n_values.empty()) throw ConfigError("bench.chain.N_values must be non-empty");
    if (l.contains("L")) c.L = positive(l.at("L"), "bench.chain.L");
    if (l.contains("direction")) c.direction = l.at("direction").get<std::string>();
    c.backend = parse_backend(l.at("backend"), "bench.chain.backend");
    c.output = output.at("chain_table").get<std::string>();
    b.chain = std::move(c);
  }
  if (j.contains("timing")) {
    const json& l = j.at("timing");
    require_keys(l, "bench.timing", {"N_values", "L", "model"});
    BenchTimingConfig c;
    c.n_values = l.at("N_values").get<std::vector<int>>();
    if (c.n_values.empty()) throw ConfigError("bench.timing.N_values must be non-empty");
    if (l.contains("L")) c.L = positive(l.at("L"), "bench.timing.L");
    c.model = l.at("model").get<std::string>();
    c.output = output.at("timing_table").get<std::string>();
    b.timing = std::move(c);
  }
  return b;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }

  require_keys(j, "config root",
               {"command", "seed", "domain", "physics", "workers", "sampler", "train", "predict",
                "simulate", "bench", "output"});

  RunConfig c;
  c.command = j.at("command").get<std::string>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("domain")) c.domain = parse_domain(j.at("domain"));
  if (j.contains("physics")) {
    const json& p = j.at("physics");
    require_keys(p, "physics", {"radius", "viscosity", "periodic_alpha1_scale"});
    if (p.contains("radius")) c.radius = positive(p.at("radius"), "physics.radius");
    if (p.contains("viscosity")) c.viscosity = positive(p.at("viscosity"), "physics.viscosity");
    if (p.contains("periodic_alpha1_scale"))
      c.periodic_alpha1_scale =
          positive(p.at("periodic_alpha1_scale"), "physics.periodic_alpha1_scale");
  }
  if (j.contains("workers")) {
    c.workers = j.at("workers").get<int>();
    if (c.workers < 0) throw ConfigError("workers must be >= 0");
  }

  const json output = j.contains("output") ? j.at("output") : json::object();
  if (c.command == "gen-data") {
    if (!j.contains("sampler")) throw ConfigError("gen-data config needs a 'sampler' section");
    GenDataConfig g = parse_gen_data(j.at("sampler"), output);
    g.sampler.radius = c.radius;
    g.sampler.viscosity = c.viscosity;
    c.gen_data = std::move(g);
  } else if (c.command == "train") {
    if (!j.contains("train")) throw ConfigError("train config needs a 'train' section");
    TrainSectionConfig t = parse_train(j.at("train"), output);
    t.train.seed = c.seed;
    c.train = std::move(t);
  } else if (c.command == "predict") {
    if (!j.contains("predict")) throw ConfigError("predict config needs a 'predict' section");
    c.predict = parse_predict(j.at("predict"), output);
  } else if (c.command == "simulate") {
    if (!j.contains("simulate")) throw ConfigError("simulate config needs a 'simulate' section");
    c.simulate = parse_simulate(j.at("simulate"), output);
  } else if (c.command == "bench") {
    if (!j.contains("bench")) throw ConfigError("bench config needs a 'bench' section");
    c.bench = parse_bench(j.at("bench"), output);
  } else {
    throw ConfigError("unknown command '" + c.command + "' in config");
  }
  return c;
}

Vec3 config_alpha1_diag(const RunConfig& config) {
  const Mat3 a = stokes_drag(config.viscosity, config.radius, config.domain,
                             config.periodic_alpha1_scale);
  return {a(0, 0), a(1, 1), a(2, 2)};
}

}  // namespace hignn
