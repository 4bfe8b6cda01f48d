#include "hignn/surrogate.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hignn/text_io.hpp"

#include <nlohmann/json.hpp>

namespace hignn {

void SurrogateParams::validate() const {
  h_theta2.validate();
  g_theta3.validate();
  if (h_theta2.input_width() != 3 || h_theta2.output_width() != kKernelOutputWidth)
    throw std::invalid_argument("surrogate: pair kernel must map 3 -> 18");
  if (g_theta3.input_width() != 6 || g_theta3.output_width() != kKernelOutputWidth)
    throw std::invalid_argument("surrogate: triplet kernel must map 6 -> 18");
  if (!(alpha1_diag.x > 0.0 && alpha1_diag.y > 0.0 && alpha1_diag.z > 0.0))
    throw std::invalid_argument("surrogate: alpha1 diagonal must be positive");
  if (face_r_cut < 0.0) throw std::invalid_argument("surrogate: face cutoff must be non-negative");
}

namespace {

void check_shapes(const HiGraph& graph, std::span<const Vec3> positions,
                  std::span<const Vec3> forces) {
  if (static_cast<int>(positions.size()) != graph.vertex_count ||
      static_cast<int>(forces.size()) != graph.vertex_count)
    throw std::invalid_argument("graph/positions/forces size mismatch");
}

/// Edge and face sums for targets in [slice.target_begin, slice.target_end),
/// written into `out` (pre-filled with the alpha1 term). One worker runs this
/// per slice; the serial path runs it on the full-range slice.
void accumulate_slice(const HiGraph& graph, const PartSlice& slice,
                      std::span<const Vec3> positions, std::span<const Vec3> forces,
                      const SurrogateParams& params, std::vector<Vec3>& out) {
  MlpWorkspace ws;
  double input[6];
  Mat36 kernel;
  for (std::size_t e = slice.edge_begin; e < slice.edge_end; ++e) {
    const auto [t, s] = graph.edges[e];
    const Vec3 rel = graph.domain.displacement(positions[static_cast<std::size_t>(t)],
                                               positions[static_cast<std::size_t>(s)]);
    input[0] = rel.x;
    input[1] = rel.y;
    input[2] = rel.z;
    mlp_forward(params.h_theta2, input, kernel.m.data(), ws);
    out[static_cast<std::size_t>(t)] +=
        apply_kernel(kernel, stacked_pair(forces[static_cast<std::size_t>(t)],
                                   forces[static_cast<std::size_t>(s)]));
  }
  for (std::size_t f = slice.face_begin; f < slice.face_end; ++f) {
    const auto& [t, k, s] = graph.faces[f];
    const Vec3 rel_s = graph.domain.displacement(positions[static_cast<std::size_t>(t)],
                                                 positions[static_cast<std::size_t>(s)]);
    const Vec3 rel_k = graph.domain.displacement(positions[static_cast<std::size_t>(t)],
                                                 positions[static_cast<std::size_t>(k)]);
    input[0] = rel_s.x;
    input[1] = rel_s.y;
    input[2] = rel_s.z;
    input[3] = rel_k.x;
    input[4] = rel_k.y;
    input[5] = rel_k.z;
    mlp_forward(params.g_theta3, input, kernel.m.data(), ws);
    out[static_cast<std::size_t>(t)] +=
        apply_kernel(kernel, stacked_pair(forces[static_cast<std::size_t>(t)],
                                   forces[static_cast<std::size_t>(s)]));
  }
}

PartSlice full_slice(const HiGraph& graph) {
  PartSlice s;
  s.target_begin = 0;
  s.target_end = graph.vertex_count;
  s.edge_begin = 0;
  s.edge_end = graph.edges.size();
  s.face_begin = 0;
  s.face_end = graph.faces.size();
  return s;
}

}  // namespace

std::vector<Vec3> edge_conv(const HiGraph& graph, std::span<const Vec3> positions,
                            std::span<const Vec3> forces, const MlpParams& h_theta2) {
  check_shapes(graph, positions, forces);
  if (h_theta2.input_width() != 3) throw std::invalid_argument("edge_conv: kernel input must be 3");
  std::vector<Vec3> out(positions.size());
  PartSlice s = full_slice(graph);
  s.face_begin = s.face_end = 0;
  SurrogateParams tmp;
  tmp.h_theta2 = h_theta2;  // face list empty; g unused
  accumulate_slice(graph, s, positions, forces, tmp, out);
  return out;
}

std::vector<Vec3> face_conv(const HiGraph& graph, std::span<const Vec3> positions,
                            std::span<const Vec3> forces, const MlpParams& g_theta3) {
  check_shapes(graph, positions, forces);
  if (g_theta3.input_width() != 6) throw std::invalid_argument("face_conv: kernel input must be 6");
  std::vector<Vec3> out(positions.size());
  PartSlice s = full_slice(graph);
  s.edge_begin = s.edge_end = 0;
  SurrogateParams tmp;
  tmp.g_theta3 = g_theta3;
  accumulate_slice(graph, s, positions, forces, tmp, out);
  return out;
}

std::vector<Vec3> hignn_velocities(const HiGraph& graph, std::span<const Vec3> positions,
                                   std::span<const Vec3> forces, const SurrogateParams& params) {
  check_shapes(graph, positions, forces);
  std::vector<Vec3> out(positions.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {params.alpha1_diag.x * forces[i].x, params.alpha1_diag.y * forces[i].y,
              params.alpha1_diag.z * forces[i].z};
  accumulate_slice(graph, full_slice(graph), positions, forces, params, out);
  return out;
}

std::vector<Vec3> parallel_infer(const GraphPartition& partition, std::span<const Vec3> positions,
                                 std::span<const Vec3> forces, const SurrogateParams& params,
                                 int n_workers) {
  if (partition.graph == nullptr) throw std::invalid_argument("parallel_infer: empty partition");
  const HiGraph& graph = *partition.graph;
  check_shapes(graph, positions, forces);
  if (n_workers < 1) throw std::domain_error("parallel_infer: need at least one worker");

  std::vector<Vec3> out(positions.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {params.alpha1_diag.x * forces[i].x, params.alpha1_diag.y * forces[i].y,
              params.alpha1_diag.z * forces[i].z};

  const std::size_t n_parts = partition.parts.size();
  if (n_workers == 1 || n_parts <= 1) {
    for (const PartSlice& s : partition.parts)
      accumulate_slice(graph, s, positions, forces, params, out);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
  std::vector<std::thread> pool;
  const int spawn = std::min<int>(n_workers, static_cast<int>(n_parts));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (true) {
          const std::size_t p = next.fetch_add(1);
          if (p >= n_parts) break;
          accumulate_slice(graph, partition.parts[p], positions, forces, params, out);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) {
      try {
        std::rethrow_exception(e);
      } catch (const std::exception& ex) {
        throw std::runtime_error(std::string("parallel_infer worker failed: ") + ex.what());
      }
    }
  return out;
}

namespace {

void emit_mlp(std::ostringstream& os, const MlpParams& p, const char* name) {
  os << "  \"" << name << "\": {\n    \"layers\": [\n";
  for (std::size_t li = 0; li < p.layers.size(); ++li) {
    const MlpLayer& l = p.layers[li];
    os << "      {\"in\": " << l.in << ", \"out\": " << l.out << ",\n       \"w\": [";
    for (std::size_t i = 0; i < l.w.size(); ++i) {
      if (i) os << ',';
      os << format_g17(l.w[i]);
    }
    os << "],\n       \"b\": [";
    for (std::size_t i = 0; i < l.b.size(); ++i) {
      if (i) os << ',';
      os << format_g17(l.b[i]);
    }
    os << "]}";
    if (li + 1 < p.layers.size()) os << ',';
    os << "\n";
  }
  os << "    ]\n  }";
}

MlpParams parse_mlp(const nlohmann::json& j) {
  MlpParams p;
  for (const auto& jl : j.at("layers")) {
    MlpLayer l;
    l.in = jl.at("in").get<int>();
    l.out = jl.at("out").get<int>();
    l.w = jl.at("w").get<std::vector<double>>();
    l.b = jl.at("b").get<std::vector<double>>();
    p.layers.push_back(std::move(l));
  }
  p.validate();
  return p;
}

}  // namespace

void save_model(const std::string& path, const SurrogateParams& params) {
  params.validate();
  std::ostringstream os;
  os << "{\n";
  os << "  \"format_version\": 1,\n";
  os << "  \"activation\": \"tanh\",\n";
  os << "  \"alpha1_diag\": [" << format_g17(params.alpha1_diag.x) << ','
     << format_g17(params.alpha1_diag.y) << ',' << format_g17(params.alpha1_diag.z) << "],\n";
  os << "  \"face_r_cut\": " << format_g17(params.face_r_cut) << ",\n";
  emit_mlp(os, params.h_theta2, "h_theta2");
  os << ",\n";
  emit_mlp(os, params.g_theta3, "g_theta3");
  os << "\n}\n";
  write_text_file(path, os.str());
}

SurrogateParams load_model(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("model file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.contains("format_version") || j.at("format_version").get<int>() != 1)
    throw std::runtime_error("model file " + path + ": unsupported format version");
  if (j.at("activation").get<std::string>() != "tanh")
    throw std::runtime_error("model file " + path + ": unsupported activation");
  SurrogateParams p;
  const auto a = j.at("alpha1_diag").get<std::vector<double>>();
  if (a.size() != 3) throw std::runtime_error("model file " + path + ": alpha1 diagonal must have 3 entries");
  p.alpha1_diag = {a[0], a[1], a[2]};
  p.face_r_cut = j.at("face_r_cut").get<double>();
  p.h_theta2 = parse_mlp(j.at("h_theta2"));
  p.g_theta3 = parse_mlp(j.at("g_theta3"));
  p.validate();
  return p;
}

std::uint64_t model_content_hash(const SurrogateParams& params) {
  std::ostringstream os;
  os << format_g17(params.alpha1_diag.x) << format_g17(params.alpha1_diag.y)
     << format_g17(params.alpha1_diag.z) << format_g17(params.face_r_cut);
  for (const MlpParams* mp : {&params.h_theta2, &params.g_theta3})
    for (const MlpLayer& l : mp->layers) {
      for (double v : l.w) os << format_g17(v);
      for (double v : l.b) os << format_g17(v);
    }
  return fnv1a_hash(os.str());
}

}  // namespace hignn
