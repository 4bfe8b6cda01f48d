#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hignn/graph.hpp"
#include "hignn/mlp.hpp"

namespace hignn {

/// The learned velocity model: pair kernel h, triplet kernel g, the analytic
/// single-body mobility diagonal, and the face cutoff the model was meant to
/// be evaluated with.
struct SurrogateParams {
  MlpParams h_theta2;  // pair kernel, input X_j - X_i
  MlpParams g_theta3;  // triplet kernel, input [X_j - X_i ; X_k - X_i]
  Vec3 alpha1_diag{};
  double face_r_cut = 5.0;

  void validate() const;
};

/// Per-vertex sums of h(X_j - X_i) . [F_i; F_j] over all edges (i, j),
/// accumulated in the graph's sorted edge order.
std::vector<Vec3> edge_conv(const HiGraph& graph, std::span<const Vec3> positions,
                            std::span<const Vec3> forces, const MlpParams& h_theta2);

/// Per-vertex sums of g([X_j - X_i ; X_k - X_i]) . [F_i; F_j] over all faces
/// (i, k, j), accumulated in the graph's sorted face order.
std::vector<Vec3> face_conv(const HiGraph& graph, std::span<const Vec3> positions,
                            std::span<const Vec3> forces, const MlpParams& g_theta3);

/// U_i = alpha1 F_i + edge_conv_i + face_conv_i.
std::vector<Vec3> hignn_velocities(const HiGraph& graph, std::span<const Vec3> positions,
                                   std::span<const Vec3> forces, const SurrogateParams& params);

/// Partitioned evaluation: each target's sums are produced inside exactly one
/// worker, in the same order as the serial pass, so the result is bitwise
/// identical to hignn_velocities. Workers share one read-only view of the
/// positions; a failure in any worker is rethrown as a single error.
std::vector<Vec3> parallel_infer(const GraphPartition& partition, std::span<const Vec3> positions,
                                 std::span<const Vec3> forces, const SurrogateParams& params,
                                 int n_workers);

/// JSON model container (format_version, activation, alpha1 diagonal,
/// face_r_cut, layer shapes and row-major weights at 17 significant digits).
void save_model(const std::string& path, const SurrogateParams& params);
SurrogateParams load_model(const std::string& path);

std::uint64_t model_content_hash(const SurrogateParams& params);

}  // namespace hignn
