#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hignn/domain.hpp"
#include "hignn/geometry.hpp"

namespace hignn {

/// Hypergraph over a particle configuration. Edges cover every ordered pair
/// (all-to-all, the slow-decaying pair term has no cutoff); faces
/// (target, passing, source) exist only when target and source both lie
/// within r_cut of the passing vertex. Both lists are sorted so aggregation
/// order, and hence floating-point sums, are reproducible.
struct HiGraph {
  int vertex_count = 0;
  double r_cut = 0.0;
  Domain domain;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;   // (target, source)
  std::vector<std::array<std::int32_t, 3>> faces;             // (target, passing, source)
};

/// Sorted neighbor lists with the inclusive convention dist <= r_cut.
/// Periodic domains use the minimum-image metric and require r_cut <= edge/2.
std::vector<std::vector<std::int32_t>> neighbor_search(std::span<const Vec3> positions,
                                                       double r_cut, const Domain& domain);

HiGraph build_graph(std::span<const Vec3> positions, const Domain& domain, double r_cut);

/// Contiguous target range of one part plus the matching slices of the
/// (target-sorted) edge and face lists.
struct PartSlice {
  std::int32_t target_begin = 0;
  std::int32_t target_end = 0;
  std::size_t edge_begin = 0, edge_end = 0;
  std::size_t face_begin = 0, face_end = 0;
};

struct GraphPartition {
  const HiGraph* graph = nullptr;
  std::vector<PartSlice> parts;
};

/// Targets are split into contiguous, near-equal ranges (sizes differ by at
/// most one); each part owns exactly the edges/faces targeting its range.
GraphPartition partition_graph(const HiGraph& graph, int n_parts);

/// [begin, end) of targets owned by `part`, without building any graph.
std::pair<int, int> partition_target_range(int vertex_count, int n_parts, int part);

}  // namespace hignn
