#include "hignn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hignn {

namespace {

bool within_cutoff(const Domain& domain, const Vec3& a, const Vec3& b, double r_cut) {
  return norm_sq(domain.displacement(a, b)) <= r_cut * r_cut;
}

std::vector<std::vector<std::int32_t>> brute_force_neighbors(std::span<const Vec3> positions,
                                                             double r_cut, const Domain& domain) {
  const int n = static_cast<int>(positions.size());
  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (within_cutoff(domain, positions[static_cast<std::size_t>(i)],
                        positions[static_cast<std::size_t>(j)], r_cut))
        lists[static_cast<std::size_t>(i)].push_back(j);
    }
  return lists;
}

struct CellGrid {
  Vec3 origin;
  double cell = 0.0;
  int nx = 0, ny = 0, nz = 0;
  std::vector<std::vector<std::int32_t>> buckets;

  int clampi(int v, int n) const { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

  int index_of(const Vec3& p) const {
    const int cx = clampi(static_cast<int>(std::floor((p.x - origin.x) / cell)), nx);
    const int cy = clampi(static_cast<int>(std::floor((p.y - origin.y) / cell)), ny);
    const int cz = clampi(static_cast<int>(std::floor((p.z - origin.z) / cell)), nz);
    return (cx * ny + cy) * nz + cz;
  }
};

std::vector<std::vector<std::int32_t>> cell_list_neighbors(std::span<const Vec3> positions,
                                                           double r_cut, const Domain& domain) {
  const int n = static_cast<int>(positions.size());
  const bool periodic = domain.is_periodic();

  CellGrid grid;
  grid.cell = r_cut;
  std::vector<Vec3> binned(positions.begin(), positions.end());
  if (periodic) {
    const int cells = static_cast<int>(std::floor(domain.edge / r_cut));
    if (cells < 3) return brute_force_neighbors(positions, r_cut, domain);
    grid.nx = grid.ny = grid.nz = cells;
    grid.cell = domain.edge / cells;
    grid.origin = {0.0, 0.0, 0.0};
    for (Vec3& p : binned) p = domain.wrap(p);
  } else {
    Vec3 lo = binned.empty() ? Vec3{} : binned.front();
    Vec3 hi = lo;
    for (const Vec3& p : binned) {
      lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
      hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    grid.origin = lo;
    grid.nx = static_cast<int>(std::floor((hi.x - lo.x) / r_cut)) + 1;
    grid.ny = static_cast<int>(std::floor((hi.y - lo.y) / r_cut)) + 1;
    grid.nz = static_cast<int>(std::floor((hi.z - lo.z) / r_cut)) + 1;
    const long long total = 1LL * grid.nx * grid.ny * grid.nz;
    if (total > 4'000'000LL || total <= 0) return brute_force_neighbors(positions, r_cut, domain);
  }

  grid.buckets.assign(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny) *
                          static_cast<std::size_t>(grid.nz),
                      {});
  for (int i = 0; i < n; ++i)
    grid.buckets[static_cast<std::size_t>(grid.index_of(binned[static_cast<std::size_t>(i)]))]
        .push_back(i);

  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec3& pi = binned[static_cast<std::size_t>(i)];
    const int cx = grid.clampi(static_cast<int>(std::floor((pi.x - grid.origin.x) / grid.cell)), grid.nx);
    const int cy = grid.clampi(static_cast<int>(std::floor((pi.y - grid.origin.y) / grid.cell)), grid.ny);
    const int cz = grid.clampi(static_cast<int>(std::floor((pi.z - grid.origin.z) / grid.cell)), grid.nz);
    auto& out = lists[static_cast<std::size_t>(i)];
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          int gx = cx + dx, gy = cy + dy, gz = cz + dz;
          if (periodic) {
            gx = (gx + grid.nx) % grid.nx;
            gy = (gy + grid.ny) % grid.ny;
            gz = (gz + grid.nz) % grid.nz;
          } else if (gx < 0 || gx >= grid.nx || gy < 0 || gy >= grid.ny || gz < 0 || gz >= grid.nz) {
            continue;
          }
          for (std::int32_t j : grid.buckets[static_cast<std::size_t>((gx * grid.ny + gy) * grid.nz + gz)]) {
            if (j == i) continue;
            // same predicate as the brute-force scan (raw positions, not the
            // wrapped copies) so both paths agree bit for bit
            if (within_cutoff(domain, positions[static_cast<std::size_t>(i)],
                              positions[static_cast<std::size_t>(j)], r_cut))
              out.push_back(j);
          }
        }
    std::sort(out.begin(), out.end());
  }
  return lists;
}

}  // namespace

std::vector<std::vector<std::int32_t>> neighbor_search(std::span<const Vec3> positions,
                                                       double r_cut, const Domain& domain) {
  if (!(r_cut > 0.0)) throw std::domain_error("neighbor_search: r_cut must be positive");
  if (domain.is_periodic() && r_cut > domain.edge / 2.0)
    throw std::invalid_argument(
        "neighbor_search: r_cut exceeds half the box edge, periodic images are ambiguous");
  if (positions.size() < 100) return brute_force_neighbors(positions, r_cut, domain);
  return cell_list_neighbors(positions, r_cut, domain);
}

HiGraph build_graph(std::span<const Vec3> positions, const Domain& domain, double r_cut) {
  if (r_cut < 0.0) throw std::domain_error("build_graph: r_cut must be non-negative");
  const int n = static_cast<int>(positions.size());
  HiGraph g;
  g.vertex_count = n;
  g.r_cut = r_cut;
  g.domain = domain;

  g.edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (std::int32_t t = 0; t < n; ++t)
    for (std::int32_t s = 0; s < n; ++s)
      if (s != t) g.edges.emplace_back(t, s);

  if (r_cut > 0.0 && n >= 2) {
    const auto neighbors = neighbor_search(positions, r_cut, domain);
    std::size_t count = 0;
    for (int k = 0; k < n; ++k) {
      const std::size_t deg = neighbors[static_cast<std::size_t>(k)].size();
      count += deg * (deg > 0 ? deg - 1 : 0);
    }
    g.faces.reserve(count);
    // lexicographic by construction: targets ascending, then passing, then source
    for (std::int32_t i = 0; i < n; ++i)
      for (std::int32_t k : neighbors[static_cast<std::size_t>(i)])
        for (std::int32_t j : neighbors[static_cast<std::size_t>(k)])
          if (j != i) g.faces.push_back({i, k, j});
  }
  return g;
}

std::pair<int, int> partition_target_range(int vertex_count, int n_parts, int part) {
  if (n_parts < 1 || n_parts > vertex_count)
    throw std::domain_error("partition: n_parts must lie in [1, vertex_count]");
  if (part < 0 || part >= n_parts) throw std::domain_error("partition: part index out of range");
  const int base = vertex_count / n_parts;
  const int rem = vertex_count % n_parts;
  const int begin = part * base + std::min(part, rem);
  const int end = begin + base + (part < rem ? 1 : 0);
  return {begin, end};
}

GraphPartition partition_graph(const HiGraph& graph, int n_parts) {
  if (n_parts < 1 || n_parts > graph.vertex_count)
    throw std::domain_error("partition: n_parts must lie in [1, vertex_count]");
  GraphPartition p;
  p.graph = &graph;
  p.parts.resize(static_cast<std::size_t>(n_parts));
  for (int i = 0; i < n_parts; ++i) {
    const auto [tb, te] = partition_target_range(graph.vertex_count, n_parts, i);
    PartSlice& s = p.parts[static_cast<std::size_t>(i)];
    s.target_begin = tb;
    s.target_end = te;
    const auto edge_lower = [](const std::pair<std::int32_t, std::int32_t>& e, std::int32_t t) {
      return e.first < t;
    };
    s.edge_begin = static_cast<std::size_t>(
        std::lower_bound(graph.edges.begin(), graph.edges.end(), tb, edge_lower) -
        graph.edges.begin());
    s.edge_end = static_cast<std::size_t>(
        std::lower_bound(graph.edges.begin(), graph.edges.end(), te, edge_lower) -
        graph.edges.begin());
    const auto face_lower = [](const std::array<std::int32_t, 3>& f, std::int32_t t) {
      return f[0] < t;
    };
    s.face_begin = static_cast<std::size_t>(
        std::lower_bound(graph.faces.begin(), graph.faces.end(), tb, face_lower) -
        graph.faces.begin());
    s.face_end = static_cast<std::size_t>(
        std::lower_bound(graph.faces.begin(), graph.faces.end(), te, face_lower) -
        graph.faces.begin());
  }
  return p;
}

}  // namespace hignn
