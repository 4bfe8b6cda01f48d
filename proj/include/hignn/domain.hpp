#pragma once

#include <cmath>
#include <stdexcept>

#include "hignn/geometry.hpp"

namespace hignn {

/// Simulation domain: unbounded space or a cubic periodic box with the
/// minimum-image metric.
struct Domain {
  enum class Kind { unbounded, periodic };

  Kind kind = Kind::unbounded;
  double edge = 0.0;

  static Domain unbounded() { return {}; }

  static Domain periodic(double edge_length) {
    if (!(edge_length > 0.0)) throw std::domain_error("periodic box edge must be positive");
    return {Kind::periodic, edge_length};
  }

  bool is_periodic() const { return kind == Kind::periodic; }

  /// Displacement to - from, folded to the nearest periodic image.
  Vec3 displacement(const Vec3& from, const Vec3& to) const {
    Vec3 d = to - from;
    if (kind == Kind::periodic) {
      d.x -= edge * std::round(d.x / edge);
      d.y -= edge * std::round(d.y / edge);
      d.z -= edge * std::round(d.z / edge);
    }
    return d;
  }

  double distance(const Vec3& a, const Vec3& b) const { return norm(displacement(a, b)); }

  /// Fold a position into [0, edge) per component; identity when unbounded.
  Vec3 wrap(const Vec3& p) const {
    if (kind != Kind::periodic) return p;
    Vec3 w = p;
    w.x -= edge * std::floor(w.x / edge);
    w.y -= edge * std::floor(w.y / edge);
    w.z -= edge * std::floor(w.z / edge);
    // floor rounding can leave a coordinate exactly at `edge`
    if (w.x >= edge) w.x -= edge;
    if (w.y >= edge) w.y -= edge;
    if (w.z >= edge) w.z -= edge;
    return w;
  }

  bool operator==(const Domain& o) const {
    return kind == o.kind && (kind == Kind::unbounded || edge == o.edge);
  }
};

}  // namespace hignn
