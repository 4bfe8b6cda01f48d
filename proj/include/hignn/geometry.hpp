#pragma once

#include <array>
#include <cmath>

namespace hignn {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double c) { x *= c; y *= c; z *= c; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double c, Vec3 v) { return v *= c; }
inline Vec3 operator*(Vec3 v, double c) { return v *= c; }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }

/// Dense 3x3 block, row-major.
struct Mat3 {
  std::array<double, 9> m{};

  double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

  Mat3& operator+=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) m[static_cast<std::size_t>(i)] += o.m[static_cast<std::size_t>(i)];
    return *this;
  }
};

inline Mat3 scaled_identity(double c) {
  Mat3 r;
  r(0, 0) = c;
  r(1, 1) = c;
  r(2, 2) = c;
  return r;
}

/// c1*I + c2*(u u^T) for a unit vector u.
inline Mat3 isotropic_dyadic(double c1, double c2, const Vec3& u) {
  Mat3 r;
  const double ux[3] = {u.x, u.y, u.z};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r(a, b) = c2 * ux[a] * ux[b];
  r(0, 0) += c1;
  r(1, 1) += c1;
  r(2, 2) += c1;
  return r;
}

inline Vec3 apply(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
          m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
          m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

/// 3x6 block, row-major. This is the shape of the learned pair/triplet
/// kernels: the left 3x3 half acts on the target's force, the right half
/// on the source's force.
struct Mat36 {
  std::array<double, 18> m{};

  double& operator()(int r, int c) { return m[static_cast<std::size_t>(6 * r + c)]; }
  double operator()(int r, int c) const { return m[static_cast<std::size_t>(6 * r + c)]; }
};

// Defined out of line so every caller shares one compiled instance; the
// aggregation contracts (brute-force equality, parallel == serial) rely on
// bit-identical products.
Vec3 apply_kernel(const Mat36& m, const std::array<double, 6>& f);

inline std::array<double, 6> stacked_pair(const Vec3& f_target, const Vec3& f_source) {
  return {f_target.x, f_target.y, f_target.z, f_source.x, f_source.y, f_source.z};
}

}  // namespace hignn
