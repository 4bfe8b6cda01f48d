#include "hignn/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hignn {

namespace {
constexpr double kPi = std::numbers::pi;
}

Mat3 stokes_drag(double viscosity, double radius, const Domain& domain, double periodic_scale) {
  if (!(viscosity > 0.0)) throw std::domain_error("stokes_drag: viscosity must be positive");
  if (!(radius > 0.0)) throw std::domain_error("stokes_drag: radius must be positive");
  if (domain.is_periodic()) return scaled_identity(periodic_scale / (6.0 * kPi * viscosity));
  return scaled_identity(1.0 / (6.0 * kPi * viscosity * radius));
}

Mat3 rpy_pair_mobility(const Vec3& r, double viscosity, double radius) {
  const double a = radius;
  const double mu = viscosity;
  const double d = norm(r);

  if (d == 0.0) return scaled_identity(1.0 / (6.0 * kPi * mu * a));

  const Vec3 rhat = (1.0 / d) * r;
  if (d >= 2.0 * a) {
    const double c = 1.0 / (8.0 * kPi * mu * d);
    const double aa = a * a / (d * d);
    return isotropic_dyadic(c * (1.0 + (2.0 / 3.0) * aa), c * (1.0 - 2.0 * aa), rhat);
  }
  // overlap branch, linear in d, continuous at d = 2a
  const double c0 = 1.0 / (6.0 * kPi * mu * a);
  const double s = d / a;
  return isotropic_dyadic(c0 * (1.0 - 9.0 * s / 32.0), c0 * (3.0 * s / 32.0), rhat);
}

Vec3 stresslet_reflection_velocity(const Vec3& p, const Vec3& q, const Vec3& force,
                                   double viscosity, double radius) {
  // Stokeslet strain at the intermediate sphere:
  //   E = (F.p) / (8 pi mu |p|^3) * (I - 3 phat phat)
  // induced stresslet S = (20/3) pi mu a^3 E, reflected flow at the probe:
  //   u = -(3 / (8 pi mu)) q (q.S.q) / |q|^5
  // which contracts to the closed form below.
  const double a = radius;
  const double mu = viscosity;
  const double p2 = norm_sq(p);
  const double q2 = norm_sq(q);
  const double pn = std::sqrt(p2);
  const double qn = std::sqrt(q2);
  const double fp = dot(force, p);
  const double pq = dot(p, q);
  const double geom = q2 - 3.0 * (pq * pq) / p2;
  const double coef = -5.0 * (a * a * a) / (16.0 * kPi * mu) * fp * geom /
                      (p2 * pn * q2 * q2 * qn);
  return coef * q;
}

}  // namespace hignn
