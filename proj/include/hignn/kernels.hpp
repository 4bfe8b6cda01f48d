#pragma once

#include "hignn/domain.hpp"
#include "hignn/geometry.hpp"

namespace hignn {

/// Scale factor of the single-sphere periodic self-mobility, alpha1 =
/// scale/(6 pi mu) I. The default matches a unit-radius sphere in a box of
/// edge 32; other box sizes need their own constant.
inline constexpr double kPeriodicSelfMobilityScale = 0.982;

/// Single-sphere translational mobility block c*I.
/// Unbounded: c = 1/(6 pi mu a). Periodic: c = scale/(6 pi mu).
Mat3 stokes_drag(double viscosity, double radius, const Domain& domain,
                 double periodic_scale = kPeriodicSelfMobilityScale);

/// Rotne-Prager-Yamakawa cross-mobility block for two equal spheres with
/// center offset r. The overlap branch (|r| < 2a) is the standard
/// regularization; both branches agree at |r| = 2a and the kernel reduces to
/// the self-mobility at r = 0.
Mat3 rpy_pair_mobility(const Vec3& r, double viscosity, double radius);

/// Velocity induced at a probe point by the stresslet that the point-force
/// flow of `force` (acting at a source sphere) induces on an intermediate
/// sphere. p = X_intermediate - X_source, q = X_probe - X_intermediate.
/// This is the leading three-body reflection, O(|p|^-2 |q|^-2); Faxen
/// curvature corrections are dropped.
Vec3 stresslet_reflection_velocity(const Vec3& p, const Vec3& q, const Vec3& force,
                                   double viscosity, double radius);

}  // namespace hignn
