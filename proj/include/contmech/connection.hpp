#pragma once

// Levi-Civita data of the weak metric for a one-dimensional body in the
// line. The Christoffel symbol is
//
//   Gamma(phi; h, k) = -(h k_x + k h_x) / phi_x,
//
// and the covariant derivative of V along a curve gamma is
//
//   V' = dV/dt - Gamma(gamma; V, gamma_t).

#include "contmech/grid.hpp"
#include "contmech/path.hpp"

namespace contmech {

/// Symmetric in (h, k) bit for bit.
ScalarField christoffel(const Configuration& phi, const Section& h,
                        const Section& k);

/// Per-knot covariant derivative; the result keeps V's support convention.
AlongPath covariant_derivative_along(const PathOnQ& path, const AlongPath& field);

/// covariant_derivative_along(path, velocities(path)).
AlongPath acceleration(const PathOnQ& path);

/// Velocity and acceleration at every knot, computed once.
struct PathKinematics {
  AlongPath velocity;
  AlongPath acceleration;
};

PathKinematics kinematics(const PathOnQ& path);

struct GeodesicResidual {
  double metric_norm; ///< max over interior knots of sqrt(g(acc, acc))
  double sup_norm;    ///< max over the same knots of max|acc|
  double at_time;     ///< knot where metric_norm is attained
};

/// Interior knots are those whose time stencils touch no one-sided velocity,
/// i.e. at least two knots away from either end of their segment. Segments
/// with fewer than five knots contribute every knot.
GeodesicResidual geodesic_residual(const PathOnQ& path);

/// Solve dV/dt = Gamma(gamma; V, gamma_t) with classical RK4 from knot to
/// knot, starting from v0 at the path's first knot. Stage values between knots
/// come from cubic Hermite interpolation of gamma. Throws SingularStateError
/// if an interpolated stage configuration stops being an embedding.
AlongPath parallel_transport(const PathOnQ& path, const Section& v0);

} // namespace contmech
