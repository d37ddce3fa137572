#pragma once

// The L2-type weak metric on configurations,
//
//   g(phi)(s1, s2) = int_B s1(x) s2(x) |phi_x(x)| dx,
//
// with the kinetic and path energies it induces and the pointwise
// flat/sharp identification between sections and covector densities.

#include "contmech/grid.hpp"
#include "contmech/path.hpp"

namespace contmech {

/// A covector given by a density: <lambda, s> = int_B lambda(x) s(x) dx.
struct CovectorDensity {
  ScalarField density;

  double pair(const Section& s) const;
};

/// |phi_x|, strictly positive for an embedding.
ScalarField volume_density(const Configuration& phi);

double metric(const Configuration& phi, const Section& s1, const Section& s2);

/// Half the squared metric norm of v.
double kinetic(const Configuration& phi, const Section& v);

/// Time trapezoid of kinetic(gamma, gamma_t) over every segment, with the
/// one-sided velocities at segment ends.
double path_energy(const PathOnQ& path);

/// Density s |phi_x|, so that flat(phi, s1).pair(s2) == metric(phi, s1, s2).
CovectorDensity flat(const Configuration& phi, const Section& s);

/// Inverse of flat: lambda / |phi_x|. Compact mode pins the band.
Section sharp(const Configuration& phi, const CovectorDensity& lambda,
              SupportMode mode = SupportMode::free, std::size_t band_width = 1);

/// Lambda(s) = int_B sigma s |phi_x| dx for a pointwise force density sigma.
double force_pairing(const ScalarField& sigma, const Configuration& phi,
                     const Section& s);

} // namespace contmech
