#pragma once

// Additive variations gamma + s V of sampled paths, the first variation of
// the path energy, and the variational test for the equation of motion.

#include "contmech/connection.hpp"
#include "contmech/dynamics.hpp"
#include "contmech/errors.hpp"
#include "contmech/path.hpp"

#include <cstdint>
#include <random>

namespace contmech {

/// A variation whose perturbed path stops being an embedding at some s.
class InvalidVariation : public ConstructionError {
public:
  InvalidVariation(double s, const std::string& what)
      : ConstructionError("delta", what), s_(s) {}
  double s() const noexcept { return s_; }

private:
  double s_;
};

class Variation {
public:
  /// Sweeps s in {0, +-delta/2, +-delta}; throws InvalidVariation at the first
  /// failing s.
  Variation(PathOnQ base, AlongPath field, double delta);

  const PathOnQ& base() const noexcept { return base_; }
  const AlongPath& field() const noexcept { return field_; }
  double delta() const noexcept { return delta_; }
  /// V vanishes exactly at both end knots.
  bool proper() const noexcept { return proper_; }

  /// gamma + s V.
  PathOnQ at(double s) const;

private:
  PathOnQ base_;
  AlongPath field_;
  double delta_;
  bool proper_;
};

Variation make_variation(const PathOnQ& base, const AlongPath& field, double delta);

/// d(gamma + s V)/ds, which is V for the additive rule.
const AlongPath& variational_field(const Variation& var);

/// [E(gamma + s_h V) - E(gamma - s_h V)] / (2 s_h), 0 < s_h <= delta/2.
double dE_ds_fd(const Variation& var, double s_h);

struct FirstVariationTerms {
  double bulk;     ///< -int g(V, acc) dt
  double jumps;    ///< -sum_i g(V(t_i), gamma_t(t_i+) - gamma_t(t_i-))
  double boundary; ///< -g(V(a), gamma_t(a)) + g(V(b), gamma_t(b))

  double total() const noexcept { return bulk + jumps + boundary; }
};

/// Bulk, jump and boundary terms of the first variation formula; the jump sum
/// runs over interior breakpoints of the path.
FirstVariationTerms first_variation_terms(const PathOnQ& path, const AlongPath& field);
/// Same, reusing precomputed kinematics(path) across many fields.
FirstVariationTerms first_variation_terms(const PathOnQ& path,
                                          const PathKinematics& kin,
                                          const AlongPath& field);
double first_variation_rhs(const PathOnQ& path, const AlongPath& field);

/// sqrt(int_a^b g(V, V) dt), time trapezoid per segment.
double path_norm(const PathOnQ& path, const AlongPath& field);

/// Smooth compact-in-space field built from a few sine modes with random
/// amplitudes that drift in time. Proper fields carry the window
/// 4 tau (1 - tau), tau = (t - a)/(b - a), so they vanish at both ends.
AlongPath random_field(const PathOnQ& path, std::mt19937_64& rng, bool proper,
                       std::size_t band_width = 1);

inline constexpr double kDefaultResidualStep = 1e-5;

/// max over `trials` seeded proper fields V, scaled to unit path_norm, of
/// |dE_ds_fd + int g(V, c X) dt|.
double motion_residual(const PathOnQ& path, const ForceModel& force, int trials,
                       std::uint64_t seed, double s_h = kDefaultResidualStep);

} // namespace contmech
