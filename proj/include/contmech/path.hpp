#pragma once

// Time-sampled, piecewise-smooth curves in the space of embeddings and
// fields carried along them.

#include "contmech/grid.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace contmech {

/// One smooth piece of a path: uniform knots on [t_start, t_end].
struct PathSegment {
  double t_start;
  double t_end;
  std::vector<Configuration> samples;

  std::size_t knots() const noexcept { return samples.size(); }
  double dt() const noexcept {
    return (t_end - t_start) / static_cast<double>(samples.size() - 1);
  }
  /// Exact at both ends; t_start + j*dt inside.
  double time(std::size_t j) const noexcept {
    return j + 1 == samples.size() ? t_end
                                   : t_start + static_cast<double>(j) * dt();
  }
};

/// Values of a field at every knot, organised like the path's segments. At a
/// shared knot both adjacent segments hold an entry.
struct AlongPath {
  std::vector<std::vector<Section>> segments;
};

class PathOnQ {
public:
  /// Segments must abut exactly (t_end == next t_start, equal samples there),
  /// carry at least three knots, and share one grid.
  explicit PathOnQ(std::vector<PathSegment> segments,
                   SupportMode mode = SupportMode::free,
                   std::size_t band_width = 1);

  const std::vector<PathSegment>& segments() const noexcept { return segments_; }
  SupportMode mode() const noexcept { return mode_; }
  std::size_t band_width() const noexcept { return band_; }
  const BodyGrid& grid() const noexcept { return segments_.front().samples.front().grid(); }
  double start() const noexcept { return segments_.front().t_start; }
  double end() const noexcept { return segments_.back().t_end; }
  /// Segment boundaries a = t_0 < t_1 < ... < t_k = b.
  std::vector<double> breakpoints() const;

  /// Section with this path's support convention.
  Section section(ScalarField values) const;

private:
  std::vector<PathSegment> segments_;
  SupportMode mode_;
  std::size_t band_;
};

/// Sample f(t, x) on `knots_per_segment` uniform knots per piece between
/// consecutive breakpoints.
PathOnQ sample_path(const BodyGrid& grid, const std::vector<double>& breakpoints,
                    std::size_t knots_per_segment,
                    const std::function<double(double, double)>& f,
                    SupportMode mode = SupportMode::free,
                    std::size_t band_width = 1,
                    double eps = kDefaultEmbeddingThreshold);

/// Same layout as `path`, values from f(t, x).
AlongPath sample_along(const PathOnQ& path,
                       const std::function<double(double, double)>& f,
                       SupportMode mode = SupportMode::free,
                       std::size_t band_width = 1);

/// Throws ConstructionError unless `field` has the segment/knot layout of
/// `path` on the same grid.
void require_shape(const PathOnQ& path, const AlongPath& field);

/// Time derivative of per-knot samples with spacing dt: central differences
/// inside, second-order one-sided at both ends.
std::vector<ScalarField> time_derivative(const std::vector<const ScalarField*>& samples,
                                         double dt);

/// dgamma/dt at every knot, one-sided at segment ends.
AlongPath velocities(const PathOnQ& path);

/// Right and left derivatives at a knot; the side that does not exist (before
/// a, after b) is empty. Both coincide away from breakpoints.
struct KnotVelocity {
  std::optional<Section> left;
  std::optional<Section> right;
};

/// Throws std::out_of_range when t is not a knot of the path.
KnotVelocity velocity(const PathOnQ& path, double t);

} // namespace contmech
