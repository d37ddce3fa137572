#include "contmech/path.hpp"

#include "contmech/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace contmech {

PathOnQ::PathOnQ(std::vector<PathSegment> segments, SupportMode mode,
                 std::size_t band_width)
    : segments_(std::move(segments)), mode_(mode), band_(band_width) {
  if (segments_.empty()) throw ConstructionError("segments", "path is empty");
  if (segments_.front().samples.empty())
    throw ConstructionError("segments[0]", "needs at least 3 knots");
  const BodyGrid g = segments_.front().samples.front().grid();
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const auto& seg = segments_[s];
    const std::string name = "segments[" + std::to_string(s) + "]";
    if (seg.samples.size() < 3)
      throw ConstructionError(name, "needs at least 3 knots");
    if (!std::isfinite(seg.t_start) || !std::isfinite(seg.t_end) ||
        !(seg.t_end > seg.t_start))
      throw ConstructionError(name, "time range must be finite and increasing");
    for (const auto& c : seg.samples) {
      require_same_grid(g, c.grid());
      if (c.orientation() != segments_.front().samples.front().orientation())
        throw ConstructionError(name, "samples change orientation along the path");
    }
    if (s > 0) {
      const auto& prev = segments_[s - 1];
      if (prev.t_end != seg.t_start)
        throw ConstructionError(name, "does not abut the previous segment");
      if (!(prev.samples.back().field() == seg.samples.front().field()))
        throw ConstructionError(name, "path is discontinuous at a breakpoint");
    }
  }
}

std::vector<double> PathOnQ::breakpoints() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.t_start);
  out.push_back(segments_.back().t_end);
  return out;
}

Section PathOnQ::section(ScalarField values) const {
  if (mode_ == SupportMode::compact) return Section::pinned(std::move(values), band_);
  return Section(std::move(values), mode_, band_);
}

PathOnQ sample_path(const BodyGrid& grid, const std::vector<double>& breakpoints,
                    std::size_t knots_per_segment,
                    const std::function<double(double, double)>& f,
                    SupportMode mode, std::size_t band_width, double eps) {
  if (breakpoints.size() < 2)
    throw ConstructionError("breakpoints", "need at least two");
  std::vector<PathSegment> segs;
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    PathSegment seg{breakpoints[s], breakpoints[s + 1], {}};
    seg.samples.reserve(knots_per_segment);
    for (std::size_t j = 0; j < knots_per_segment; ++j) {
      if (j == 0 && s > 0) {
        seg.samples.push_back(segs.back().samples.back());
        continue;
      }
      // time() needs the final sample count to be known
      const double t =
          j + 1 == knots_per_segment
              ? seg.t_end
              : seg.t_start + static_cast<double>(j) * (seg.t_end - seg.t_start) /
                                  static_cast<double>(knots_per_segment - 1);
      seg.samples.emplace_back(
          ScalarField::sample(grid, [&](double x) { return f(t, x); }), eps);
    }
    segs.push_back(std::move(seg));
  }
  return PathOnQ(std::move(segs), mode, band_width);
}

AlongPath sample_along(const PathOnQ& path,
                       const std::function<double(double, double)>& f,
                       SupportMode mode, std::size_t band_width) {
  AlongPath out;
  for (const auto& seg : path.segments()) {
    std::vector<Section> row;
    row.reserve(seg.knots());
    for (std::size_t j = 0; j < seg.knots(); ++j) {
      const double t = seg.time(j);
      auto field = ScalarField::sample(path.grid(), [&](double x) { return f(t, x); });
      if (mode == SupportMode::compact)
        row.push_back(Section::pinned(std::move(field), band_width));
      else
        row.emplace_back(std::move(field), mode, band_width);
    }
    out.segments.push_back(std::move(row));
  }
  return out;
}

void require_shape(const PathOnQ& path, const AlongPath& field) {
  const auto& segs = path.segments();
  if (field.segments.size() != segs.size())
    throw ConstructionError("field", "segment count does not match the path");
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (field.segments[s].size() != segs[s].knots())
      throw ConstructionError("field", "knot count does not match segment " +
                                           std::to_string(s));
    for (const auto& v : field.segments[s]) require_same_grid(path.grid(), v.grid());
  }
}

std::vector<ScalarField> time_derivative(const std::vector<const ScalarField*>& samples,
                                         double dt) {
  const std::size_t m = samples.size();
  if (m < 3) throw ConstructionError("samples", "need at least 3 knots");
  const BodyGrid& g = samples.front()->grid();
  const std::size_t n = g.size();
  const double inv2dt = 1.0 / (2.0 * dt);
  std::vector<ScalarField> out;
  out.reserve(m);
  std::vector<double> d(n);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == 0) {
      const auto a = samples[0]->values(), b = samples[1]->values(), c = samples[2]->values();
      for (std::size_t i = 0; i < n; ++i) d[i] = (-3.0 * a[i] + 4.0 * b[i] - c[i]) * inv2dt;
    } else if (j + 1 == m) {
      const auto a = samples[m - 1]->values(), b = samples[m - 2]->values(),
                 c = samples[m - 3]->values();
      for (std::size_t i = 0; i < n; ++i) d[i] = (3.0 * a[i] - 4.0 * b[i] + c[i]) * inv2dt;
    } else {
      const auto a = samples[j + 1]->values(), b = samples[j - 1]->values();
      for (std::size_t i = 0; i < n; ++i) d[i] = (a[i] - b[i]) * inv2dt;
    }
    out.emplace_back(g, d);
  }
  return out;
}

AlongPath velocities(const PathOnQ& path) {
  AlongPath out;
  for (const auto& seg : path.segments()) {
    std::vector<const ScalarField*> ptrs;
    ptrs.reserve(seg.knots());
    for (const auto& c : seg.samples) ptrs.push_back(&c.field());
    auto d = time_derivative(ptrs, seg.dt());
    std::vector<Section> row;
    row.reserve(d.size());
    for (auto& f : d) row.push_back(path.section(std::move(f)));
    out.segments.push_back(std::move(row));
  }
  return out;
}

KnotVelocity velocity(const PathOnQ& path, double t) {
  const auto& segs = path.segments();
  KnotVelocity out;
  bool found = false;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& seg = segs[s];
    const double tol = 1e-9 * seg.dt();
    if (t < seg.t_start - tol || t > seg.t_end + tol) continue;
    const double r = (t - seg.t_start) / seg.dt();
    const double j = std::round(r);
    if (std::abs(r - j) * seg.dt() > tol) continue;
    const auto idx = static_cast<std::size_t>(j);
    std::vector<const ScalarField*> ptrs;
    const std::size_t m = seg.knots();
    // only the three samples the stencil touches
    std::size_t lo = idx == 0 ? 0 : (idx + 1 == m ? m - 3 : idx - 1);
    for (std::size_t k = lo; k < lo + 3; ++k) ptrs.push_back(&seg.samples[k].field());
    auto d = time_derivative(ptrs, seg.dt());
    const std::size_t local = idx == 0 ? 0 : (idx + 1 == m ? 2 : 1);
    Section v = path.section(std::move(d[local]));
    found = true;
    if (idx == 0) {
      out.right = v;
    } else if (idx + 1 == m) {
      out.left = v;
    } else {
      out.left = v;
      out.right = std::move(v);
    }
  }
  if (!found)
    throw std::out_of_range("t=" + std::to_string(t) + " is not a knot of the path");
  return out;
}

} // namespace contmech
