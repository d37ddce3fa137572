#include "contmech/connection.hpp"

#include "contmech/errors.hpp"
#include "contmech/metric.hpp"

#include <algorithm>
#include <cmath>

namespace contmech {

ScalarField christoffel(const Configuration& phi, const Section& h,
                        const Section& k) {
  require_same_grid(phi.grid(), h.grid());
  require_same_grid(phi.grid(), k.grid());
  const auto hx = diff_x(h.field());
  const auto kx = diff_x(k.field());
  const auto slope = phi.slope().values();
  std::vector<double> out(slope.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = h[i] * kx[i];
    const double b = k[i] * hx[i];
    out[i] = -(a + b) / slope[i];
  }
  return ScalarField(phi.grid(), std::move(out));
}

namespace {

AlongPath covariant_derivative_with(const PathOnQ& path, const AlongPath& field,
                                    const AlongPath& vel) {
  AlongPath out;
  for (std::size_t s = 0; s < path.segments().size(); ++s) {
    const auto& seg = path.segments()[s];
    const auto& row = field.segments[s];
    std::vector<const ScalarField*> ptrs;
    ptrs.reserve(row.size());
    for (const auto& v : row) ptrs.push_back(&v.field());
    const auto dvdt = time_derivative(ptrs, seg.dt());
    std::vector<Section> res;
    res.reserve(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      auto g = christoffel(seg.samples[j], row[j], vel.segments[s][j]);
      res.push_back(row[j].with_values(dvdt[j] - g));
    }
    out.segments.push_back(std::move(res));
  }
  return out;
}

} // namespace

AlongPath covariant_derivative_along(const PathOnQ& path, const AlongPath& field) {
  require_shape(path, field);
  return covariant_derivative_with(path, field, velocities(path));
}

AlongPath acceleration(const PathOnQ& path) { return kinematics(path).acceleration; }

PathKinematics kinematics(const PathOnQ& path) {
  PathKinematics k{velocities(path), {}};
  k.acceleration = covariant_derivative_with(path, k.velocity, k.velocity);
  return k;
}

GeodesicResidual geodesic_residual(const PathOnQ& path) {
  const AlongPath acc = acceleration(path);
  GeodesicResidual r{0.0, 0.0, path.start()};
  for (std::size_t s = 0; s < path.segments().size(); ++s) {
    const auto& seg = path.segments()[s];
    const std::size_t m = seg.knots();
    const std::size_t lo = m >= 5 ? 2 : 0;
    const std::size_t hi = m >= 5 ? m - 2 : m;
    for (std::size_t j = lo; j < hi; ++j) {
      const auto& a = acc.segments[s][j];
      const double norm = std::sqrt(metric(seg.samples[j], a, a));
      if (norm > r.metric_norm) {
        r.metric_norm = norm;
        r.at_time = seg.time(j);
      }
      r.sup_norm = std::max(r.sup_norm, a.field().max_abs());
    }
  }
  return r;
}

namespace {

// Coefficients of dV/dt = a V + b V_x at one instant.
struct TransportCoefficients {
  std::vector<double> a;
  std::vector<double> b;
};

TransportCoefficients coefficients(std::span<const double> phi,
                                   std::span<const double> vel, double h,
                                   double eps, double t) {
  const std::size_t n = phi.size();
  std::vector<double> slope(n), dvel(n);
  diff_x(phi, h, slope);
  diff_x(vel, h, dvel);
  const double orient = slope[n / 2] >= 0.0 ? 1.0 : -1.0;
  TransportCoefficients c{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(orient * slope[i] >= eps)) throw SingularStateError(t, i, std::abs(slope[i]));
    c.a[i] = -dvel[i] / slope[i];
    c.b[i] = -vel[i] / slope[i];
  }
  return c;
}

void transport_rhs(const TransportCoefficients& c, std::span<const double> v,
                   double h, std::span<double> dvx, std::span<double> out) {
  diff_x(v, h, dvx);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c.a[i] * v[i] + c.b[i] * dvx[i];
}

} // namespace

AlongPath parallel_transport(const PathOnQ& path, const Section& v0) {
  require_same_grid(path.grid(), v0.grid());
  const AlongPath vel = velocities(path);
  const BodyGrid& grid = path.grid();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const bool compact = v0.mode() == SupportMode::compact;
  const std::size_t band = v0.band_width();

  std::vector<double> v(v0.values().begin(), v0.values().end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), dvx(n), mid_phi(n),
      mid_vel(n);

  AlongPath out;
  for (std::size_t s = 0; s < path.segments().size(); ++s) {
    const auto& seg = path.segments()[s];
    const double dt = seg.dt();
    std::vector<Section> row;
    row.reserve(seg.knots());
    row.push_back(v0.with_values(ScalarField(grid, v)));
    for (std::size_t j = 0; j + 1 < seg.knots(); ++j) {
      const auto p0 = seg.samples[j].field().values();
      const auto p1 = seg.samples[j + 1].field().values();
      const auto w0 = vel.segments[s][j].values();
      const auto w1 = vel.segments[s][j + 1].values();
      const double t0 = seg.time(j);
      for (std::size_t i = 0; i < n; ++i) {
        mid_phi[i] = 0.5 * (p0[i] + p1[i]) + 0.125 * dt * (w0[i] - w1[i]);
        mid_vel[i] = 1.5 * (p1[i] - p0[i]) / dt - 0.25 * (w0[i] + w1[i]);
      }
      const double eps = seg.samples[j].eps();
      const auto c0 = coefficients(p0, w0, h, eps, t0);
      const auto cm = coefficients(mid_phi, mid_vel, h, eps, t0 + 0.5 * dt);
      const auto c1 = coefficients(p1, w1, h, eps, seg.time(j + 1));

      auto stage = [&](const TransportCoefficients& c, std::span<const double> base,
                       std::span<const double> slope, double f, std::span<double> k) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = base[i] + f * slope[i];
        if (compact) pin_band(tmp, band);
        transport_rhs(c, tmp, h, dvx, k);
        if (compact) pin_band(k, band);
      };
      transport_rhs(c0, v, h, dvx, k1);
      if (compact) pin_band(k1, band);
      stage(cm, v, k1, 0.5 * dt, k2);
      stage(cm, v, k2, 0.5 * dt, k3);
      stage(c1, v, k3, dt, k4);
      for (std::size_t i = 0; i < n; ++i)
        v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      row.push_back(v0.with_values(ScalarField(grid, v)));
    }
    out.segments.push_back(std::move(row));
  }
  return out;
}

} // namespace contmech
