#pragma once

// Streaming evaluation of one segment's path energy from knot rows, so that
// perturbed paths never have to be materialised.

#include "contmech/grid.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace contmech::detail {

/// `row(k)` returns the sampled configuration at knot k; the returned span must
/// stay valid while the next two knots are requested. A nonzero `band` pins
/// the velocity there (compact-mode paths).
template <class RowFn>
double segment_energy(std::size_t m, double dt, double h, std::size_t band,
                      RowFn&& row) {
  std::vector<double> vel, slope;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::span<const double> a, b, c;
    double ca, cb, cc;
    if (j == 0) {
      a = row(0), b = row(1), c = row(2);
      ca = -3.0, cb = 4.0, cc = -1.0;
    } else if (j + 1 == m) {
      a = row(m - 1), b = row(m - 2), c = row(m - 3);
      ca = 3.0, cb = -4.0, cc = 1.0;
    } else {
      a = row(j + 1), b = row(j - 1), c = b;
      ca = 1.0, cb = -1.0, cc = 0.0;
    }
    const std::size_t n = a.size();
    vel.resize(n);
    slope.resize(n);
    const double inv2dt = 1.0 / (2.0 * dt);
    for (std::size_t i = 0; i < n; ++i)
      vel[i] = (ca * a[i] + cb * b[i] + cc * c[i]) * inv2dt;
    pin_band(vel, band);
    diff_x(row(j), h, slope);
    double k = 0.5 * (vel[0] * vel[0] * std::abs(slope[0]) +
                      vel[n - 1] * vel[n - 1] * std::abs(slope[n - 1]));
    for (std::size_t i = 1; i + 1 < n; ++i) k += vel[i] * vel[i] * std::abs(slope[i]);
    k *= 0.5 * h;
    sum += (j == 0 || j + 1 == m) ? 0.5 * k : k;
  }
  return dt * sum;
}

} // namespace contmech::detail
