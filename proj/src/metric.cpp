#include "contmech/metric.hpp"

#include "energy_kernel.hpp"

#include <cmath>

namespace contmech {

double CovectorDensity::pair(const Section& s) const {
  require_same_grid(density.grid(), s.grid());
  const auto a = density.values();
  const auto b = s.values();
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i];
  return integrate(prod, s.grid().spacing());
}

ScalarField volume_density(const Configuration& phi) {
  const auto slope = phi.slope().values();
  std::vector<double> out(slope.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(slope[i]);
  return ScalarField(phi.grid(), std::move(out));
}

double metric(const Configuration& phi, const Section& s1, const Section& s2) {
  require_same_grid(phi.grid(), s1.grid());
  require_same_grid(phi.grid(), s2.grid());
  const auto slope = phi.slope().values();
  const auto a = s1.values();
  const auto b = s2.values();
  const std::size_t n = a.size();
  double sum = 0.5 * (a[0] * b[0] * std::abs(slope[0]) +
                      a[n - 1] * b[n - 1] * std::abs(slope[n - 1]));
  for (std::size_t i = 1; i + 1 < n; ++i) sum += a[i] * b[i] * std::abs(slope[i]);
  return phi.grid().spacing() * sum;
}

double kinetic(const Configuration& phi, const Section& v) {
  return 0.5 * metric(phi, v, v);
}

double path_energy(const PathOnQ& path) {
  const double h = path.grid().spacing();
  const std::size_t band = path.mode() == SupportMode::compact ? path.band_width() : 0;
  double energy = 0.0;
  for (const auto& seg : path.segments()) {
    energy += detail::segment_energy(
        seg.knots(), seg.dt(), h, band,
        [&](std::size_t k) { return seg.samples[k].field().values(); });
  }
  return energy;
}

CovectorDensity flat(const Configuration& phi, const Section& s) {
  require_same_grid(phi.grid(), s.grid());
  return {s.field() * volume_density(phi)};
}

Section sharp(const Configuration& phi, const CovectorDensity& lambda,
              SupportMode mode, std::size_t band_width) {
  require_same_grid(phi.grid(), lambda.density.grid());
  const auto slope = phi.slope().values();
  const auto d = lambda.density.values();
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = d[i] / std::abs(slope[i]);
  ScalarField f(phi.grid(), std::move(out));
  if (mode == SupportMode::compact) return Section::pinned(std::move(f), band_width);
  return Section(std::move(f), mode, band_width);
}

double force_pairing(const ScalarField& sigma, const Configuration& phi,
                     const Section& s) {
  require_same_grid(phi.grid(), sigma.grid());
  require_same_grid(phi.grid(), s.grid());
  const CovectorDensity work{sigma * volume_density(phi)};
  return work.pair(s);
}

} // namespace contmech
