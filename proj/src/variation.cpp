#include "contmech/variation.hpp"

#include "contmech/metric.hpp"

#include "energy_kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace contmech {

namespace {

bool vanishes(const Section& s) {
  for (double v : s.values())
    if (v != 0.0) return false;
  return true;
}

// Knot rows of gamma + s V on one segment, produced on demand into a small
// ring so perturbed paths are never stored whole.
class PerturbedRows {
public:
  PerturbedRows(const PathSegment& seg, const std::vector<Section>& field, double s)
      : seg_(seg), field_(field), s_(s) {
    for (auto& slot : slots_) slot.knot = static_cast<std::size_t>(-1);
  }

  std::span<const double> operator()(std::size_t k) {
    Slot& slot = slots_[k % slots_.size()];
    if (slot.knot != k) {
      const auto p = seg_.samples[k].field().values();
      const auto v = field_[k].values();
      slot.values.resize(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) slot.values[i] = p[i] + s_ * v[i];
      const auto& base = seg_.samples[k];
      if (!is_embedding(slot.values, base.grid().spacing(), base.eps(), base.orientation()))
        throw InvalidVariation(s_, "perturbed path is not an embedding at s=" +
                                       std::to_string(s_) + ", t=" +
                                       std::to_string(seg_.time(k)));
      slot.knot = k;
    }
    return slot.values;
  }

private:
  struct Slot {
    std::size_t knot;
    std::vector<double> values;
  };
  const PathSegment& seg_;
  const std::vector<Section>& field_;
  double s_;
  std::array<Slot, 4> slots_;
};

double perturbed_energy(const PathOnQ& base, const AlongPath& field, double s) {
  const double h = base.grid().spacing();
  const std::size_t band = base.mode() == SupportMode::compact ? base.band_width() : 0;
  double energy = 0.0;
  for (std::size_t k = 0; k < base.segments().size(); ++k) {
    const auto& seg = base.segments()[k];
    PerturbedRows rows(seg, field.segments[k], s);
    energy += detail::segment_energy(seg.knots(), seg.dt(), h, band, rows);
  }
  return energy;
}

} // namespace

Variation::Variation(PathOnQ base, AlongPath field, double delta)
    : base_(std::move(base)), field_(std::move(field)), delta_(delta), proper_(false) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ConstructionError("delta", "must be positive and finite");
  require_shape(base_, field_);
  proper_ = vanishes(field_.segments.front().front()) &&
            vanishes(field_.segments.back().back());
  // Shared breakpoint rows must agree or gamma + s V tears apart.
  for (std::size_t k = 1; k < field_.segments.size(); ++k)
    if (!(field_.segments[k - 1].back().field() == field_.segments[k].front().field()))
      throw ConstructionError("field", "variational field is discontinuous at a breakpoint");
  for (double s : {0.0, 0.5 * delta, -0.5 * delta, delta, -delta}) {
    for (std::size_t k = 0; k < base_.segments().size(); ++k) {
      PerturbedRows rows(base_.segments()[k], field_.segments[k], s);
      for (std::size_t j = 0; j < base_.segments()[k].knots(); ++j) (void)rows(j);
    }
  }
}

PathOnQ Variation::at(double s) const {
  std::vector<PathSegment> segs;
  segs.reserve(base_.segments().size());
  for (std::size_t k = 0; k < base_.segments().size(); ++k) {
    const auto& seg = base_.segments()[k];
    PathSegment out{seg.t_start, seg.t_end, {}};
    out.samples.reserve(seg.knots());
    for (std::size_t j = 0; j < seg.knots(); ++j) {
      const auto p = seg.samples[j].field().values();
      const auto v = field_.segments[k][j].values();
      std::vector<double> q(p.size());
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = p[i] + s * v[i];
      out.samples.emplace_back(ScalarField(base_.grid(), std::move(q)),
                               seg.samples[j].eps());
    }
    segs.push_back(std::move(out));
  }
  return PathOnQ(std::move(segs), base_.mode(), base_.band_width());
}

Variation make_variation(const PathOnQ& base, const AlongPath& field, double delta) {
  return Variation(base, field, delta);
}

const AlongPath& variational_field(const Variation& var) { return var.field(); }

double dE_ds_fd(const Variation& var, double s_h) {
  if (!(s_h > 0.0) || s_h > 0.5 * var.delta())
    throw ConstructionError("s_h", "must lie in (0, delta/2]");
  return (perturbed_energy(var.base(), var.field(), s_h) -
          perturbed_energy(var.base(), var.field(), -s_h)) /
         (2.0 * s_h);
}

FirstVariationTerms first_variation_terms(const PathOnQ& path, const AlongPath& field) {
  return first_variation_terms(path, kinematics(path), field);
}

FirstVariationTerms first_variation_terms(const PathOnQ& path,
                                          const PathKinematics& kin,
                                          const AlongPath& field) {
  require_shape(path, field);
  require_shape(path, kin.velocity);
  require_shape(path, kin.acceleration);
  const AlongPath& vel = kin.velocity;
  const AlongPath& acc = kin.acceleration;
  const auto& segs = path.segments();
  FirstVariationTerms r{0.0, 0.0, 0.0};
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& seg = segs[s];
    const std::size_t m = seg.knots();
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double g = metric(seg.samples[j], field.segments[s][j], acc.segments[s][j]);
      sum += (j == 0 || j + 1 == m) ? 0.5 * g : g;
    }
    r.bulk -= seg.dt() * sum;
  }
  for (std::size_t s = 1; s < segs.size(); ++s) {
    const Configuration& at = segs[s].samples.front();
    const Section& right = vel.segments[s].front();
    const Section& left = vel.segments[s - 1].back();
    const Section& v = field.segments[s].front();
    r.jumps -= metric(at, v, right) - metric(at, v, left);
  }
  r.boundary = -metric(segs.front().samples.front(), field.segments.front().front(),
                       vel.segments.front().front()) +
               metric(segs.back().samples.back(), field.segments.back().back(),
                      vel.segments.back().back());
  return r;
}

double first_variation_rhs(const PathOnQ& path, const AlongPath& field) {
  return first_variation_terms(path, field).total();
}

double path_norm(const PathOnQ& path, const AlongPath& field) {
  require_shape(path, field);
  double total = 0.0;
  for (std::size_t s = 0; s < path.segments().size(); ++s) {
    const auto& seg = path.segments()[s];
    const std::size_t m = seg.knots();
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& v = field.segments[s][j];
      const double g = metric(seg.samples[j], v, v);
      sum += (j == 0 || j + 1 == m) ? 0.5 * g : g;
    }
    total += seg.dt() * sum;
  }
  return std::sqrt(total);
}

AlongPath random_field(const PathOnQ& path, std::mt19937_64& rng, bool proper,
                       std::size_t band_width) {
  constexpr int kModes = 3;
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::array<double, kModes> base{}, drift{};
  for (int k = 0; k < kModes; ++k) {
    base[k] = amp(rng);
    drift[k] = amp(rng);
  }
  const double offset = amp(rng);
  const double a = path.start();
  const double b = path.end();
  const BodyGrid& grid = path.grid();
  const std::size_t n = grid.size();
  const double pi = std::numbers::pi;

  // Separable: V(t, x) = window(t) sum_k (base_k + drift_k cos(pi tau)) sin(k pi xi).
  std::vector<std::array<double, kModes>> modes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = (grid.node(i) - grid.x_min()) / grid.length();
    for (int k = 0; k < kModes; ++k) modes[i][k] = std::sin((k + 1) * pi * xi);
  }
  AlongPath out;
  for (const auto& seg : path.segments()) {
    std::vector<Section> row;
    row.reserve(seg.knots());
    for (std::size_t j = 0; j < seg.knots(); ++j) {
      const double tau = (seg.time(j) - a) / (b - a);
      const double window = proper ? 4.0 * tau * (1.0 - tau) : 1.0 + 0.5 * offset * tau;
      const double c = std::cos(pi * tau);
      std::array<double, kModes> coef{};
      for (int k = 0; k < kModes; ++k) coef[k] = window * (base[k] + drift[k] * c);
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = 0; k < kModes; ++k) sum += coef[k] * modes[i][k];
        v[i] = sum;
      }
      row.push_back(Section::pinned(ScalarField(grid, std::move(v)), band_width));
    }
    out.segments.push_back(std::move(row));
  }
  return out;
}

double motion_residual(const PathOnQ& path, const ForceModel& force, int trials,
                       std::uint64_t seed, double s_h) {
  if (trials < 1) throw ConstructionError("trials", "must be at least 1");
  std::mt19937_64 rng(seed);
  const auto& segs = path.segments();

  // Forcing density c X along the path, shared by every trial.
  AlongPath forcing;
  for (const auto& seg : segs) {
    std::vector<Section> row;
    row.reserve(seg.knots());
    for (std::size_t j = 0; j < seg.knots(); ++j)
      row.push_back(Section::free(force.coefficient() *
                                  force.evaluate(seg.samples[j], seg.time(j))));
    forcing.segments.push_back(std::move(row));
  }

  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    AlongPath v = random_field(path, rng, /*proper=*/true, path.band_width());
    const double norm = path_norm(path, v);
    if (!(norm > 0.0)) continue;
    for (auto& row : v.segments)
      for (auto& sec : row) sec = sec.with_values((1.0 / norm) * sec.field());

    double work = 0.0;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const auto& seg = segs[s];
      const std::size_t m = seg.knots();
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double g = metric(seg.samples[j], v.segments[s][j], forcing.segments[s][j]);
        sum += (j == 0 || j + 1 == m) ? 0.5 * g : g;
      }
      work += seg.dt() * sum;
    }
    const Variation var(path, std::move(v), 2.0 * s_h);
    worst = std::max(worst, std::abs(dE_ds_fd(var, s_h) + work));
  }
  return worst;
}

} // namespace contmech
