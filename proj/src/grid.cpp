#include "contmech/grid.hpp"

#include "contmech/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace contmech {

BodyGrid::BodyGrid(double x_min, double x_max, std::size_t n_nodes)
    : x_min_(x_min), x_max_(x_max), n_(n_nodes), h_(0.0) {
  if (!std::isfinite(x_min)) throw ConstructionError("x_min", "must be finite");
  if (!std::isfinite(x_max)) throw ConstructionError("x_max", "must be finite");
  if (n_nodes < 3) throw ConstructionError("n_nodes", "must be at least 3");
  if (!(x_max > x_min))
    throw ConstructionError("x_max", "must be greater than x_min");
  h_ = (x_max - x_min) / static_cast<double>(n_nodes - 1);
  if (!(h_ > 0.0)) throw ConstructionError("n_nodes", "spacing underflows");
}

BodyGrid make_grid(double x_min, double x_max, long long n_nodes) {
  if (n_nodes < 3) throw ConstructionError("n_nodes", "must be at least 3");
  return BodyGrid(x_min, x_max, static_cast<std::size_t>(n_nodes));
}

ScalarField::ScalarField(BodyGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ConstructionError("values", "length " + std::to_string(values_.size()) +
                                          " does not match grid size " +
                                          std::to_string(grid_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw ConstructionError("values", "non-finite entry at node " +
                                            std::to_string(i));
}

ScalarField ScalarField::zeros(const BodyGrid& grid) {
  return ScalarField(grid, std::vector<double>(grid.size(), 0.0), Unchecked{});
}

ScalarField ScalarField::constant(const BodyGrid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const BodyGrid& a, const BodyGrid& b) {
  if (!(a == b)) throw GridMismatchError("fields live on different grids");
}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return ScalarField(a.grid(), std::move(out));
}

} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}

ScalarField operator-(const ScalarField& a) {
  std::vector<double> out(a.values_);
  for (double& v : out) v = -v;
  return ScalarField(a.grid_, std::move(out), ScalarField::Unchecked{});
}

ScalarField operator*(double c, const ScalarField& a) {
  std::vector<double> out(a.values_);
  for (double& v : out) v *= c;
  return ScalarField(a.grid_, std::move(out));
}

void diff_x(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t n = f.size();
  const double inv2h = 1.0 / (2.0 * h);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
}

ScalarField diff_x(const ScalarField& f) {
  std::vector<double> out(f.size());
  diff_x(f.values(), f.grid().spacing(), out);
  return ScalarField(f.grid(), std::move(out));
}

double integrate(std::span<const double> f, double h) {
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return h * sum;
}

double integrate(const ScalarField& f) {
  return integrate(f.values(), f.grid().spacing());
}

bool is_embedding(const ScalarField& phi, double eps) {
  return is_embedding(phi.values(), phi.grid().spacing(), eps);
}

bool is_embedding(std::span<const double> v, double h, double eps, int orientation) {
  const double first = v[1] - v[0];
  if (first == 0.0 || !std::isfinite(first)) return false;
  const double sign = first > 0.0 ? 1.0 : -1.0;
  if (orientation != 0 && sign != static_cast<double>(orientation)) return false;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = sign * (v[i + 1] - v[i]);
    if (!(d > 0.0) || d / h < eps) return false;
  }
  return true;
}

bool is_embedding(const Configuration& phi) {
  return is_embedding(phi.field(), phi.eps());
}

Configuration::Configuration(ScalarField field, double eps)
    : field_(std::move(field)), eps_(eps), slope_(diff_x(field_)),
      orientation_(0) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ConstructionError("eps_emb", "must be positive and finite");
  if (!is_embedding(field_, eps_)) {
    const auto v = field_.values();
    std::size_t bad = 0;
    const double sign = v[1] - v[0] >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (!(sign * (v[i + 1] - v[i]) / field_.grid().spacing() >= eps_)) {
        bad = i;
        break;
      }
    throw EmbeddingError("configuration is not an embedding (node " +
                             std::to_string(bad) + ")",
                         bad);
  }
  orientation_ = field_[1] > field_[0] ? 1 : -1;
}

double Configuration::min_abs_slope() const noexcept {
  double m = slope_.max_abs();
  for (double s : slope_.values()) m = std::min(m, std::abs(s));
  return m;
}

void pin_band(std::span<double> values, std::size_t band_width) {
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < band_width && i < n; ++i) {
    values[i] = 0.0;
    values[n - 1 - i] = 0.0;
  }
}

Section::Section(ScalarField field, SupportMode mode, std::size_t band_width)
    : field_(std::move(field)), mode_(mode), band_(band_width) {
  if (band_width < 1) throw ConstructionError("band_width", "must be at least 1");
  if (mode_ == SupportMode::compact) {
    if (2 * band_ >= field_.size())
      throw ConstructionError("band_width", "band covers the whole grid");
    const auto v = field_.values();
    for (std::size_t i = 0; i < band_; ++i)
      if (v[i] != 0.0 || v[v.size() - 1 - i] != 0.0)
        throw ConstructionError("section",
                                "compact-mode band must be exactly zero");
  }
}

Section Section::pinned(ScalarField field, std::size_t band_width) {
  std::vector<double> v(field.values().begin(), field.values().end());
  pin_band(v, band_width);
  return Section(ScalarField(field.grid(), std::move(v)), SupportMode::compact,
                 band_width);
}

Section Section::with_values(ScalarField field) const {
  if (mode_ == SupportMode::compact) return pinned(std::move(field), band_);
  return Section(std::move(field), mode_, band_);
}

} // namespace contmech
