#pragma once

// Discrete body interval and the calculus on it: fields sampled at uniform
// nodes, second-order differentiation, trapezoid quadrature and the
// embedding test for configurations.

#include <cstddef>
#include <span>
#include <vector>

namespace contmech {

inline constexpr double kDefaultEmbeddingThreshold = 1e-8;

enum class SupportMode { compact, free };

class BodyGrid {
public:
  /// Throws ConstructionError naming x_min, x_max or n_nodes.
  BodyGrid(double x_min, double x_max, std::size_t n_nodes);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double node(std::size_t i) const noexcept {
    return x_min_ + static_cast<double>(i) * h_;
  }
  double length() const noexcept { return x_max_ - x_min_; }

  bool operator==(const BodyGrid&) const = default;

private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

BodyGrid make_grid(double x_min, double x_max, long long n_nodes);

class ScalarField {
public:
  /// Values must be finite and match the grid size.
  ScalarField(BodyGrid grid, std::vector<double> values);

  static ScalarField zeros(const BodyGrid& grid);
  static ScalarField constant(const BodyGrid& grid, double value);

  template <class F>
  static ScalarField sample(const BodyGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return ScalarField(grid, std::move(v));
  }

  const BodyGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double max_abs() const noexcept;

  bool operator==(const ScalarField&) const = default;

private:
  struct Unchecked {};
  ScalarField(BodyGrid grid, std::vector<double> values, Unchecked)
      : grid_(grid), values_(std::move(values)) {}

  BodyGrid grid_;
  std::vector<double> values_;

  friend ScalarField operator+(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&, const ScalarField&);
  friend ScalarField operator*(double, const ScalarField&);
  friend ScalarField operator*(const ScalarField&, const ScalarField&);
  friend ScalarField operator-(const ScalarField&);
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(double c, const ScalarField& a);
/// Pointwise product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

void require_same_grid(const BodyGrid& a, const BodyGrid& b);

/// Central differences inside, second-order one-sided stencils at both ends.
ScalarField diff_x(const ScalarField& f);

/// Same stencils on a raw sample array with spacing h; out must have f.size().
void diff_x(std::span<const double> f, double h, std::span<double> out);

/// Composite trapezoid rule over the grid.
double integrate(const ScalarField& f);
double integrate(std::span<const double> f, double h);

/// Every consecutive difference has one sign and |d phi|/h >= eps.
bool is_embedding(const ScalarField& phi,
                  double eps = kDefaultEmbeddingThreshold);
/// Raw-sample form; `orientation` of +1/-1 additionally fixes the sign, 0
/// accepts either.
bool is_embedding(std::span<const double> phi, double h, double eps,
                  int orientation = 0);

/// An embedding of the body into the line. Caches phi_x and its orientation.
class Configuration {
public:
  /// Throws EmbeddingError when `field` fails is_embedding(field, eps).
  explicit Configuration(ScalarField field,
                         double eps = kDefaultEmbeddingThreshold);

  const ScalarField& field() const noexcept { return field_; }
  const BodyGrid& grid() const noexcept { return field_.grid(); }
  double eps() const noexcept { return eps_; }
  /// phi_x from diff_x.
  const ScalarField& slope() const noexcept { return slope_; }
  /// +1 for increasing embeddings, -1 for decreasing ones.
  int orientation() const noexcept { return orientation_; }
  double min_abs_slope() const noexcept;

private:
  ScalarField field_;
  double eps_;
  ScalarField slope_;
  int orientation_;
};

bool is_embedding(const Configuration& phi);

/// Tangent vector at a configuration. In compact mode the first and last
/// `band_width` nodes hold exact zeros.
class Section {
public:
  /// Throws ConstructionError if a compact-mode band is not exactly zero.
  Section(ScalarField field, SupportMode mode = SupportMode::free,
          std::size_t band_width = 1);

  /// Compact-mode section with the band overwritten by zeros.
  static Section pinned(ScalarField field, std::size_t band_width = 1);
  static Section free(ScalarField field) {
    return Section(std::move(field), SupportMode::free);
  }

  const ScalarField& field() const noexcept { return field_; }
  const BodyGrid& grid() const noexcept { return field_.grid(); }
  std::span<const double> values() const noexcept { return field_.values(); }
  double operator[](std::size_t i) const noexcept { return field_[i]; }
  SupportMode mode() const noexcept { return mode_; }
  std::size_t band_width() const noexcept { return band_; }

  /// Re-wrap new values under this section's support convention (pinning the
  /// band in compact mode).
  Section with_values(ScalarField field) const;

private:
  ScalarField field_;
  SupportMode mode_;
  std::size_t band_;
};

/// Zero the first and last `band_width` entries.
void pin_band(std::span<double> values, std::size_t band_width);

} // namespace contmech
