#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "contmech/errors.hpp"
#include "contmech/metric.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace contmech;

namespace {

ScalarField random_field(const BodyGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng);
  return ScalarField(g, v);
}

Configuration random_embedding(const BodyGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), sign = u(rng) < 0 ? -1.0 : 1.0;
  return Configuration(ScalarField::sample(g, [&](double x) {
    return sign * (2.0 * x + 0.3 * a * std::sin(3.0 * x) + 0.2 * b * x * x);
  }));
}

} // namespace

TEST_CASE("metric on closed-form inputs") {
  const BodyGrid unit(0.0, 1.0, 201);
  const Section one = Section::free(ScalarField::constant(unit, 1.0));
  const Configuration id(ScalarField::sample(unit, [](double x) { return x; }));
  CHECK(metric(id, one, one) == doctest::Approx(1.0).epsilon(1e-14));
  const Configuration dbl(ScalarField::sample(unit, [](double x) { return 2.0 * x; }));
  CHECK(metric(dbl, one, one) == doctest::Approx(2.0).epsilon(1e-14));

  // int_1^2 2x dx = 3; central differences are exact on x^2 so only roundoff
  // remains.
  const BodyGrid g(1.0, 2.0, 201);
  const Configuration sq(ScalarField::sample(g, [](double x) { return x * x; }));
  const Section one2 = Section::free(ScalarField::constant(g, 1.0));
  CHECK(std::abs(metric(sq, one2, one2) - 3.0) <= 1e-4);
}

TEST_CASE("metric rejects mismatched grids") {
  const BodyGrid a(0.0, 1.0, 11), b(0.0, 1.0, 12);
  const Configuration id(ScalarField::sample(a, [](double x) { return x; }));
  const Section s = Section::free(ScalarField::constant(b, 1.0));
  CHECK_THROWS_AS(metric(id, s, s), GridMismatchError);
}

TEST_CASE("metric is symmetric, bilinear and sign-blind") {
  std::mt19937_64 rng(11);
  const BodyGrid g(0.0, 1.0, 57);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration phi = random_embedding(g, rng);
    const Configuration neg(-phi.field());
    const auto a = random_field(g, rng), b = random_field(g, rng), c = random_field(g, rng);
    const Section sa = Section::free(a), sb = Section::free(b), sc = Section::free(c);
    CHECK(metric(phi, sa, sb) == metric(phi, sb, sa));
    CHECK(metric(phi, sa, sb) == doctest::Approx(metric(neg, sa, sb)).epsilon(1e-14));
    const Section comb = Section::free(2.5 * a + c);
    CHECK(metric(phi, comb, sb) ==
          doctest::Approx(2.5 * metric(phi, sa, sb) + metric(phi, sc, sb)).epsilon(1e-12));
    CHECK(metric(phi, sa, sa) >= 0.0);
  }
}

TEST_CASE("compact-mode metric is definite") {
  const BodyGrid g(0.0, 1.0, 31);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  const Section zero = Section::pinned(ScalarField::zeros(g));
  CHECK(metric(id, zero, zero) == 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    std::vector<double> v(g.size(), 0.0);
    v[i] = 1e-3;
    const Section s = Section::pinned(ScalarField(g, v));
    CHECK(metric(id, s, s) > 0.0);
  }
}

TEST_CASE("volume_density") {
  const BodyGrid g(1.0, 2.0, 101);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  CHECK(volume_density(id).max_abs() == doctest::Approx(1.0));
  const Configuration neg(ScalarField::sample(g, [](double x) { return -2.0 * x; }));
  const auto vn = volume_density(neg);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(vn[i] == doctest::Approx(2.0));
  const Configuration sq(ScalarField::sample(g, [](double x) { return x * x; }));
  const auto vs = volume_density(sq);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(vs[i] == doctest::Approx(2.0 * g.node(i)).epsilon(1e-12));
}

TEST_CASE("kinetic") {
  const BodyGrid g(0.0, 1.0, 51);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  CHECK(kinetic(id, Section::free(ScalarField::zeros(g))) == 0.0);
  CHECK(kinetic(id, Section::free(ScalarField::constant(g, 0.7))) ==
        doctest::Approx(0.245).epsilon(1e-14));
  const auto v = ScalarField::sample(g, [](double x) { return std::sin(x) + 0.1; });
  CHECK(kinetic(id, Section::free(2.0 * v)) ==
        doctest::Approx(4.0 * kinetic(id, Section::free(v))).epsilon(1e-14));
}

TEST_CASE("path_energy oracles") {
  const BodyGrid g(0.0, 1.0, 201);
  const PathOnQ rest = sample_path(g, {0.0, 1.0}, 11, [](double, double x) { return x; });
  CHECK(path_energy(rest) <= 1e-30);

  // Translation x + v t: every stencil is exact, E = v^2 / 2.
  const PathOnQ trans = sample_path(g, {0.0, 1.0}, 101, [](double t, double x) { return x + 0.6 * t; });
  CHECK(path_energy(trans) == doctest::Approx(0.18).epsilon(1e-13));

  // Scaling x (1 + t)^(1/3): K(t) = 1/(54 (1 + t)), E = ln 2 / 54.
  const PathOnQ scal = sample_path(g, {0.0, 1.0}, 1001,
                                   [](double t, double x) { return x * std::cbrt(1.0 + t); });
  CHECK(std::abs(path_energy(scal) - std::numbers::ln2 / 54.0) <= 1e-6);
}

TEST_CASE("path_energy is invariant under time reversal") {
  const BodyGrid g(0.0, 1.0, 41);
  auto f = [](double t, double x) { return x + 0.3 * t * t * std::sin(3.0 * x) + 0.1 * t; };
  const PathOnQ fwd = sample_path(g, {0.0, 1.0}, 61, f);
  const PathOnQ bwd = sample_path(g, {0.0, 1.0}, 61, [&](double t, double x) { return f(1.0 - t, x); });
  CHECK(path_energy(fwd) == doctest::Approx(path_energy(bwd)).epsilon(1e-12));
}

TEST_CASE("flat and sharp") {
  const BodyGrid g(0.0, 1.0, 33);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  const Configuration dbl(ScalarField::sample(g, [](double x) { return 2.0 * x; }));
  const Section one = Section::free(ScalarField::constant(g, 1.0));
  CHECK(flat(id, one).density.max_abs() == doctest::Approx(1.0));
  const auto d2 = flat(dbl, one).density;
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(d2[i] == doctest::Approx(2.0));
  CHECK(sharp(id, CovectorDensity{ScalarField::zeros(g)}).field().max_abs() == 0.0);
  const auto s3 = sharp(id, CovectorDensity{ScalarField::constant(g, 3.0)});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(s3[i] == doctest::Approx(3.0));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration phi = random_embedding(g, rng);
    const Section s = Section::free(random_field(g, rng));
    const auto back = sharp(phi, flat(phi, s));
    const CovectorDensity lam{random_field(g, rng)};
    const auto again = flat(phi, sharp(phi, lam)).density;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(back[i] == doctest::Approx(s[i]).epsilon(1e-14));
      CHECK(again[i] == doctest::Approx(lam.density[i]).epsilon(1e-14));
    }
    const Section t = Section::free(random_field(g, rng));
    CHECK(flat(phi, s).pair(t) == doctest::Approx(metric(phi, s, t)).epsilon(1e-13));
  }
}

TEST_CASE("sharp in compact mode pins the band") {
  const BodyGrid g(0.0, 1.0, 17);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  const auto s = sharp(id, CovectorDensity{ScalarField::constant(g, 1.0)}, SupportMode::compact, 2);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == 1.0);
}

TEST_CASE("force_pairing") {
  const BodyGrid g(0.0, 1.0, 65);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  const Section one = Section::free(ScalarField::constant(g, 1.0));
  CHECK(force_pairing(ScalarField::zeros(g), id, one) == 0.0);
  CHECK(force_pairing(ScalarField::constant(g, 1.0), id, one) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration phi = random_embedding(g, rng);
    const auto sigma = random_field(g, rng);
    const Section s = Section::free(random_field(g, rng));
    CHECK(force_pairing(sigma, phi, s) ==
          doctest::Approx(metric(phi, Section::free(sigma), s)).epsilon(1e-13));
  }
}

TEST_CASE("pairing with a compact section ignores the band") {
  const BodyGrid g(0.0, 1.0, 21);
  const Section s = Section::pinned(ScalarField::constant(g, 1.0), 2);
  auto lam = ScalarField::constant(g, 1.0);
  std::vector<double> bumped(lam.values().begin(), lam.values().end());
  bumped[0] = bumped[1] = bumped[19] = bumped[20] = 100.0;
  CHECK(CovectorDensity{lam}.pair(s) == CovectorDensity{ScalarField(g, bumped)}.pair(s));
}
