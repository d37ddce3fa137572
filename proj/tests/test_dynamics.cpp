#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "contmech/dynamics.hpp"
#include "contmech/errors.hpp"
#include "contmech/metric.hpp"

#include <cmath>

using namespace contmech;

namespace {

State scaling_state(const BodyGrid& g, double rate = 1.0 / 3.0) {
  return State{0.0, Configuration(ScalarField::sample(g, [](double x) { return x; })),
               Section::free(ScalarField::sample(g, [rate](double x) { return rate * x; }))};
}

State bump_state(const BodyGrid& g, double amplitude) {
  return State{0.0, Configuration(ScalarField::sample(g, [](double x) { return x; })),
               Section::pinned(ScalarField::sample(g, [amplitude](double x) {
                 return amplitude * std::exp(-(x - 0.5) * (x - 0.5) / 0.02);
               }))};
}

double max_deviation(const Trajectory& traj, const std::function<double(double, double)>& exact) {
  double err = 0.0;
  for (const auto& s : traj.states)
    for (std::size_t i = 0; i < s.phi.grid().size(); ++i)
      err = std::max(err, std::abs(s.phi.field()[i] - exact(s.t, s.phi.grid().node(i))));
  return err;
}

} // namespace

TEST_CASE("rhs at rest and on translations") {
  const BodyGrid g(0.0, 1.0, 21);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  const auto r0 = rhs(State{0.0, id, Section::free(ScalarField::zeros(g))}, ForceModel::zero());
  CHECK(r0.dphi.field().max_abs() == 0.0);
  CHECK(r0.dv.field().max_abs() == 0.0);

  const Configuration shifted(ScalarField::sample(g, [](double x) { return x + 0.37; }));
  const auto r1 = rhs(State{0.37, shifted, Section::free(ScalarField::constant(g, 0.9))}, ForceModel::zero());
  CHECK(r1.dv.field().max_abs() <= 1e-13);
  CHECK(r1.dphi.field() == ScalarField::constant(g, 0.9));
}

TEST_CASE("rhs on the scaling solution") {
  // phi = x u, v = x u' with u = (1 + t)^(1/3): dv = x u'' and
  // u'' = -2 u'^2 / u.
  const BodyGrid g(0.0, 1.0, 31);
  const double t = 0.4, u = std::cbrt(1.0 + t), du = u / (3.0 * (1.0 + t));
  const double ddu = -2.0 * du * du / u;
  const State s{t, Configuration(ScalarField::sample(g, [u](double x) { return x * u; })),
                Section::free(ScalarField::sample(g, [du](double x) { return x * du; }))};
  const auto r = rhs(s, ForceModel::zero());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.dv[i] == doctest::Approx(g.node(i) * ddu).epsilon(1e-12));
}

TEST_CASE("rhs force term and compact pinning") {
  const BodyGrid g(0.0, 1.0, 21);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  const ForceModel f(ForceModel::ConstantDensity{3.0}, 0.5);
  const auto r = rhs(State{0.0, id, Section::pinned(ScalarField::zeros(g))}, f);
  CHECK(r.dv[0] == 0.0);
  CHECK(r.dv[20] == 0.0);
  CHECK(r.dv[10] == doctest::Approx(1.5));
  const auto rf = rhs(State{0.0, id, Section::free(ScalarField::zeros(g))}, f);
  CHECK(rf.dv[0] == doctest::Approx(1.5));
}

TEST_CASE("step: rest and translation") {
  const BodyGrid g(0.0, 1.0, 21);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  for (Scheme sch : {Scheme::rk4, Scheme::leapfrog}) {
    const State rest{0.0, id, Section::pinned(ScalarField::zeros(g))};
    const State next = step(rest, ForceModel::zero(), 0.1, sch);
    CHECK(next.t == doctest::Approx(0.1));
    CHECK(next.phi.field() == id.field());
    CHECK(next.v.field().max_abs() == 0.0);

    const State trans{0.0, id, Section::free(ScalarField::constant(g, 0.8))};
    const State moved = step(trans, ForceModel::zero(), 0.25, sch);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(moved.phi.field()[i] == doctest::Approx(g.node(i) + 0.2).epsilon(1e-15));
  }
  CHECK_THROWS_AS(step(State{0.0, id, Section::free(ScalarField::zeros(g))}, ForceModel::zero(), 0.0),
                  ConstructionError);
}

TEST_CASE("simulate: rest stays at rest") {
  const BodyGrid g(0.0, 1.0, 21);
  const State rest{0.0, Configuration(ScalarField::sample(g, [](double x) { return x; })),
                   Section::pinned(ScalarField::zeros(g))};
  const Trajectory tr = simulate(rest, ForceModel::zero(), 2.0, 0.1, Scheme::rk4, SupportMode::compact);
  CHECK(tr.states.size() == 21);
  CHECK(tr.states.back().t == 2.0);
  for (const auto& s : tr.states) CHECK(s.phi.field() == rest.phi.field());
  for (const auto& d : tr.diagnostics) CHECK(d.kinetic == 0.0);
}

TEST_CASE("simulate: translation is exact") {
  const BodyGrid g(0.0, 1.0, 201);
  const State init{0.0, Configuration(ScalarField::sample(g, [](double x) { return x; })),
                   Section::free(ScalarField::constant(g, 0.7))};
  const Trajectory tr = simulate(init, ForceModel::zero(), 1.0, 1e-3);
  CHECK(max_deviation(tr, [](double t, double x) { return x + 0.7 * t; }) <= 1e-10);
}

TEST_CASE("simulate: scaling converges at order 4 with rk4 and 2 with leapfrog") {
  auto exact = [](double t, double x) { return x * std::cbrt(1.0 + t); };
  for (auto [sch, order] : {std::pair{Scheme::rk4, 4.0}, std::pair{Scheme::leapfrog, 2.0}}) {
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
      const BodyGrid g(0.0, 1.0, (10u << level) + 1);
      const double dt = 0.1 / (1 << level);
      const double err = max_deviation(simulate(scaling_state(g), ForceModel::zero(), 1.0, dt, sch), exact);
      if (level > 0) CHECK(std::log2(prev / err) == doctest::Approx(order).epsilon(0.075));
      prev = err;
    }
  }
  const BodyGrid g(0.0, 1.0, 201);
  CHECK(max_deviation(simulate(scaling_state(g), ForceModel::zero(), 1.0, 1e-3), exact) <= 1e-8);
}

TEST_CASE("simulate: compact-mode energy is conserved to O(h^2)") {
  const BodyGrid g(0.0, 1.0, 201);
  const double drift = relative_energy_drift(
      simulate(bump_state(g, 0.005), ForceModel::zero(), 1.0, 1e-3, Scheme::rk4, SupportMode::compact));
  CHECK(drift <= 1e-6);
  const BodyGrid f(0.0, 1.0, 401);
  const double fine = relative_energy_drift(
      simulate(bump_state(f, 0.005), ForceModel::zero(), 1.0, 5e-4, Scheme::rk4, SupportMode::compact));
  CHECK(drift / fine >= 3.8);
}

TEST_CASE("simulate: free-mode flux balance on the scaling geodesic") {
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const BodyGrid g(0.0, 1.0, (50u << level) + 1);
    const Trajectory tr = simulate(scaling_state(g), ForceModel::zero(), 1.0, 0.01 / (1 << level));
    // K(t) = 1/(54 (1 + t)) up to the trapezoid error in int x^2.
    CHECK(tr.diagnostics.back().kinetic == doctest::Approx(1.0 / 108.0).epsilon(1e-3));
    const double defect = flux_balance_defect(tr, 0.1, 1.0);
    if (level > 0) CHECK(std::log2(prev / defect) >= 1.9);
    prev = defect;
  }
}

TEST_CASE("simulate: diagnostics drift closes under forcing") {
  const BodyGrid g(0.0, 1.0, 101);
  const State init{0.0, Configuration(ScalarField::sample(g, [](double x) { return x; })),
                   Section::pinned(ScalarField::zeros(g))};
  const ForceModel f(ForceModel::SpatialBump{0.1, 0.5, 0.1});
  const Trajectory tr = simulate(init, f, 1.0, 1e-3, Scheme::rk4, SupportMode::compact);
  CHECK(tr.diagnostics.back().kinetic > 1e-4);
  CHECK(std::abs(tr.diagnostics.back().drift) <= 1e-3 * tr.diagnostics.back().kinetic);
}

TEST_CASE("simulate: time reversal returns to the start") {
  const BodyGrid g(0.0, 1.0, 101);
  const State init = bump_state(g, 0.05);
  const Trajectory fwd = simulate(init, ForceModel::zero(), 0.5, 1e-3, Scheme::rk4, SupportMode::compact);
  const State& end = fwd.states.back();
  const State rev{0.0, end.phi, end.v.with_values(-end.v.field())};
  const Trajectory back = simulate(rev, ForceModel::zero(), 0.5, 1e-3, Scheme::rk4, SupportMode::compact);
  CHECK((back.states.back().phi.field() - init.phi.field()).max_abs() <= 1e-10);
}

TEST_CASE("simulate: sign equivariance") {
  const BodyGrid g(0.0, 1.0, 81);
  const State init = bump_state(g, 0.05);
  const State neg{0.0, Configuration(-init.phi.field()), init.v.with_values(-init.v.field())};
  const Trajectory a = simulate(init, ForceModel::zero(), 0.5, 1e-2, Scheme::rk4, SupportMode::compact);
  const Trajectory b = simulate(neg, ForceModel::zero(), 0.5, 1e-2, Scheme::rk4, SupportMode::compact);
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    CHECK((a.states[j].phi.field() + b.states[j].phi.field()).max_abs() <= 1e-13);
    CHECK(a.diagnostics[j].kinetic == doctest::Approx(b.diagnostics[j].kinetic).epsilon(1e-12));
  }
}

TEST_CASE("simulate: compressive ramp aborts with a well-formed partial trajectory") {
  const BodyGrid g(0.0, 1.0, 201);
  const State init{0.0, Configuration(ScalarField::sample(g, [](double x) { return x; })),
                   Section::free(ScalarField::sample(g, [](double x) { return -2.0 * x; }))};
  try {
    simulate(init, ForceModel::zero(), 1.0, 1e-3);
    FAIL("expected SimulationAborted");
  } catch (const SimulationAborted& e) {
    const Trajectory& p = e.partial();
    // The exact solution collapses at t = 1/(3k) = 1/6.
    CHECK(e.time() < 1.0 / 6.0);
    CHECK(e.time() > 0.1);
    REQUIRE(p.states.size() >= 2);
    CHECK(p.states.size() == p.diagnostics.size());
    for (std::size_t j = 0; j < p.states.size(); ++j) {
      CHECK(p.states[j].t == doctest::Approx(j * 1e-3));
      CHECK(p.diagnostics[j].min_phi_x >= kDefaultEmbeddingThreshold);
      CHECK(is_embedding(p.states[j].phi));
    }
    CHECK(e.time() > p.states.back().t);
  }
}

TEST_CASE("simulate rejects a step that does not divide the interval") {
  const BodyGrid g(0.0, 1.0, 11);
  CHECK_THROWS_AS(simulate(scaling_state(g), ForceModel::zero(), 1.0, 0.3), ConstructionError);
  CHECK_THROWS_AS(simulate(scaling_state(g), ForceModel::zero(), -1.0, 0.1), ConstructionError);
}

TEST_CASE("ForceModel evaluation") {
  const BodyGrid g(0.0, 1.0, 11);
  const Configuration id(ScalarField::sample(g, [](double x) { return x; }));
  CHECK(ForceModel::zero().evaluate(id, 0.3).max_abs() == 0.0);
  CHECK(ForceModel::zero().is_zero());
  CHECK(ForceModel(ForceModel::ConstantDensity{2.0}).evaluate(id, 0.0)[4] == 2.0);
  const auto bump = ForceModel(ForceModel::SpatialBump{0.3, 0.5, 0.1}).evaluate(id, 0.0);
  CHECK(bump[5] == doctest::Approx(0.3));
  CHECK(bump[6] == doctest::Approx(0.3 * std::exp(-0.5)));
  CHECK_THROWS_AS(ForceModel(ForceModel::SpatialBump{0.3, 0.5, 0.0}), ConstructionError);

  ForceModel::Tabulated tab{{0.0, 1.0}, {ScalarField::constant(g, 1.0), ScalarField::constant(g, 3.0)}};
  const ForceModel tf(tab, 2.0);
  CHECK(tf.name() == "tabulated");
  CHECK(tf.coefficient() == 2.0);
  CHECK(tf.evaluate(id, -1.0)[0] == 1.0);
  CHECK(tf.evaluate(id, 0.25)[0] == doctest::Approx(1.5));
  CHECK(tf.evaluate(id, 5.0)[0] == 3.0);
  CHECK_THROWS_AS(ForceModel(ForceModel::Tabulated{{1.0, 0.5}, tab.fields}), ConstructionError);
  CHECK_THROWS_AS(ForceModel(ForceModel::Tabulated{{0.0}, tab.fields}), ConstructionError);
}
