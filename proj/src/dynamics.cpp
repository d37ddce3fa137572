#include "contmech/dynamics.hpp"

#include "contmech/metric.hpp"

#include <algorithm>
#include <cmath>

namespace contmech {

ForceModel::ForceModel(Kind kind, double coefficient)
    : kind_(std::move(kind)), coefficient_(coefficient) {
  if (!std::isfinite(coefficient))
    throw ConstructionError("force_coefficient", "must be finite");
  if (const auto* b = std::get_if<SpatialBump>(&kind_)) {
    if (!(b->width > 0.0)) throw ConstructionError("force.width", "must be positive");
  }
  if (const auto* tab = std::get_if<Tabulated>(&kind_)) {
    if (tab->times.empty() || tab->times.size() != tab->fields.size())
      throw ConstructionError("force.table", "times and fields must be non-empty and match");
    for (std::size_t i = 1; i < tab->times.size(); ++i)
      if (!(tab->times[i] > tab->times[i - 1]))
        throw ConstructionError("force.times", "must be strictly increasing");
    for (const auto& f : tab->fields) require_same_grid(tab->fields.front().grid(), f.grid());
  }
}

std::string ForceModel::name() const {
  struct Namer {
    std::string operator()(const Zero&) const { return "zero"; }
    std::string operator()(const ConstantDensity&) const { return "constant_density"; }
    std::string operator()(const SpatialBump&) const { return "spatial_bump"; }
    std::string operator()(const Tabulated&) const { return "tabulated"; }
  };
  return std::visit(Namer{}, kind_);
}

void ForceModel::evaluate(const BodyGrid& grid, std::span<const double> /*phi*/,
                          std::span<const double> /*slope*/, double t,
                          std::span<double> out) const {
  const std::size_t n = grid.size();
  if (std::holds_alternative<Zero>(kind_)) {
    std::fill(out.begin(), out.end(), 0.0);
  } else if (const auto* c = std::get_if<ConstantDensity>(&kind_)) {
    std::fill(out.begin(), out.end(), c->value);
  } else if (const auto* b = std::get_if<SpatialBump>(&kind_)) {
    const double inv = 1.0 / (2.0 * b->width * b->width);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = grid.node(i) - b->center;
      out[i] = b->amplitude * std::exp(-d * d * inv);
    }
  } else {
    const auto& tab = std::get<Tabulated>(kind_);
    require_same_grid(grid, tab.fields.front().grid());
    const auto& ts = tab.times;
    if (t <= ts.front()) {
      std::copy_n(tab.fields.front().values().begin(), n, out.begin());
    } else if (t >= ts.back()) {
      std::copy_n(tab.fields.back().values().begin(), n, out.begin());
    } else {
      const auto it = std::upper_bound(ts.begin(), ts.end(), t);
      const std::size_t k = static_cast<std::size_t>(it - ts.begin());
      const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
      const auto a = tab.fields[k - 1].values();
      const auto c = tab.fields[k].values();
      for (std::size_t i = 0; i < n; ++i) out[i] = (1.0 - w) * a[i] + w * c[i];
    }
  }
}

ScalarField ForceModel::evaluate(const Configuration& phi, double t) const {
  std::vector<double> out(phi.grid().size());
  evaluate(phi.grid(), phi.field().values(), phi.slope().values(), t, out);
  return ScalarField(phi.grid(), std::move(out));
}

namespace {

// Flat-array form of the semi-discrete system shared by rhs, step and
// simulate.
struct System {
  const BodyGrid& grid;
  const ForceModel& force;
  bool compact;
  std::size_t band;
  double eps;
  int orientation;

  mutable std::vector<double> slope, vx, x_force;

  System(const BodyGrid& g, const ForceModel& f, const Section& v, double eps_,
         int orient)
      : grid(g), force(f), compact(v.mode() == SupportMode::compact),
        band(v.band_width()), eps(eps_), orientation(orient), slope(g.size()),
        vx(g.size()), x_force(g.size()) {}

  void operator()(std::span<const double> phi, std::span<const double> v, double t,
                  std::span<double> dphi, std::span<double> dv) const {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    diff_x(phi, h, slope);
    for (std::size_t i = 0; i < n; ++i)
      if (!(orientation * slope[i] >= eps) || !std::isfinite(slope[i]))
        throw SingularStateError(t, i, orientation * slope[i]);
    diff_x(v, h, vx);
    const double c = force.coefficient();
    if (force.is_zero()) {
      for (std::size_t i = 0; i < n; ++i) dv[i] = -2.0 * v[i] * vx[i] / slope[i];
    } else {
      force.evaluate(grid, phi, slope, t, x_force);
      for (std::size_t i = 0; i < n; ++i)
        dv[i] = c * x_force[i] - 2.0 * v[i] * vx[i] / slope[i];
    }
    std::copy(v.begin(), v.end(), dphi.begin());
    if (compact) {
      pin_band(dv, band);
      pin_band(dphi, band);
    }
  }
};

// Rebuild a State from raw arrays, converting embedding failures into
// singular-state errors at time t.
State make_state(const State& like, double t, std::vector<double> phi,
                 std::vector<double> v) {
  const BodyGrid& g = like.phi.grid();
  ScalarField pf(g, std::move(phi));
  std::vector<double> s(g.size());
  diff_x(pf.values(), g.spacing(), s);
  const int orient = like.phi.orientation();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!(orient * s[i] >= like.phi.eps())) throw SingularStateError(t, i, orient * s[i]);
  try {
    Configuration c(std::move(pf), like.phi.eps());
    if (c.orientation() != orient) throw SingularStateError(t, 0, 0.0);
    return State{t, std::move(c), like.v.with_values(ScalarField(g, std::move(v)))};
  } catch (const EmbeddingError& e) {
    throw SingularStateError(t, e.node(), 0.0);
  }
}

State step_impl(const State& st, const System& sys, double dt, Scheme scheme) {
  const std::size_t n = st.phi.grid().size();
  const auto phi = st.phi.field().values();
  const auto v = st.v.values();
  std::vector<double> p1(n), v1(n);
  if (scheme == Scheme::rk4) {
    std::vector<double> k1p(n), k1v(n), k2p(n), k2v(n), k3p(n), k3v(n), k4p(n),
        k4v(n), tp(n), tv(n);
    sys(phi, v, st.t, k1p, k1v);
    auto stage = [&](std::span<const double> kp, std::span<const double> kv,
                     double f, double t, std::span<double> op, std::span<double> ov) {
      for (std::size_t i = 0; i < n; ++i) {
        tp[i] = phi[i] + f * kp[i];
        tv[i] = v[i] + f * kv[i];
      }
      sys(tp, tv, t, op, ov);
    };
    stage(k1p, k1v, 0.5 * dt, st.t + 0.5 * dt, k2p, k2v);
    stage(k2p, k2v, 0.5 * dt, st.t + 0.5 * dt, k3p, k3v);
    stage(k3p, k3v, dt, st.t + dt, k4p, k4v);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      p1[i] = phi[i] + w * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
      v1[i] = v[i] + w * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
  } else {
    // Kick-drift-kick with a predicted velocity in the closing kick, which
    // keeps second order for the velocity-dependent acceleration.
    std::vector<double> dp(n), a0(n), a1(n), vpred(n);
    sys(phi, v, st.t, dp, a0);
    std::vector<double> vhalf(n);
    for (std::size_t i = 0; i < n; ++i) {
      vhalf[i] = v[i] + 0.5 * dt * a0[i];
      vpred[i] = v[i] + dt * a0[i];
      p1[i] = phi[i] + dt * vhalf[i];
    }
    if (sys.compact) {
      pin_band(vhalf, sys.band);
      pin_band(vpred, sys.band);
    }
    sys(p1, vpred, st.t + dt, dp, a1);
    for (std::size_t i = 0; i < n; ++i) v1[i] = vhalf[i] + 0.5 * dt * a1[i];
  }
  if (sys.compact) pin_band(v1, sys.band);
  return make_state(st, st.t + dt, std::move(p1), std::move(v1));
}

void check_state(const State& s) {
  require_same_grid(s.phi.grid(), s.v.grid());
  if (!std::isfinite(s.t)) throw ConstructionError("t", "must be finite");
}

} // namespace

Derivative rhs(const State& state, const ForceModel& force) {
  check_state(state);
  const BodyGrid& g = state.phi.grid();
  System sys(g, force, state.v, state.phi.eps(), state.phi.orientation());
  std::vector<double> dp(g.size()), dv(g.size());
  sys(state.phi.field().values(), state.v.values(), state.t, dp, dv);
  return {state.v.with_values(ScalarField(g, std::move(dp))),
          state.v.with_values(ScalarField(g, std::move(dv)))};
}

State step(const State& state, const ForceModel& force, double dt, Scheme scheme) {
  check_state(state);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConstructionError("dt", "must be positive");
  System sys(state.phi.grid(), force, state.v, state.phi.eps(), state.phi.orientation());
  return step_impl(state, sys, dt, scheme);
}

Diagnostics diagnose(const State& state, const ForceModel& force) {
  const auto& phi = state.phi;
  const auto v = state.v.values();
  const std::size_t n = v.size();
  Diagnostics d{};
  d.t = state.t;
  d.kinetic = kinetic(phi, state.v);
  d.flux = 0.5 * phi.orientation() * (v[n - 1] * v[n - 1] * v[n - 1] - v[0] * v[0] * v[0]);
  d.power = force.is_zero()
                ? 0.0
                : force.coefficient() * metric(phi, Section::free(force.evaluate(phi, state.t)),
                                               state.v);
  d.drift = 0.0;
  d.min_phi_x = phi.min_abs_slope();
  return d;
}

Trajectory simulate(const State& init, const ForceModel& force, double t_end,
                    double dt, Scheme scheme, SupportMode mode) {
  check_state(init);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConstructionError("dt", "must be positive");
  if (!(t_end > init.t)) throw ConstructionError("t_end", "must exceed the initial time");
  const double span = t_end - init.t;
  const double steps_real = span / dt;
  const auto steps = static_cast<long long>(std::llround(steps_real));
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
    throw ConstructionError("dt", "must divide t_end - t into a whole number of steps");

  State start{init.t, init.phi, Section(init.v.field(), mode, init.v.band_width())};
  Trajectory traj;
  traj.mode = mode;
  traj.dt = dt;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.diagnostics.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(start);
  traj.diagnostics.push_back(diagnose(start, force));
  const double k0 = traj.diagnostics.front().kinetic;
  double budget = 0.0;

  System sys(start.phi.grid(), force, start.v, start.phi.eps(), start.phi.orientation());
  for (long long j = 1; j <= steps; ++j) {
    try {
      State next = step_impl(traj.states.back(), sys, dt, scheme);
      next.t = j == steps ? t_end : init.t + static_cast<double>(j) * dt;
      Diagnostics d = diagnose(next, force);
      const Diagnostics& prev = traj.diagnostics.back();
      budget += 0.5 * dt * ((prev.power - prev.flux) + (d.power - d.flux));
      d.drift = d.kinetic - k0 - budget;
      traj.states.push_back(std::move(next));
      traj.diagnostics.push_back(d);
    } catch (const SingularStateError& e) {
      throw SimulationAborted(e, std::move(traj));
    }
  }
  return traj;
}

PathOnQ Trajectory::to_path() const {
  if (states.size() < 3)
    throw ConstructionError("trajectory", "needs at least 3 states to form a path");
  PathSegment seg{states.front().t, states.back().t, {}};
  seg.samples.reserve(states.size());
  for (const auto& s : states) seg.samples.push_back(s.phi);
  return PathOnQ({std::move(seg)}, mode,
                 states.front().v.band_width());
}

double relative_energy_drift(const Trajectory& traj) {
  const double k0 = traj.diagnostics.front().kinetic;
  double worst = 0.0;
  for (const auto& d : traj.diagnostics) worst = std::max(worst, std::abs(d.kinetic - k0));
  return worst / k0;
}

double flux_balance_defect(const Trajectory& traj, double t_from, double t_to) {
  const auto& d = traj.diagnostics;
  const std::size_t m = d.size();
  if (m < 3) throw ConstructionError("trajectory", "needs at least 3 states");
  double total = 0.0;
  double prev_t = 0.0, prev_val = 0.0;
  bool have_prev = false;
  for (std::size_t j = 0; j < m; ++j) {
    double dkdt;
    if (j == 0)
      dkdt = (-3.0 * d[0].kinetic + 4.0 * d[1].kinetic - d[2].kinetic) / (2.0 * traj.dt);
    else if (j + 1 == m)
      dkdt = (3.0 * d[m - 1].kinetic - 4.0 * d[m - 2].kinetic + d[m - 3].kinetic) /
             (2.0 * traj.dt);
    else
      dkdt = (d[j + 1].kinetic - d[j - 1].kinetic) / (2.0 * traj.dt);
    const double val = std::abs(dkdt + d[j].flux - d[j].power);
    const double t = d[j].t;
    if (t < t_from - 1e-12 || t > t_to + 1e-12) continue;
    if (have_prev) total += 0.5 * (t - prev_t) * (val + prev_val);
    prev_t = t;
    prev_val = val;
    have_prev = true;
  }
  return total;
}

} // namespace contmech
