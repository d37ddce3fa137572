#pragma once

// Method-of-lines integration of the equation of motion
//
//   gamma_tt = c X(gamma) - 2 gamma_t gamma_xt / gamma_x,
//
// where X is the pointwise force density and c the force coefficient
// (1 by default).

#include "contmech/errors.hpp"
#include "contmech/grid.hpp"
#include "contmech/path.hpp"

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace contmech {

enum class Scheme { rk4, leapfrog };

struct State {
  double t;
  Configuration phi;
  Section v;
};

/// Pointwise force density sigma(x, phi, phi_x, t).
class ForceModel {
public:
  struct Zero {};
  struct ConstantDensity {
    double value;
  };
  /// amplitude * exp(-(x - center)^2 / (2 width^2)) in body coordinates.
  struct SpatialBump {
    double amplitude;
    double center;
    double width;
  };
  /// Piecewise-linear in time between tabulated fields, held constant
  /// outside the table.
  struct Tabulated {
    std::vector<double> times;
    std::vector<ScalarField> fields;
  };
  using Kind = std::variant<Zero, ConstantDensity, SpatialBump, Tabulated>;

  ForceModel() = default;
  explicit ForceModel(Kind kind, double coefficient = 1.0);

  static ForceModel zero() { return ForceModel(Zero{}); }

  const Kind& kind() const noexcept { return kind_; }
  double coefficient() const noexcept { return coefficient_; }
  std::string name() const;
  bool is_zero() const noexcept { return std::holds_alternative<Zero>(kind_); }

  /// The density X, without the coefficient.
  ScalarField evaluate(const Configuration& phi, double t) const;
  void evaluate(const BodyGrid& grid, std::span<const double> phi,
                std::span<const double> slope, double t,
                std::span<double> out) const;

private:
  Kind kind_ = Zero{};
  double coefficient_ = 1.0;
};

struct Derivative {
  Section dphi;
  Section dv;
};

/// dphi = v, dv = c X - 2 v v_x / phi_x. The support convention is taken from
/// state.v; compact mode zeroes dv on the band. Throws SingularStateError
/// if |phi_x| < eps_emb or phi_x flips sign at some node.
Derivative rhs(const State& state, const ForceModel& force);

/// One step; the post-state is embedding-checked and a failure is thrown as
/// SingularStateError at the post-step time.
State step(const State& state, const ForceModel& force, double dt,
           Scheme scheme = Scheme::rk4);

struct Diagnostics {
  double t;
  double kinetic;
  double flux;      ///< (1/2) sgn(phi_x) [v^3] over the two end nodes
  double power;     ///< c int X v |phi_x| dx
  double drift;     ///< K(t) - K(0) - int_0^t (power - flux) dt'
  double min_phi_x; ///< min |phi_x|
};

struct Trajectory {
  std::vector<State> states;
  std::vector<Diagnostics> diagnostics;
  SupportMode mode = SupportMode::free;
  double dt = 0.0;

  /// Single-segment path through every recorded state.
  PathOnQ to_path() const;
};

/// Raised by simulate; carries everything recorded up to the last accepted
/// step.
class SimulationAborted : public SingularStateError {
public:
  SimulationAborted(const SingularStateError& cause, Trajectory partial)
      : SingularStateError(cause),
        partial_(std::make_shared<const Trajectory>(std::move(partial))) {}

  const Trajectory& partial() const noexcept { return *partial_; }

private:
  std::shared_ptr<const Trajectory> partial_;
};

/// Integrate from init.t to t_end with a uniform step; (t_end - t)/dt must be
/// an integer to within 1e-9 relative. `mode` re-wraps init.v, so a compact
/// run needs a velocity that already vanishes on the band.
Trajectory simulate(const State& init, const ForceModel& force, double t_end,
                    double dt, Scheme scheme = Scheme::rk4,
                    SupportMode mode = SupportMode::free);

Diagnostics diagnose(const State& state, const ForceModel& force);

/// max_t |K(t) - K(0)| / K(0).
double relative_energy_drift(const Trajectory& traj);

/// int_{t_from}^{t_to} |dK/dt + flux - power| dt, with dK/dt from central
/// differences of the recorded kinetic energy.
double flux_balance_defect(const Trajectory& traj, double t_from, double t_to);

} // namespace contmech
