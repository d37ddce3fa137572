#pragma once

// CSV text for fields, per-knot matrices and diagnostics. Numbers are written
// with 17 significant digits so that reading them back is bit-exact.

#include "contmech/dynamics.hpp"
#include "contmech/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace contmech::io {

/// printf("%.17g").
std::string format_double(double v);

/// Header "x,value", then one row per node.
void write_field_csv(std::ostream& os, const ScalarField& f);
/// Inverse of write_field_csv; node coordinates must match `grid` exactly.
ScalarField read_field_csv(std::istream& is, const BodyGrid& grid);

/// Rows of (t, values...) under a header "t,x_0,...,x_{n-1}".
void write_matrix_csv(std::ostream& os, const BodyGrid& grid,
                      const std::vector<double>& times,
                      const std::vector<const ScalarField*>& rows);

struct Matrix {
  std::vector<double> header; // node coordinates
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
};
Matrix read_matrix_csv(std::istream& is);

/// t,kinetic,flux,min_phi_x
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// t,kinetic,flux,power,drift,min_phi_x
void write_diagnostics_csv(std::ostream& os, const Trajectory& traj);

} // namespace contmech::io
