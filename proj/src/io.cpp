#include "contmech/io.hpp"

#include "contmech/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace contmech::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& cell, std::size_t line) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConstructionError("csv", "bad number '" + cell + "' on line " +
                                       std::to_string(line));
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

} // namespace

void write_field_csv(std::ostream& os, const ScalarField& f) {
  os << "x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    os << format_double(f.grid().node(i)) << ',' << format_double(f[i]) << '\n';
}

ScalarField read_field_csv(std::istream& is, const BodyGrid& grid) {
  std::string line;
  if (!std::getline(is, line) || split(line) != std::vector<std::string>{"x", "value"})
    throw ConstructionError("csv", "expected header x,value");
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 2)
      throw ConstructionError("csv", "expected 2 columns on line " + std::to_string(lineno));
    const double x = parse_double(cells[0], lineno);
    if (values.size() >= grid.size() || x != grid.node(values.size()))
      throw ConstructionError("csv", "node coordinate mismatch on line " +
                                         std::to_string(lineno));
    values.push_back(parse_double(cells[1], lineno));
  }
  return ScalarField(grid, std::move(values));
}

void write_matrix_csv(std::ostream& os, const BodyGrid& grid,
                      const std::vector<double>& times,
                      const std::vector<const ScalarField*>& rows) {
  if (times.size() != rows.size())
    throw ConstructionError("rows", "one time per row required");
  os << 't';
  for (std::size_t i = 0; i < grid.size(); ++i) os << ',' << format_double(grid.node(i));
  os << '\n';
  for (std::size_t j = 0; j < rows.size(); ++j) {
    require_same_grid(grid, rows[j]->grid());
    os << format_double(times[j]);
    for (double v : rows[j]->values()) os << ',' << format_double(v);
    os << '\n';
  }
}

Matrix read_matrix_csv(std::istream& is) {
  Matrix m;
  std::string line;
  if (!std::getline(is, line)) throw ConstructionError("csv", "empty matrix");
  const auto head = split(line);
  if (head.empty() || head.front() != "t") throw ConstructionError("csv", "expected header t,...");
  for (std::size_t i = 1; i < head.size(); ++i) m.header.push_back(parse_double(head[i], 1));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != head.size())
      throw ConstructionError("csv", "ragged row on line " + std::to_string(lineno));
    m.times.push_back(parse_double(cells[0], lineno));
    std::vector<double> row;
    row.reserve(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i], lineno));
    m.rows.push_back(std::move(row));
  }
  return m;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,kinetic,flux,min_phi_x\n";
  for (const auto& d : traj.diagnostics)
    os << format_double(d.t) << ',' << format_double(d.kinetic) << ','
       << format_double(d.flux) << ',' << format_double(d.min_phi_x) << '\n';
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,kinetic,flux,power,drift,min_phi_x\n";
  for (const auto& d : traj.diagnostics)
    os << format_double(d.t) << ',' << format_double(d.kinetic) << ','
       << format_double(d.flux) << ',' << format_double(d.power) << ','
       << format_double(d.drift) << ',' << format_double(d.min_phi_x) << '\n';
}

} // namespace contmech::io
