#pragma once

#include "lpinn/physics.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lpinn {

enum class Frame { Eulerian, Lagrangian };

/// Space-time sample locations: x_i = i L / nx, t_j = j T / (nt - 1).
struct Grid {
  std::vector<double> x;
  std::vector<double> t;
  Domain domain;

  std::size_t nx() const { return x.size(); }
  std::size_t nt() const { return t.size(); }
};

/// Throws ContractViolation if nx < 2 or nt < 2.
Grid make_grid(std::size_t nx, std::size_t nt, const Domain& domain = {});

/// State values on a space-time grid; values(j, i) is w at (x_i, t_j).
/// For the Lagrangian frame x_grid holds the labels x0 and positions(j, i)
/// the location of label i at time t_j.
struct Field {
  Eigen::MatrixXd values;
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  Domain domain;
  Frame frame = Frame::Eulerian;
  Eigen::MatrixXd positions;

  std::size_t nx() const { return x_grid.size(); }
  std::size_t nt() const { return t_grid.size(); }
};

Field make_field(const Grid& grid);

/// Header row "t,<x_0>,...,<x_{nx-1}>", then one row per time slice
/// "t_j,<w_0j>,...". Lines starting with '#' are comments. Floats use 17
/// significant digits.
void write_field_csv(std::ostream& out, const Field& field,
                     const std::vector<std::string>& comments = {});
Field read_field_csv(std::istream& in, const Domain& domain = {});

/// Little-endian native layout: int64 nx, int64 nt, double x_min, double
/// x_max, double t_final, then nt * nx row-major doubles.
void write_field_binary(std::ostream& out, const Field& field);
Field read_field_binary(std::istream& in);

void save_field_csv(const std::filesystem::path& path, const Field& field,
                    const std::vector<std::string>& comments = {});
void save_field_binary(const std::filesystem::path& path, const Field& field);

}  // namespace lpinn
