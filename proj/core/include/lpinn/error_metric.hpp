#pragma once

#include "lpinn/field.hpp"

#include <span>
#include <string>

namespace lpinn {

struct ErrorReport {
  double rel_error = 0.0;
  std::string interpolation = "none";
  std::string excluded = "t0_slice_and_x0_column";
  std::size_t points = 0;
};

/// ||truth - predicted||_2 / ||truth||_2 over flattened samples. Throws
/// ContractViolation when the truth has zero norm (the ratio is undefined).
double relative_l2(std::span<const double> truth,
                   std::span<const double> predicted);

/// Relative error over every grid point except the t = 0 slice and the x = 0
/// column, which the initial condition and periodic embedding pin. Both
/// fields must share the Eulerian grid.
ErrorReport rel_error(const Field& truth, const Field& predicted);

}  // namespace lpinn
