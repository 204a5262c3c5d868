#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace lpinn {

/// Periodic 3-point Lagrange interpolation from a moving grid.
///
/// `moving_x` are node positions in label order, possibly shifted by any
/// multiple of the period. They must be strictly increasing and span less
/// than one period; otherwise CharacteristicCrossing is thrown. Each target
/// uses the quadratic through its nearest node and that node's two
/// neighbours, with periodic ghost nodes across the seam.
std::vector<double> interp_quadratic(std::span<const double> moving_x,
                                     std::span<const double> w_on_moving,
                                     std::span<const double> eulerian_x,
                                     double period = 2.0 * std::numbers::pi);

}  // namespace lpinn
