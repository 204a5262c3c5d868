#pragma once

#include "lpinn/field.hpp"
#include "lpinn/network.hpp"

namespace lpinn {

/// Network output w(x_i, t_j) on the Eulerian grid.
Field predict(const PinnModel& model, const ParamVector& params, const Grid& grid);

/// Lagrangian field: labels x0 = grid.x, positions(j, i) = x(x0_i, t_j) and
/// values(j, i) = w(x0_i, t_j).
Field predict_lagrangian(const LpinnModel& model, const ParamVector& params,
                         const Grid& grid);

/// Interpolates each time slice of a Lagrangian field onto `grid.x` with
/// interp_quadratic.
Field to_eulerian(const Field& lagrangian, const Grid& grid);

/// Eulerian prediction for either model family.
Field predict_eulerian(const Model& model, const ParamVector& params,
                       const Grid& grid);

}  // namespace lpinn
