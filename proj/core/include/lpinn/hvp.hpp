#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>

namespace lpinn {

/// theta -> dL/dtheta.
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Default central-difference step, 1e-3 * (1 + |theta|_inf).
double default_hvp_step(const Eigen::VectorXd& theta);

/// Hessian-vector product by central differences of exact gradients along
/// the unit direction v/|v|, rescaled by |v|. The error is O(eps^2) and
/// vanishes for quadratic losses. Throws ContractViolation for a zero
/// direction or non-positive step.
Eigen::VectorXd hvp(const GradientFn& grad, const Eigen::VectorXd& theta,
                    const Eigen::VectorXd& v,
                    std::optional<double> eps = std::nullopt);

}  // namespace lpinn
