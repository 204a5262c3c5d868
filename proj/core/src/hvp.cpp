#include "lpinn/hvp.hpp"

#include "lpinn/errors.hpp"

namespace lpinn {

double default_hvp_step(const Eigen::VectorXd& theta) {
  const double inf_norm = theta.size() ? theta.cwiseAbs().maxCoeff() : 0.0;
  return 1e-3 * (1.0 + inf_norm);
}

Eigen::VectorXd hvp(const GradientFn& grad, const Eigen::VectorXd& theta,
                    const Eigen::VectorXd& v, std::optional<double> eps) {
  if (v.size() != theta.size()) {
    throw ShapeError("hvp: direction length differs from parameter length");
  }
  const double norm = v.norm();
  if (!(norm > 0.0)) throw ContractViolation("hvp: zero direction vector");
  const double h = eps.value_or(default_hvp_step(theta));
  if (!(h > 0.0)) throw ContractViolation("hvp: step must be positive");
  const Eigen::VectorXd unit = v / norm;
  const Eigen::VectorXd plus = grad(theta + h * unit);
  const Eigen::VectorXd minus = grad(theta - h * unit);
  return (plus - minus) * (norm / (2.0 * h));
}

}  // namespace lpinn
