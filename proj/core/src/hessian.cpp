#include "lpinn/hessian.hpp"

#include "lpinn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lpinn {

namespace {

void project_out(Eigen::VectorXd& v, const Eigen::VectorXd* basis) {
  if (basis) v -= basis->dot(v) * *basis;
}

EigenPair power_iteration(const HessianOperator& h, Eigen::Index dim,
                          const PowerIterationOptions& opt,
                          const Eigen::VectorXd* deflate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);
  project_out(v, deflate);
  v.normalize();

  EigenPair pair;
  double previous = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::VectorXd hv = h(v);
    project_out(hv, deflate);
    const double lambda = v.dot(hv);
    const double residual = (hv - lambda * v).norm();
    pair.value = lambda;
    pair.vector = v;
    pair.iterations = it;

    const double scale = std::max(1.0, std::abs(lambda));
    const bool stable = it > 1 && std::abs(lambda - previous) <
                                      opt.rayleigh_tol * std::max(std::abs(lambda), 1e-300);
    if (stable && residual <= opt.residual_tol * scale) {
      pair.converged = true;
      return pair;
    }
    previous = lambda;
    const double norm = hv.norm();
    if (!(norm > 0.0)) {
      // v lies in the null space; zero is the eigenvalue.
      pair.converged = true;
      return pair;
    }
    v = hv / norm;
    project_out(v, deflate);
    v.normalize();
  }
  return pair;
}

}  // namespace

HessianTop2 hessian_top2(const HessianOperator& hessian, Eigen::Index dim,
                         const PowerIterationOptions& options) {
  if (dim < 2) throw ContractViolation("hessian_top2 needs dimension >= 2");
  HessianTop2 out;
  out.first = power_iteration(hessian, dim, options, nullptr, options.seed);
  out.second = power_iteration(hessian, dim, options, &out.first.vector,
                               options.seed + 1);
  return out;
}

HessianTop2 hessian_top2(const GradientFn& grad, const Eigen::VectorXd& theta,
                         const PowerIterationOptions& options) {
  const double step = default_hvp_step(theta);
  return hessian_top2(
      [&](const Eigen::VectorXd& v) { return hvp(grad, theta, v, step); },
      theta.size(), options);
}

}  // namespace lpinn
