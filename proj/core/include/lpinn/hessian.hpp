#pragma once

#include "lpinn/hvp.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace lpinn {

/// v -> H v for a fixed Hessian.
using HessianOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PowerIterationOptions {
  int max_iterations = 200;
  double rayleigh_tol = 1e-6;   // relative change of successive quotients
  double residual_tol = 1e-5;   // ||Hv - lambda v|| / max(1, |lambda|)
  std::uint64_t seed = 7;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm
  int iterations = 0;
  bool converged = false;
};

/// Dominant (by magnitude) and next eigenpair. When either iteration hits
/// max_iterations the last iterates are returned with converged = false.
struct HessianTop2 {
  EigenPair first;
  EigenPair second;
  bool converged() const { return first.converged && second.converged; }
};

/// Power iteration for the first pair, then power iteration with the first
/// eigenvector projected out for the second.
HessianTop2 hessian_top2(const HessianOperator& hessian, Eigen::Index dim,
                         const PowerIterationOptions& options = {});

/// Same, with H v from central differences of `grad` at theta.
HessianTop2 hessian_top2(const GradientFn& grad, const Eigen::VectorXd& theta,
                         const PowerIterationOptions& options = {});

}  // namespace lpinn
