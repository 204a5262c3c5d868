#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace lpinn {

using LossFn = std::function<double(const Eigen::VectorXd&)>;

struct LandscapeOptions {
  double alpha0 = 0.5;
  double beta0 = 0.5;
  int n_grid = 21;
};

/// log L(theta + alpha delta + beta eta) on an n x n grid.
struct LandscapeGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  Eigen::MatrixXd log_loss;  // (alpha index, beta index); +inf marks a failed point
  double ruggedness = 0.0;
};

/// Evaluates the 2-D slice. Throws ContractViolation unless n_grid >= 3 and
/// both directions are unit vectors of the parameter length.
LandscapeGrid loss_landscape(const LossFn& loss, const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& delta,
                             const Eigen::VectorXd& eta,
                             const LandscapeOptions& options = {});

/// 5-point Laplacian at interior cells, (n-2) x (n-2).
Eigen::MatrixXd discrete_laplacian(const Eigen::MatrixXd& values, double h_alpha,
                                   double h_beta);

/// Mean |discrete Laplacian| over interior cells with finite stencils.
double ruggedness(const Eigen::MatrixXd& values, double h_alpha, double h_beta);

}  // namespace lpinn
