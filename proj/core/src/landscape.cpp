#include "lpinn/landscape.hpp"

#include "lpinn/errors.hpp"

#include <cmath>
#include <limits>

namespace lpinn {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  // Exact center for odd grids.
  if (n % 2 == 1 && lo == -hi) v[static_cast<std::size_t>(n / 2)] = 0.0;
  return v;
}

}  // namespace

LandscapeGrid loss_landscape(const LossFn& loss, const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& delta,
                             const Eigen::VectorXd& eta,
                             const LandscapeOptions& opt) {
  if (opt.n_grid < 3) throw ContractViolation("landscape grid needs n_grid >= 3");
  if (delta.size() != theta.size() || eta.size() != theta.size()) {
    throw ShapeError("landscape directions differ in length from theta");
  }
  if (std::abs(delta.norm() - 1.0) > 1e-8 || std::abs(eta.norm() - 1.0) > 1e-8) {
    throw ContractViolation("landscape directions must be unit vectors");
  }
  LandscapeGrid g;
  g.alphas = linspace(-opt.alpha0, opt.alpha0, opt.n_grid);
  g.betas = linspace(-opt.beta0, opt.beta0, opt.n_grid);
  g.log_loss.resize(opt.n_grid, opt.n_grid);
  for (int i = 0; i < opt.n_grid; ++i) {
    for (int j = 0; j < opt.n_grid; ++j) {
      const double a = g.alphas[static_cast<std::size_t>(i)];
      const double b = g.betas[static_cast<std::size_t>(j)];
      double value = std::numeric_limits<double>::infinity();
      try {
        const double l = loss(theta + a * delta + b * eta);
        if (std::isfinite(l)) value = std::log(l);
      } catch (const Error&) {
        // Recorded as the +inf sentinel.
      }
      g.log_loss(i, j) = value;
    }
  }
  const double ha = g.alphas[1] - g.alphas[0];
  const double hb = g.betas[1] - g.betas[0];
  g.ruggedness = ruggedness(g.log_loss, ha, hb);
  return g;
}

Eigen::MatrixXd discrete_laplacian(const Eigen::MatrixXd& v, double ha, double hb) {
  const Eigen::Index n = v.rows();
  const Eigen::Index m = v.cols();
  if (n < 3 || m < 3) throw ContractViolation("Laplacian needs a 3x3 grid");
  Eigen::MatrixXd lap(n - 2, m - 2);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    for (Eigen::Index j = 1; j + 1 < m; ++j) {
      lap(i - 1, j - 1) = (v(i + 1, j) - 2.0 * v(i, j) + v(i - 1, j)) / (ha * ha) +
                          (v(i, j + 1) - 2.0 * v(i, j) + v(i, j - 1)) / (hb * hb);
    }
  }
  return lap;
}

double ruggedness(const Eigen::MatrixXd& v, double ha, double hb) {
  const Eigen::MatrixXd lap = discrete_laplacian(v, ha, hb);
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index i = 0; i < lap.rows(); ++i) {
    for (Eigen::Index j = 0; j < lap.cols(); ++j) {
      if (std::isfinite(lap(i, j))) {
        sum += std::abs(lap(i, j));
        ++count;
      }
    }
  }
  return count ? sum / static_cast<double>(count)
               : std::numeric_limits<double>::infinity();
}

}  // namespace lpinn
