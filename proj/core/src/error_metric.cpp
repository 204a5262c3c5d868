#include "lpinn/error_metric.hpp"

#include "lpinn/errors.hpp"

#include <cmath>
#include <vector>

namespace lpinn {

double relative_l2(std::span<const double> truth,
                   std::span<const double> predicted) {
  if (truth.size() != predicted.size()) {
    throw ShapeError("relative_l2: length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - predicted[i];
    num += d * d;
    den += truth[i] * truth[i];
  }
  if (!(den > 0.0)) {
    throw ContractViolation("relative error undefined: truth has zero norm");
  }
  return std::sqrt(num) / std::sqrt(den);
}

ErrorReport rel_error(const Field& truth, const Field& predicted) {
  if (truth.values.rows() != predicted.values.rows() ||
      truth.values.cols() != predicted.values.cols()) {
    throw ShapeError("rel_error: truth and prediction grids differ");
  }
  if (predicted.frame != Frame::Eulerian || truth.frame != Frame::Eulerian) {
    throw ContractViolation("rel_error: interpolate to the Eulerian grid first");
  }
  std::vector<double> a;
  std::vector<double> b;
  for (Eigen::Index j = 1; j < truth.values.rows(); ++j) {
    for (Eigen::Index i = 1; i < truth.values.cols(); ++i) {
      a.push_back(truth.values(j, i));
      b.push_back(predicted.values(j, i));
    }
  }
  ErrorReport r;
  r.rel_error = relative_l2(a, b);
  r.points = a.size();
  return r;
}

}  // namespace lpinn
