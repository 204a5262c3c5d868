#include "lpinn/snapshot_svd.hpp"

#include "lpinn/errors.hpp"

#include <Eigen/SVD>

namespace lpinn {

std::vector<double> snapshot_svd(const Field& field) {
  if (field.frame != Frame::Eulerian) {
    throw ContractViolation("snapshot_svd expects an Eulerian field");
  }
  const Eigen::MatrixXd snapshots = field.values.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(snapshots);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t modes_for_energy(std::span<const double> sv, double fraction) {
  double total = 0.0;
  for (double s : sv) total += s * s;
  if (!(total > 0.0)) return 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    acc += sv[i] * sv[i];
    if (acc >= fraction * total) return i + 1;
  }
  return sv.size();
}

}  // namespace lpinn
