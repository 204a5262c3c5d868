#include "lpinn/param_vector.hpp"

#include "lpinn/errors.hpp"

#include <utility>

namespace lpinn {

std::size_t ParamLayout::add(std::string name, Eigen::Index rows,
                             Eigen::Index cols) {
  if (rows <= 0 || cols <= 0) {
    throw ShapeError("parameter block '" + name + "' has an empty shape");
  }
  ParamBlock b{std::move(name), total_, rows, cols};
  total_ += b.size();
  blocks_.push_back(std::move(b));
  return blocks_.size() - 1;
}

bool ParamLayout::operator==(const ParamLayout& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& a = blocks_[i];
    const auto& b = other.blocks_[i];
    if (a.name != b.name || a.offset != b.offset || a.rows != b.rows ||
        a.cols != b.cols) {
      return false;
    }
  }
  return true;
}

ParamVector::ParamVector(ParamLayout layout)
    : layout_(std::move(layout)),
      values_(Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(layout_.total_size()))) {}

ParamVector::ParamVector(ParamLayout layout, Eigen::VectorXd values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != layout_.total_size()) {
    throw ShapeError("parameter vector length " +
                     std::to_string(values_.size()) + " does not match layout size " +
                     std::to_string(layout_.total_size()));
  }
}

Eigen::Map<RowMajorMatrix> ParamVector::block(std::size_t i) {
  const auto& b = layout_.block(i);
  return {values_.data() + b.offset, b.rows, b.cols};
}

Eigen::Map<const RowMajorMatrix> ParamVector::block(std::size_t i) const {
  const auto& b = layout_.block(i);
  return {values_.data() + b.offset, b.rows, b.cols};
}

ParamVector ParamVector::with_values(const Eigen::VectorXd& values) const {
  return ParamVector(layout_, values);
}

}  // namespace lpinn
