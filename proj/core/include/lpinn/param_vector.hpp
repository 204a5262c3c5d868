#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace lpinn {

/// One named, row-major block inside a flat parameter vector.
struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows * cols); }
};

/// Ordered list of blocks. Frozen once a model has been built from it.
class ParamLayout {
 public:
  /// Appends a block and returns its index.
  std::size_t add(std::string name, Eigen::Index rows, Eigen::Index cols);

  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  const ParamBlock& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t total_size() const { return total_; }

  bool operator==(const ParamLayout& other) const;

 private:
  std::vector<ParamBlock> blocks_;
  std::size_t total_ = 0;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Flat trainable parameters together with their layout.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(ParamLayout layout);
  ParamVector(ParamLayout layout, Eigen::VectorXd values);

  const ParamLayout& layout() const { return layout_; }
  std::size_t size() const { return layout_.total_size(); }

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }

  Eigen::Map<RowMajorMatrix> block(std::size_t i);
  Eigen::Map<const RowMajorMatrix> block(std::size_t i) const;

  /// Same layout, different values. Throws ShapeError on length mismatch.
  ParamVector with_values(const Eigen::VectorXd& values) const;

 private:
  ParamLayout layout_;
  Eigen::VectorXd values_;
};

}  // namespace lpinn
