#pragma once

#include "lpinn/param_vector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace lpinn {

/// Dense 2-D array used on the tape: rows are features, columns are samples.
using Array = Eigen::ArrayXXd;

/// Handle to a node recorded on a Tape. A default-constructed Var is "absent"
/// and is used by jets to mark a channel that is identically zero.
struct Var {
  std::int32_t id = -1;
  bool valid() const { return id >= 0; }
};

enum class Op : std::uint8_t {
  Constant,
  Param,
  Add,
  Sub,
  Mul,
  Div,
  Affine,  // scale * a + shift
  Tanh,
  Sin,
  Cos,
  Square,
  MatMul,
  AddBias,  // a + b broadcast over columns, b is rows x 1
  Sum,      // -> 1 x 1
  ConcatRows,
};

/// Append-only record of primitive array operations over bound parameters.
///
/// Every operation is evaluated eagerly when it is recorded, so values are
/// available immediately. `backward` runs reverse mode over the recorded
/// nodes and returns the gradient with the layout of the bound ParamVector.
/// A Tape is single-threaded; use one per worker.
class Tape {
 public:
  Tape() = default;
  explicit Tape(const ParamVector& params);

  Var constant(Array value);
  /// Leaf for parameter block `block` of the bound ParamVector. Repeated
  /// calls return the same node.
  Var param(std::size_t block);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var affine(Var a, double scale, double shift);
  Var scale(Var a, double s) { return affine(a, s, 0.0); }
  Var shift(Var a, double s) { return affine(a, 1.0, s); }
  Var tanh(Var a);
  Var sin(Var a);
  Var cos(Var a);
  Var square(Var a);
  Var matmul(Var w, Var x);
  Var add_bias(Var a, Var bias);
  Var sum(Var a);
  Var concat_rows(std::span<const Var> parts);
  Var concat_rows(std::initializer_list<Var> parts) {
    return concat_rows(std::span<const Var>(parts.begin(), parts.size()));
  }

  const Array& value(Var v) const;
  /// Value of a 1x1 node.
  double scalar(Var v) const;
  Op op(Var v) const;
  std::size_t size() const { return nodes_.size(); }
  const ParamLayout& layout() const { return layout_; }

  /// dL/dtheta for a scalar node. Throws ContractViolation otherwise.
  ParamVector backward(Var loss) const;

  /// Recomputes every non-leaf node from its operands.
  void replay();
  /// Rebinds parameter leaves to `params` (same layout) and replays.
  void replay(const ParamVector& params);

 private:
  struct Node {
    Op op = Op::Constant;
    bool needs_grad = false;
    std::int32_t a = -1;
    std::int32_t b = -1;
    double s0 = 0.0;
    double s1 = 0.0;
    std::vector<std::int32_t> parts;  // ConcatRows operands, Param block id
    Array value;
  };

  Var push(Node node);
  const Node& node(Var v) const;
  void compute(Node& n);
  void check_same_shape(Var a, Var b, const char* what) const;

  std::vector<Node> nodes_;
  ParamLayout layout_;
  bool bound_ = false;
  std::vector<double> param_values_;
  std::vector<std::int32_t> param_nodes_;  // block index -> node id (-1 unset)
};

}  // namespace lpinn
