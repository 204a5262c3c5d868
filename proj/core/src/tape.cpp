#include "lpinn/tape.hpp"

#include "lpinn/errors.hpp"

#include <string>
#include <utility>

namespace lpinn {

namespace {

std::string shape_str(const Array& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

template <typename Expr>
void accumulate(Array& slot, bool& has, const Expr& contribution) {
  if (has) {
    slot += contribution;
  } else {
    slot = contribution;
    has = true;
  }
}

// Vectorizable tanh. Eigen maps double tanh to scalar libm calls, which
// dominated the forward pass. Odd series near 0 keeps full relative accuracy
// where 1 - e^{-2|x|} would cancel.
Array tanh_array(const Array& x) {
  const Array a = x.abs();
  const Array e = (-2.0 * a).exp();
  const Array x2 = x.square();
  return (a < 0.05).select(
      x * (1.0 + x2 * (-1.0 / 3.0 +
                       x2 * (2.0 / 15.0 +
                             x2 * (-17.0 / 315.0 + x2 * (62.0 / 2835.0))))),
      x.sign() * (1.0 - e) / (1.0 + e));
}

}  // namespace

Tape::Tape(const ParamVector& params)
    : layout_(params.layout()),
      bound_(true),
      param_values_(params.values().data(),
                    params.values().data() + params.values().size()),
      param_nodes_(params.layout().blocks().size(), -1) {}

Var Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw ContractViolation("invalid tape variable");
  }
  return nodes_[static_cast<std::size_t>(v.id)];
}

const Array& Tape::value(Var v) const { return node(v).value; }

double Tape::scalar(Var v) const {
  const auto& val = value(v);
  if (val.rows() != 1 || val.cols() != 1) {
    throw ContractViolation("expected a scalar node, got " + shape_str(val));
  }
  return val(0, 0);
}

Op Tape::op(Var v) const { return node(v).op; }

void Tape::check_same_shape(Var a, Var b, const char* what) const {
  const auto& x = value(a);
  const auto& y = value(b);
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError(std::string(what) + ": shape " + shape_str(x) + " vs " +
                     shape_str(y));
  }
}

Var Tape::constant(Array value) {
  Node n;
  n.op = Op::Constant;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::param(std::size_t block) {
  if (!bound_) throw ContractViolation("tape has no bound parameters");
  if (block >= param_nodes_.size()) {
    throw ContractViolation("parameter block index out of range");
  }
  if (param_nodes_[block] >= 0) return Var{param_nodes_[block]};
  Node n;
  n.op = Op::Param;
  n.needs_grad = true;
  n.parts = {static_cast<std::int32_t>(block)};
  compute(n);
  Var v = push(std::move(n));
  param_nodes_[block] = v.id;
  return v;
}

#define LPINN_BINARY(fn, opcode, label)              \
  Var Tape::fn(Var a, Var b) {                       \
    check_same_shape(a, b, label);                   \
    Node n;                                          \
    n.op = opcode;                                   \
    n.a = a.id;                                      \
    n.b = b.id;                                      \
    n.needs_grad = node(a).needs_grad || node(b).needs_grad; \
    compute(n);                                      \
    return push(std::move(n));                       \
  }

LPINN_BINARY(add, Op::Add, "add")
LPINN_BINARY(sub, Op::Sub, "sub")
LPINN_BINARY(mul, Op::Mul, "mul")
LPINN_BINARY(div, Op::Div, "div")
#undef LPINN_BINARY

#define LPINN_UNARY(fn, opcode)          \
  Var Tape::fn(Var a) {                  \
    Node n;                              \
    n.op = opcode;                       \
    n.a = a.id;                          \
    n.needs_grad = node(a).needs_grad;   \
    compute(n);                          \
    return push(std::move(n));           \
  }

LPINN_UNARY(tanh, Op::Tanh)
LPINN_UNARY(sin, Op::Sin)
LPINN_UNARY(cos, Op::Cos)
LPINN_UNARY(square, Op::Square)
LPINN_UNARY(sum, Op::Sum)
#undef LPINN_UNARY

Var Tape::affine(Var a, double scale, double shift) {
  Node n;
  n.op = Op::Affine;
  n.a = a.id;
  n.s0 = scale;
  n.s1 = shift;
  n.needs_grad = node(a).needs_grad;
  compute(n);
  return push(std::move(n));
}

Var Tape::matmul(Var w, Var x) {
  const auto& wv = value(w);
  const auto& xv = value(x);
  if (wv.cols() != xv.rows()) {
    throw ShapeError("matmul: " + shape_str(wv) + " times " + shape_str(xv));
  }
  Node n;
  n.op = Op::MatMul;
  n.a = w.id;
  n.b = x.id;
  n.needs_grad = node(w).needs_grad || node(x).needs_grad;
  compute(n);
  return push(std::move(n));
}

Var Tape::add_bias(Var a, Var bias) {
  const auto& av = value(a);
  const auto& bv = value(bias);
  if (bv.cols() != 1 || bv.rows() != av.rows()) {
    throw ShapeError("add_bias: " + shape_str(av) + " with bias " +
                     shape_str(bv));
  }
  Node n;
  n.op = Op::AddBias;
  n.a = a.id;
  n.b = bias.id;
  n.needs_grad = node(a).needs_grad || node(bias).needs_grad;
  compute(n);
  return push(std::move(n));
}

Var Tape::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no operands");
  Node n;
  n.op = Op::ConcatRows;
  const auto cols = value(parts.front()).cols();
  for (Var p : parts) {
    if (value(p).cols() != cols) {
      throw ShapeError("concat_rows: column count mismatch");
    }
    n.parts.push_back(p.id);
    n.needs_grad = n.needs_grad || node(p).needs_grad;
  }
  compute(n);
  return push(std::move(n));
}

void Tape::compute(Node& n) {
  auto in = [this](std::int32_t id) -> const Array& {
    return nodes_[static_cast<std::size_t>(id)].value;
  };
  switch (n.op) {
    case Op::Constant:
      break;
    case Op::Param: {
      const auto& b = layout_.block(static_cast<std::size_t>(n.parts[0]));
      n.value = Eigen::Map<const RowMajorMatrix>(
                    param_values_.data() + b.offset, b.rows, b.cols)
                    .array();
      break;
    }
    case Op::Add:
      n.value = in(n.a) + in(n.b);
      break;
    case Op::Sub:
      n.value = in(n.a) - in(n.b);
      break;
    case Op::Mul:
      n.value = in(n.a) * in(n.b);
      break;
    case Op::Div:
      n.value = in(n.a) / in(n.b);
      break;
    case Op::Affine:
      n.value = n.s0 * in(n.a) + n.s1;
      break;
    case Op::Tanh:
      n.value = tanh_array(in(n.a));
      break;
    case Op::Sin:
      n.value = in(n.a).sin();
      break;
    case Op::Cos:
      n.value = in(n.a).cos();
      break;
    case Op::Square:
      n.value = in(n.a).square();
      break;
    case Op::MatMul:
      n.value.resize(in(n.a).rows(), in(n.b).cols());
      n.value.matrix().noalias() = in(n.a).matrix() * in(n.b).matrix();
      break;
    case Op::AddBias:
      n.value = in(n.a).colwise() + in(n.b).col(0);
      break;
    case Op::Sum: {
      // Plain left-to-right accumulation so results do not depend on
      // vectorization width.
      const Array& x = in(n.a);
      const double* p = x.data();
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) acc += p[i];
      n.value.resize(1, 1);
      n.value(0, 0) = acc;
      break;
    }
    case Op::ConcatRows: {
      Eigen::Index rows = 0;
      for (auto id : n.parts) rows += in(id).rows();
      n.value.resize(rows, in(n.parts.front()).cols());
      Eigen::Index r = 0;
      for (auto id : n.parts) {
        const auto& p = in(id);
        n.value.middleRows(r, p.rows()) = p;
        r += p.rows();
      }
      break;
    }
  }
}

void Tape::replay() {
  for (auto& n : nodes_) compute(n);
}

void Tape::replay(const ParamVector& params) {
  if (!bound_ || !(params.layout() == layout_)) {
    throw ShapeError("replay: parameter layout differs from the bound layout");
  }
  param_values_.assign(params.values().data(),
                       params.values().data() + params.values().size());
  replay();
}

ParamVector Tape::backward(Var loss) const {
  const auto& root = node(loss);
  if (root.value.rows() != 1 || root.value.cols() != 1) {
    throw ContractViolation("backward: loss node must be scalar, got " +
                            shape_str(root.value));
  }
  ParamVector grad(layout_);
  if (!root.needs_grad) return grad;

  const auto count = static_cast<std::size_t>(loss.id) + 1;
  std::vector<Array> g(count);
  std::vector<char> has(count, 0);
  g[count - 1] = Array::Ones(1, 1);
  has[count - 1] = 1;

  auto acc = [&](std::int32_t id, const auto& expr) {
    auto idx = static_cast<std::size_t>(id);
    if (!nodes_[idx].needs_grad) return;
    bool h = has[idx] != 0;
    accumulate(g[idx], h, expr);
    has[idx] = 1;
  };

  for (std::size_t k = count; k-- > 0;) {
    if (!has[k]) continue;
    const Node& n = nodes_[k];
    const Array& gk = g[k];
    auto in = [this](std::int32_t id) -> const Array& {
      return nodes_[static_cast<std::size_t>(id)].value;
    };
    switch (n.op) {
      case Op::Constant:
        break;
      case Op::Param: {
        const auto& b = layout_.block(static_cast<std::size_t>(n.parts[0]));
        Eigen::Map<RowMajorMatrix>(grad.values().data() + b.offset, b.rows,
                                   b.cols) += gk.matrix();
        break;
      }
      case Op::Add:
        acc(n.a, gk);
        acc(n.b, gk);
        break;
      case Op::Sub:
        acc(n.a, gk);
        acc(n.b, -gk);
        break;
      case Op::Mul:
        acc(n.a, gk * in(n.b));
        acc(n.b, gk * in(n.a));
        break;
      case Op::Div:
        acc(n.a, gk / in(n.b));
        acc(n.b, -gk * n.value / in(n.b));
        break;
      case Op::Affine:
        acc(n.a, n.s0 * gk);
        break;
      case Op::Tanh:
        acc(n.a, gk * (1.0 - n.value.square()));
        break;
      case Op::Sin:
        acc(n.a, gk * in(n.a).cos());
        break;
      case Op::Cos:
        acc(n.a, -gk * in(n.a).sin());
        break;
      case Op::Square:
        acc(n.a, 2.0 * gk * in(n.a));
        break;
      case Op::MatMul: {
        if (nodes_[static_cast<std::size_t>(n.a)].needs_grad) {
          Array gw(in(n.a).rows(), in(n.a).cols());
          gw.matrix().noalias() = gk.matrix() * in(n.b).matrix().transpose();
          acc(n.a, gw);
        }
        if (nodes_[static_cast<std::size_t>(n.b)].needs_grad) {
          Array gx(in(n.b).rows(), in(n.b).cols());
          gx.matrix().noalias() = in(n.a).matrix().transpose() * gk.matrix();
          acc(n.b, gx);
        }
        break;
      }
      case Op::AddBias:
        acc(n.a, gk);
        acc(n.b, gk.rowwise().sum());
        break;
      case Op::Sum:
        acc(n.a, Array::Constant(in(n.a).rows(), in(n.a).cols(), gk(0, 0)));
        break;
      case Op::ConcatRows: {
        Eigen::Index r = 0;
        for (auto id : n.parts) {
          const auto rows = in(id).rows();
          acc(id, gk.middleRows(r, rows));
          r += rows;
        }
        break;
      }
    }
    g[k] = Array();
  }
  return grad;
}

}  // namespace lpinn
