#pragma once

#include <functional>
#include <string>

namespace lpinn {

/// Scalar expression in the variables `x` and `c`, e.g. "sin(x) + c".
///
/// Supports + - * / ^, unary minus, parentheses, the constants pi and e, and
/// sin cos tan exp log sqrt abs tanh. Parse errors throw ConfigError with the
/// column of the offending token.
class Expression {
 public:
  Expression() : Expression("sin(x)") {}
  explicit Expression(std::string source);

  double operator()(double x, double c = 0.0) const { return eval_(x, c); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::function<double(double, double)> eval_;
};

}  // namespace lpinn
