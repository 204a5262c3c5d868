#include "lpinn/expression.hpp"

#include "lpinn/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <utility>

namespace lpinn {

namespace {

using Fn = std::function<double(double, double)>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Fn parse() {
    Fn f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "' column " +
                      std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Fn expr() {
    Fn lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = [a = lhs, b = term()](double x, double c) { return a(x, c) + b(x, c); };
      } else if (accept('-')) {
        lhs = [a = lhs, b = term()](double x, double c) { return a(x, c) - b(x, c); };
      } else {
        return lhs;
      }
    }
  }

  Fn term() {
    Fn lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = [a = lhs, b = unary()](double x, double c) { return a(x, c) * b(x, c); };
      } else if (accept('/')) {
        lhs = [a = lhs, b = unary()](double x, double c) { return a(x, c) / b(x, c); };
      } else {
        return lhs;
      }
    }
  }

  Fn unary() {
    if (accept('-')) {
      return [a = unary()](double x, double c) { return -a(x, c); };
    }
    if (accept('+')) return unary();
    return power();
  }

  Fn power() {
    Fn base = primary();
    if (accept('^')) {
      return [a = base, b = unary()](double x, double c) {
        return std::pow(a(x, c), b(x, c));
      };
    }
    return base;
  }

  Fn primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      Fn inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return [v](double, double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return [](double x, double) { return x; };
      if (name == "c") return [](double, double c) { return c; };
      if (name == "pi") return [](double, double) { return std::numbers::pi; };
      if (name == "e") return [](double, double) { return std::numbers::e; };
      static const std::map<std::string, double (*)(double)> functions{
          {"sin", [](double v) { return std::sin(v); }},
          {"cos", [](double v) { return std::cos(v); }},
          {"tan", [](double v) { return std::tan(v); }},
          {"exp", [](double v) { return std::exp(v); }},
          {"log", [](double v) { return std::log(v); }},
          {"sqrt", [](double v) { return std::sqrt(v); }},
          {"abs", [](double v) { return std::abs(v); }},
          {"tanh", [](double v) { return std::tanh(v); }},
      };
      const auto it = functions.find(name);
      if (it == functions.end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      Fn arg = expr();
      if (!accept(')')) fail("expected ')'");
      return [f = it->second, arg](double x, double c) { return f(arg(x, c)); };
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string source) : source_(std::move(source)) {
  eval_ = Parser(source_).parse();
}

}  // namespace lpinn
