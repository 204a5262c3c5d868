#include <doctest.h>

#include "lpinn/errors.hpp"
#include "lpinn/tape.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <random>

using namespace lpinn;

namespace {

ParamVector vector_params(std::initializer_list<double> values) {
  ParamLayout layout;
  layout.add("theta", static_cast<Eigen::Index>(values.size()), 1);
  ParamVector p(layout);
  Eigen::Index i = 0;
  for (double v : values) p.values()[i++] = v;
  return p;
}

// A scalar loss exercising every primitive with a parameter path.
Var mixed_loss(Tape& t) {
  const Var th = t.param(0);  // 4 x 1
  Array c(4, 1);
  c << 0.3, -1.2, 2.0, 0.7;
  const Var k = t.constant(c);
  const Var a = t.add(th, k);
  const Var b = t.sub(t.mul(th, a), t.scale(k, 0.5));
  const Var d = t.div(b, t.shift(t.square(th), 1.5));
  const Var e = t.add(t.tanh(d), t.mul(t.sin(th), t.cos(a)));
  Array w(2, 4);
  w << 1, -2, 0.5, 3, 0.25, 1, -1, 2;
  const Var m = t.matmul(t.constant(w), e);
  const Var both = t.concat_rows({m, t.affine(th, 2.0, -1.0)});
  return t.sum(t.square(both));
}

}  // namespace

TEST_SUITE("tape") {
  TEST_CASE("gradient of theta dot theta is 2 theta") {
    const ParamVector p = vector_params({0.5, -2.0, 3.0});
    Tape t(p);
    const Var th = t.param(0);
    const ParamVector g = t.backward(t.sum(t.mul(th, th)));
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(g.values()[i] == 2.0 * p.values()[i]);
  }

  TEST_CASE("loss independent of parameters has zero gradient") {
    const ParamVector p = vector_params({1.0, 2.0});
    Tape t(p);
    const Var c = t.constant(Array::Constant(3, 2, 1.5));
    const ParamVector g = t.backward(t.sum(t.square(c)));
    CHECK(g.size() == 2);
    CHECK(g.values().isZero(0.0));
  }

  TEST_CASE("non-scalar loss is a contract violation") {
    const ParamVector p = vector_params({1.0, 2.0});
    Tape t(p);
    CHECK_THROWS_AS(t.backward(t.param(0)), ContractViolation);
  }

  TEST_CASE("shape mismatch is rejected") {
    const ParamVector p = vector_params({1.0, 2.0});
    Tape t(p);
    CHECK_THROWS_AS(t.add(t.param(0), t.constant(Array::Zero(3, 1))), ShapeError);
    CHECK_THROWS_AS(t.matmul(t.param(0), t.param(0)), ShapeError);
  }

  TEST_CASE("every primitive matches central differences") {
    const ParamVector p = vector_params({0.4, -0.3, 1.1, 0.8});
    Tape t(p);
    const ParamVector g = t.backward(mixed_loss(t));
    const auto f = [&](const Eigen::VectorXd& th) {
      Tape s(p.with_values(th));
      return s.scalar(mixed_loss(s));
    };
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double fd = oracle::central_diff(f, p.values(), i, 1e-6);
      CHECK(oracle::rel_diff(g.values()[i], fd, 1e-8) < 1e-6);
    }
  }

  TEST_CASE("replay reproduces recorded values bit for bit") {
    const ParamVector p = vector_params({0.4, -0.3, 1.1, 0.8});
    Tape t(p);
    const Var loss = mixed_loss(t);
    const double before = t.scalar(loss);
    t.replay();
    CHECK(t.scalar(loss) == before);

    const ParamVector q = p.with_values(Eigen::Vector4d(1.0, 2.0, -0.5, 0.1));
    Tape fresh(q);
    const double expect = fresh.scalar(mixed_loss(fresh));
    t.replay(q);
    CHECK(t.scalar(loss) == expect);
  }

  TEST_CASE("replay with a different layout is rejected") {
    Tape t(vector_params({1.0, 2.0}));
    CHECK_THROWS_AS(t.replay(vector_params({1.0, 2.0, 3.0})), ShapeError);
  }

  TEST_CASE("backward is linear in the loss") {
    const ParamVector p = vector_params({0.4, -0.3, 1.1, 0.8});
    Tape t(p);
    const Var l1 = mixed_loss(t);
    const Var l2 = t.sum(t.sin(t.param(0)));
    const Var combo = t.add(t.scale(l1, 2.5), t.scale(l2, -0.75));
    const Eigen::VectorXd lhs = t.backward(combo).values();
    const Eigen::VectorXd rhs = 2.5 * t.backward(l1).values() - 0.75 * t.backward(l2).values();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  }

  TEST_CASE("identical inputs give bit-identical gradients") {
    const ParamVector p = vector_params({0.4, -0.3, 1.1, 0.8});
    Tape a(p);
    Tape b(p);
    CHECK(a.backward(mixed_loss(a)).values() == b.backward(mixed_loss(b)).values());
  }

  TEST_CASE("sum accumulates left to right") {
    const ParamVector p = vector_params({0.0});
    Tape t(p);
    Array v(1, 4);
    v << 1e16, 1.0, -1e16, 1.0;
    // ((1e16 + 1) - 1e16) + 1 = 0 + 1 in strict left-to-right order.
    CHECK(t.scalar(t.sum(t.constant(v))) == 1.0);
  }

  TEST_CASE("tanh is accurate to a few ulp") {
    const ParamVector p = vector_params({0.0});
    Tape t(p);
    Array x(1, 9);
    x << -30.0, -2.0, -0.3, -1e-3, 0.0, 1e-9, 0.049, 0.051, 5.0;
    const Array y = t.value(t.tanh(t.constant(x)));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      CHECK(oracle::rel_diff(y(0, i), std::tanh(x(0, i)), 1e-300) < 1e-15);
    }
  }
}
