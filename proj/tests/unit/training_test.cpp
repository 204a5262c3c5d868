#include <doctest.h>

#include "lpinn/error_metric.hpp"
#include "lpinn/errors.hpp"
#include "lpinn/prediction.hpp"
#include "lpinn/reference.hpp"
#include "lpinn/training.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace lpinn;

namespace {

// Scalar Adam written out longhand, as an oracle for adam_step.
struct ScalarAdam {
  double m = 0.0, v = 0.0;
  long k = 0;
  double step(double theta, double g, double lr) {
    ++k;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1.0 - std::pow(0.9, static_cast<double>(k)));
    const double vh = v / (1.0 - std::pow(0.999, static_cast<double>(k)));
    return theta - lr * mh / (std::sqrt(vh) + 1e-8);
  }
};

Objective tiny_objective(const Model& m, PdeSpec pde = PdeSpec::convection(1.0)) {
  return Objective(m, pde, make_collocation(16, 8, Domain{}, Expression("sin(x)")));
}

}  // namespace

TEST_SUITE("training") {
  TEST_CASE("zero gradient leaves everything at rest") {
    AdamState s = make_adam(3);
    Eigen::VectorXd theta(3);
    theta << 1.0, -2.0, 0.5;
    const Eigen::VectorXd before = theta;
    adam_step(s, theta, Eigen::VectorXd::Zero(3));
    CHECK(theta == before);
    CHECK(s.m.isZero(0.0));
    CHECK(s.v.isZero(0.0));
    CHECK(s.step == 1);
  }

  TEST_CASE("first step moves by lr against the gradient sign") {
    for (double g : {1.0, -1.0, 37.5, -1e4}) {
      AdamState s = make_adam(1, 0.01);
      Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 2.0);
      adam_step(s, theta, Eigen::VectorXd::Constant(1, g));
      const double delta = theta[0] - 2.0;
      CHECK(std::abs(delta + 0.01 * (g > 0 ? 1.0 : -1.0)) <= 0.01 * 1e-6);
    }
  }

  TEST_CASE("scalar quadratic converges and matches the longhand oracle") {
    AdamState s = make_adam(1, 0.1);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
    ScalarAdam ref;
    double r = 0.0;
    for (int i = 0; i < 200; ++i) {
      adam_step(s, theta, Eigen::VectorXd::Constant(1, theta[0] - 3.0));
      r = ref.step(r, r - 3.0, 0.1);
      CHECK(theta[0] == doctest::Approx(r).epsilon(1e-14));
    }
    CHECK(std::abs(theta[0] - 3.0) < 0.05);
  }

  TEST_CASE("non-finite gradients and wrong lengths are rejected") {
    AdamState s = make_adam(2);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd g(2);
    g << 1.0, std::numeric_limits<double>::quiet_NaN();
    try {
      adam_step(s, theta, g);
      FAIL("expected divergence");
    } catch (const TrainingDiverged& e) {
      CHECK(e.iteration() == 1);
    }
    CHECK_THROWS_AS(adam_step(s, theta, Eigen::VectorXd::Zero(3)), ShapeError);
  }

  TEST_CASE("replaying a gradient sequence is bit-exact") {
    std::vector<Eigen::VectorXd> gs;
    for (int k = 0; k < 20; ++k) gs.push_back(Eigen::VectorXd::Random(4));
    auto run = [&] {
      AdamState s = make_adam(4, 0.05);
      Eigen::VectorXd theta = Eigen::VectorXd::Ones(4);
      for (const auto& g : gs) adam_step(s, theta, g);
      return theta;
    };
    CHECK(run() == run());
  }

  TEST_CASE("one iteration is one full-batch Adam step") {
    const Model m = PinnModel({2, 8, 1});
    const Objective obj = tiny_objective(m);
    const ParamVector p0 = init_params(m, 4);
    TrainConfig cfg;
    cfg.iterations = 1;
    const TrainReport rep = train(cfg, obj, p0);
    REQUIRE(rep.history.size() == 1);
    CHECK(rep.history[0].iteration == 1);
    CHECK(rep.history[0].loss.total == obj.loss(p0).total);

    AdamState s = make_adam(p0.size(), cfg.lr);
    Eigen::VectorXd theta = p0.values();
    adam_step(s, theta, obj.gradient(p0));
    CHECK(rep.final_params.values() == theta);
    CHECK(rep.final_loss.total == obj.loss(rep.final_params).total);
  }

  TEST_CASE("history follows the logging cadence") {
    const Model m = PinnModel({1, 4, 1});
    const Objective obj = tiny_objective(m);
    TrainConfig cfg;
    cfg.iterations = 25;
    cfg.log_every = 10;
    const TrainReport rep = train(cfg, obj, init_params(m, 0));
    std::vector<long> its;
    for (const auto& h : rep.history) its.push_back(h.iteration);
    CHECK(its == std::vector<long>{1, 10, 20, 25});
  }

  TEST_CASE("same seed gives identical runs with batching") {
    const Model m = LpinnModel({1, 8, 1}, {2, 8, 1});
    const Objective obj = tiny_objective(m);
    TrainConfig cfg;
    cfg.iterations = 30;
    cfg.batch = 40;
    cfg.seed = 9;
    const ParamVector p0 = init_params(m, 9);
    const TrainReport a = train(cfg, obj, p0);
    const TrainReport b = train(cfg, obj, p0);
    CHECK(a.final_params.values() == b.final_params.values());
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t k = 0; k < a.history.size(); ++k) {
      CHECK(a.history[k].loss.total == b.history[k].loss.total);
    }
    cfg.seed = 10;
    CHECK(train(cfg, obj, p0).final_params.values() != a.final_params.values());
  }

  TEST_CASE("a blow-up reports the iteration where it happened") {
    const Model m = PinnModel({1, 4, 1});
    const Objective obj = tiny_objective(m);
    ParamVector p = init_params(m, 1);
    p.values()[0] = std::numeric_limits<double>::infinity();
    TrainConfig cfg;
    cfg.iterations = 5;
    try {
      train(cfg, obj, p);
      FAIL("expected divergence");
    } catch (const TrainingDiverged& e) {
      CHECK(e.iteration() == 1);
    }
  }

  TEST_CASE("LPINN learns pure transport of sin at zero speed") {
    // Desk-scale version of the zero-velocity training example.
    const Domain dom;
    const Grid g = make_grid(64, 26, dom);
    const Model m = LpinnModel({2, 50, 1}, {4, 50, 1});
    const Objective obj(m, PdeSpec::convection(0.0),
                        make_collocation(64, 26, dom, Expression("sin(x)")));
    TrainConfig cfg;
    cfg.iterations = 5000;
    cfg.batch = 512;
    cfg.log_every = 1000;
    const TrainReport rep = train(cfg, obj, init_params(m, 0));
    const Field pred = predict_eulerian(m, rep.final_params, g);
    const Field truth = exact_convection([](double x) { return std::sin(x); }, 0.0, g);
    const double err = rel_error(truth, pred).rel_error;
    MESSAGE("relative error " << err);
    CHECK(err < 0.05);
    CHECK(rep.history.back().loss.total < rep.history.front().loss.total);
  }
}
