#include <doctest.h>

#include "lpinn/errors.hpp"
#include "lpinn/physics.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace lpinn;

namespace {

// Jet built directly from closed-form channel values.
JetBatch jet_of(Tape& t, const std::vector<double>& v, const std::vector<double>& dx,
                const std::vector<double>& dt, const std::vector<double>& dxx) {
  auto row = [&](const std::vector<double>& a) {
    Array r(1, static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r(0, static_cast<Eigen::Index>(i)) = a[i];
    return t.constant(r);
  };
  JetBatch j;
  j.n = static_cast<Eigen::Index>(v.size());
  j.value = row(v);
  j.d_dx = row(dx);
  j.d_dt = row(dt);
  j.d_dxx = row(dxx);
  return j;
}

struct Pts {
  std::vector<double> x, t;
};

Pts grid_points() {
  Pts p;
  for (int j = 0; j < 7; ++j) {
    for (int i = 0; i < 11; ++i) {
      p.x.push_back(2.0 * M_PI * i / 11.0);
      p.t.push_back(j / 6.0);
    }
  }
  return p;
}

Var scalar(Tape& t, double v) { return t.constant(Array::Constant(1, 1, v)); }

}  // namespace

TEST_SUITE("physics") {
  TEST_CASE("decaying travelling wave solves convection-diffusion") {
    const double c = 3.0;
    const double nu = 0.2;
    const Pts p = grid_points();
    std::vector<double> v, dx, dt, dxx;
    for (std::size_t k = 0; k < p.x.size(); ++k) {
      const double e = std::exp(-nu * p.t[k]);
      const double ph = p.x[k] - c * p.t[k];
      v.push_back(e * std::sin(ph));
      dx.push_back(e * std::cos(ph));
      dt.push_back(-nu * e * std::sin(ph) - c * e * std::cos(ph));
      dxx.push_back(-e * std::sin(ph));
    }
    Tape t{ParamVector{}};
    const Var r = residual_eulerian(t, PdeSpec::convection_diffusion(c, nu), jet_of(t, v, dx, dt, dxx));
    CHECK(t.value(r).abs().maxCoeff() <= 1e-8);
  }

  TEST_CASE("constant field and w = t under convection") {
    Tape t{ParamVector{}};
    const std::vector<double> z(5, 0.0);
    const std::vector<double> one(5, 1.0);
    const Var r0 = residual_eulerian(t, PdeSpec::convection(7.0), jet_of(t, std::vector<double>(5, 2.5), z, z, z));
    CHECK(t.value(r0).isZero(0.0));
    const Var r1 = residual_eulerian(t, PdeSpec::convection(7.0), jet_of(t, {0, 0.1, 0.2, 0.3, 0.4}, z, one, z));
    CHECK((t.value(r1) == 1.0).all());
  }

  TEST_CASE("Burgers advects with the state itself") {
    Tape t{ParamVector{}};
    // w = 2, w_x = 3, w_t = 1, w_xx = 5, nu = 0.1: 1 + 2 * 3 - 0.5.
    const Var r = residual_eulerian(t, PdeSpec::burgers(0.1), jet_of(t, {2}, {3}, {1}, {5}));
    CHECK(t.value(r)(0, 0) == doctest::Approx(6.5));
  }

  TEST_CASE("exact characteristics of convection give zero Lagrangian residuals") {
    const double c = 30.0;
    const Pts p = grid_points();
    std::vector<double> xv, xt, wv, wdx, wdxx;
    const std::vector<double> one(p.x.size(), 1.0);
    const std::vector<double> z(p.x.size(), 0.0);
    for (std::size_t k = 0; k < p.x.size(); ++k) {
      xv.push_back(p.x[k] + c * p.t[k]);
      xt.push_back(c);
      wv.push_back(std::sin(p.x[k]));
      wdx.push_back(std::cos(p.x[k]));
      wdxx.push_back(-std::sin(p.x[k]));
    }
    Tape t{ParamVector{}};
    const auto r = residual_lagrangian(t, PdeSpec::convection(c), jet_of(t, xv, one, xt, z),
                                       jet_of(t, wv, wdx, z, wdxx));
    CHECK(t.value(r.r_x).abs().maxCoeff() <= 1e-12);
    CHECK(t.value(r.r_w).abs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("identity map reduces to the Eulerian heat residual") {
    const Pts p = grid_points();
    std::vector<double> v, dx, dt, dxx;
    const std::vector<double> one(p.x.size(), 1.0);
    const std::vector<double> z(p.x.size(), 0.0);
    for (std::size_t k = 0; k < p.x.size(); ++k) {
      v.push_back(std::sin(2 * p.x[k]) * p.t[k]);
      dx.push_back(2 * std::cos(2 * p.x[k]) * p.t[k]);
      dt.push_back(std::sin(2 * p.x[k]));
      dxx.push_back(-4 * std::sin(2 * p.x[k]) * p.t[k]);
    }
    const PdeSpec pde = PdeSpec::convection_diffusion(0.0, 0.3);
    Tape t{ParamVector{}};
    const JetBatch w = jet_of(t, v, dx, dt, dxx);
    const auto lag = residual_lagrangian(t, pde, jet_of(t, p.x, one, z, z), w);
    const Var eul = residual_eulerian(t, pde, w);
    CHECK((t.value(lag.r_w) - t.value(eul)).abs().maxCoeff() <= 1e-15);
    CHECK(t.value(lag.r_x).isZero(0.0));
  }

  TEST_CASE("chain-rule second derivative matches the composition oracle") {
    // Smooth monotone map x(x0) and state w(x0); the physical profile is
    // W(X) = w(x^{-1}(X)). The oracle inverts the map by Newton iteration and
    // takes second differences of W in physical space.
    const auto xm = [](double s) { return s + 0.4 * std::sin(s) + 0.1 * std::cos(2 * s); };
    const auto xm1 = [](double s) { return 1 + 0.4 * std::cos(s) - 0.2 * std::sin(2 * s); };
    const auto xm2 = [](double s) { return -0.4 * std::sin(s) - 0.4 * std::cos(2 * s); };
    const auto wm = [](double s) { return std::sin(s) + 0.3 * std::cos(3 * s); };
    const auto wm1 = [](double s) { return std::cos(s) - 0.9 * std::sin(3 * s); };
    const auto wm2 = [](double s) { return -std::sin(s) - 2.7 * std::cos(3 * s); };
    const auto inverse = [&](double target) {
      double s = target;
      for (int i = 0; i < 60; ++i) s -= (xm(s) - target) / xm1(s);
      return s;
    };
    std::vector<double> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(0.1 + 6.0 * i / 40.0);
    std::vector<double> xv, xd, xdd, wv, wd, wdd;
    const std::vector<double> z(labels.size(), 0.0);
    for (double s : labels) {
      xv.push_back(xm(s));
      xd.push_back(xm1(s));
      xdd.push_back(xm2(s));
      wv.push_back(wm(s));
      wd.push_back(wm1(s));
      wdd.push_back(wm2(s));
    }
    // With w_t = 0 and nu = 1 the state residual is -w_xx.
    Tape t{ParamVector{}};
    const auto r = residual_lagrangian(t, PdeSpec::convection_diffusion(0.0, 1.0),
                                       jet_of(t, xv, xd, z, xdd), jet_of(t, wv, wd, z, wdd));
    const double h = 1e-3;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const double X = xm(labels[k]);
      const double fd = (wm(inverse(X + h)) - 2 * wm(inverse(X)) + wm(inverse(X - h))) / (h * h);
      const double chain = -t.value(r.r_w)(0, static_cast<Eigen::Index>(k));
      CHECK(oracle::rel_diff(chain, fd, 1e-2) <= 1e-4);
    }
  }

  TEST_CASE("folded characteristics raise") {
    const std::vector<double> one(3, 1.0);
    const std::vector<double> z(3, 0.0);
    for (double bad : {0.0, 1e-6, -0.5}) {
      Tape t{ParamVector{}};
      const JetBatch x = jet_of(t, {0, 1, 2}, {1.0, bad, 1.0}, z, z);
      const JetBatch w = jet_of(t, {0, 1, 2}, one, z, z);
      CHECK_THROWS_AS(residual_lagrangian(t, PdeSpec::convection_diffusion(1.0, 0.1), x, w),
                      CharacteristicCrossing);
      CHECK_THROWS_AS(residual_lagrangian(t, PdeSpec::convection(1.0), x, w),
                      CharacteristicCrossing);
    }
    Tape t{ParamVector{}};
    const JetBatch x = jet_of(t, {0, 1, 2}, {1.0, 2e-6, 1.0}, z, z);
    const JetBatch w = jet_of(t, {0, 1, 2}, one, z, z);
    const auto r = residual_lagrangian(t, PdeSpec::convection_diffusion(1.0, 0.1), x, w);
    CHECK(t.value(r.r_w).allFinite());
  }

  TEST_CASE("PINN loss by hand") {
    Tape t{ParamVector{}};
    Array r(1, 2);
    r << 1, 1;
    Array ic(1, 1);
    ic << 2;
    const LossTerms l = loss_pinn(t, t.constant(r), t.constant(ic), LossWeights{});
    CHECK(t.scalar(l.total) == 4010.0);
    CHECK(t.scalar(l.residual) == 10.0);
    CHECK(t.scalar(l.ic) == 4000.0);

    LossWeights doubled;
    doubled.lambda_r = 20.0;
    const LossTerms l2 = loss_pinn(t, t.constant(r), t.constant(ic), doubled);
    CHECK(t.scalar(l2.residual) == 2.0 * t.scalar(l.residual));

    const LossTerms zero = loss_pinn(t, t.constant(Array::Zero(1, 4)), t.constant(Array::Zero(1, 2)), LossWeights{});
    CHECK(t.scalar(zero.total) == 0.0);
  }

  TEST_CASE("LPINN loss by hand") {
    Tape t{ParamVector{}};
    const LossTerms l = loss_lpinn(t, scalar(t, 3), scalar(t, 4), scalar(t, 0), scalar(t, 0), LossWeights{});
    CHECK(t.scalar(l.total) == 250.0);
    CHECK(t.scalar(l.residual_x) == 90.0);
    CHECK(t.scalar(l.residual_w) == 160.0);
    const LossTerms m = loss_lpinn(t, scalar(t, 0), scalar(t, 0), scalar(t, 0.1), scalar(t, 0.2), LossWeights{});
    CHECK(t.scalar(m.ic) == doctest::Approx(1000.0 * (0.01 + 0.04)));
  }

  TEST_CASE("empty sets are contract violations") {
    Tape t{ParamVector{}};
    const Var empty = t.constant(Array(1, 0));
    CHECK_THROWS_AS(loss_pinn(t, empty, scalar(t, 1), LossWeights{}), ContractViolation);
    CHECK_THROWS_AS(loss_pinn(t, scalar(t, 1), empty, LossWeights{}), ContractViolation);
    CHECK_THROWS_AS(loss_lpinn(t, empty, empty, scalar(t, 1), scalar(t, 1), LossWeights{}),
                    ContractViolation);
  }

  TEST_CASE("collocation grid") {
    const Expression w0("sin(x)");
    const CollocationSet s = make_collocation(4, 2, Domain{}, w0);
    CHECK(s.n_r() == 8);
    CHECK(s.n_ic() == 4);
    const std::vector<double> xs{0, M_PI / 2, M_PI, 3 * M_PI / 2};
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(s.x[k] == doctest::Approx(xs[k % 4]));
      CHECK(s.t[k] == (k < 4 ? 0.0 : 1.0));
    }
    CHECK(s.w_ic[1] == doctest::Approx(1.0));
    const CollocationSet full = make_collocation(256, 100, Domain{}, w0);
    CHECK(full.n_r() == 25600);
    CHECK(full.n_ic() == 256);
    for (double x : full.x) CHECK_MESSAGE(x < 2 * M_PI, "right endpoint must be excluded");
    CHECK_THROWS_AS(make_collocation(1, 5, Domain{}, w0), ContractViolation);
  }

  TEST_CASE("Burgers initial condition carries the offset") {
    const CollocationSet s = make_collocation(4, 2, Domain{}, Expression("sin(x) + c"), 30.0);
    CHECK(s.w_ic[0] == 30.0);
    CHECK(s.w_ic[1] == doctest::Approx(31.0));
  }

  TEST_CASE("PDE validation and names") {
    CHECK_THROWS_AS(validate(PdeSpec::convection_diffusion(1.0, -0.1)), ContractViolation);
    CHECK_THROWS_AS(validate(PdeSpec{PdeKind::Convection, 1.0, 0.5}), ContractViolation);
    CHECK_NOTHROW(validate(PdeSpec::burgers(0.01, 30)));
    for (PdeKind k : {PdeKind::Convection, PdeKind::ConvectionDiffusion, PdeKind::Burgers}) {
      CHECK(pde_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(pde_kind_from_string("heat"), ConfigError);
  }
}
