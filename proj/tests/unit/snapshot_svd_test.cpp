#include <doctest.h>

#include "lpinn/errors.hpp"
#include "lpinn/reference.hpp"
#include "lpinn/snapshot_svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace lpinn;

namespace {

Field decay_field(const Grid& g) {
  Field f = make_field(g);
  for (std::size_t j = 0; j < g.nt(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) f.values(j, i) = std::exp(-g.t[j]) * std::sin(g.x[i]);
  }
  return f;
}

}  // namespace

TEST_SUITE("snapshot_svd") {
  TEST_CASE("separable field is rank one") {
    const auto s = snapshot_svd(decay_field(make_grid(64, 20)));
    CHECK(s.size() == 20);
    CHECK(s[1] <= 1e-12 * s[0]);
    CHECK(modes_for_energy(s) == 1);
  }

  TEST_CASE("energy identity and ordering") {
    const Grid g = make_grid(48, 30);
    Field f = make_field(g);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (Eigen::Index j = 0; j < f.values.rows(); ++j)
      for (Eigen::Index i = 0; i < f.values.cols(); ++i) f.values(j, i) = nd(rng);
    const auto s = snapshot_svd(f);
    CHECK(std::is_sorted(s.rbegin(), s.rend()));
    const double e = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    CHECK(std::abs(e - f.values.squaredNorm()) <= 1e-10 * f.values.squaredNorm());
  }

  TEST_CASE("reordering time slices keeps the spectrum") {
    const Grid g = make_grid(32, 12);
    Field f = exact_convection([](double x) { return std::exp(std::cos(x)); }, 4.0, g);
    const auto a = snapshot_svd(f);
    Field p = f;
    for (Eigen::Index j = 0; j < f.values.rows(); ++j) {
      p.values.row(j) = f.values.row(f.values.rows() - 1 - j);
    }
    const auto b = snapshot_svd(p);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] == doctest::Approx(a[k]).epsilon(1e-10).scale(a[0]));
  }

  TEST_CASE("travelling waves need more modes than decay") {
    const Grid g = make_grid(256, 100);
    // A single translating harmonic spans sin and cos only.
    const auto wave = snapshot_svd(exact_convection([](double x) { return std::sin(x); }, 30.0, g));
    CHECK(modes_for_energy(wave) == 2);
    // A narrow translating bump has a slowly decaying spectrum.
    const auto bump = snapshot_svd(exact_convection(
        [](double x) { return std::exp(-20.0 * (1.0 - std::cos(x))); }, 30.0, g));
    CHECK(modes_for_energy(bump) >= 10);
    CHECK(modes_for_energy(snapshot_svd(decay_field(g))) == 1);
  }

  TEST_CASE("energy count edge cases") {
    const std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
    CHECK(modes_for_energy(flat, 0.99) == 4);
    CHECK(modes_for_energy(flat, 0.5) == 2);
    CHECK(modes_for_energy(std::vector<double>{0.0, 0.0}) == 0);
    Field lag = decay_field(make_grid(8, 4));
    lag.frame = Frame::Lagrangian;
    CHECK_THROWS_AS(snapshot_svd(lag), ContractViolation);
  }
}
