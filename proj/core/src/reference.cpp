#include "lpinn/reference.hpp"

#include "lpinn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace lpinn {

namespace {

double wrap(double x, double length) {
  return x - length * std::floor(x / length);
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

Field exact_convection(const ScalarFn& w0, double c, const Grid& grid) {
  Field f = make_field(grid);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      f.values(idx(j), idx(i)) =
          w0(wrap(grid.x[i] - c * grid.t[j], grid.domain.length));
    }
  }
  return f;
}

Field exact_convdiff(int k, double c, double nu, const Grid& grid) {
  const double kappa = 2.0 * std::numbers::pi * k / grid.domain.length;
  Field f = make_field(grid);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    const double t = grid.t[j];
    const double decay = std::exp(-nu * kappa * kappa * t);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      f.values(idx(j), idx(i)) = decay * std::sin(kappa * (grid.x[i] - c * t));
    }
  }
  return f;
}

Field exact_linear_spectral(const ScalarFn& w0, double c, double nu,
                            const Grid& grid) {
  const std::size_t n = grid.nx();
  FftPlan plan(n);
  std::vector<Complex> w_hat(n);
  for (std::size_t i = 0; i < n; ++i) w_hat[i] = w0(grid.x[i]);
  plan.forward(w_hat);

  Field f = make_field(grid);
  std::vector<Complex> work(n);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    const double t = grid.t[j];
    for (std::size_t m = 0; m < n; ++m) {
      const double k = m <= n / 2 ? static_cast<double>(m)
                                  : static_cast<double>(m) - static_cast<double>(n);
      const double kappa = 2.0 * std::numbers::pi * k / grid.domain.length;
      work[m] = w_hat[m] * std::exp(Complex(-nu * kappa * kappa * t, -kappa * c * t));
    }
    plan.inverse(work);
    for (std::size_t i = 0; i < n; ++i) f.values(idx(j), idx(i)) = work[i].real();
  }
  return f;
}

BurgersSpectralSolver::BurgersSpectralSolver(const ScalarFn& w0, double nu,
                                             double length,
                                             BurgersOptions options)
    : options_(options),
      nu_(nu),
      length_(length),
      n_(options.n_spec),
      k_cut_(options.n_spec / 3),
      plan_(options.n_spec) {
  if (!(nu > 0.0)) throw ContractViolation("Burgers solver needs nu > 0");
  if (!(length > 0.0)) throw ContractViolation("domain length must be > 0");

  wavenumber_.resize(n_);
  for (std::size_t m = 0; m < n_; ++m) {
    const double k = m < n_ / 2 ? static_cast<double>(m)
                                : static_cast<double>(m) - static_cast<double>(n_);
    wavenumber_[m] = m == n_ / 2 ? 0.0 : 2.0 * std::numbers::pi * k / length_;
  }

  const double dx = length_ / static_cast<double>(n_);
  u_hat_.resize(n_);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double v = w0(static_cast<double>(i) * dx);
    if (!std::isfinite(v)) throw SolverError("initial condition is not finite");
    u_hat_[i] = v;
    max_abs = std::max(max_abs, std::abs(v));
  }
  plan_.forward(u_hat_);
  mean_ = u_hat_[0].real() / static_cast<double>(n_);
  u_hat_[0] = 0.0;
  for (std::size_t m = 0; m < n_; ++m) {
    const std::size_t k = m <= n_ / 2 ? m : n_ - m;
    if (k > k_cut_) u_hat_[m] = 0.0;
  }

  if (options_.dt) {
    if (!(*options_.dt > 0.0)) throw ContractViolation("solver dt must be > 0");
    dt_max_ = *options_.dt;
  } else {
    double dt = std::numeric_limits<double>::infinity();
    if (max_abs > 0.0) dt = options_.cfl * dx / max_abs;
    dt = std::min(dt, options_.diffusion_number * dx * dx / nu_);
    dt_max_ = dt;
  }
}

std::vector<Complex> BurgersSpectralSolver::nonlinear(
    const std::vector<Complex>& u_hat) const {
  std::vector<Complex> u = u_hat;
  plan_.inverse(u);
  for (auto& z : u) z = Complex(0.5 * z.real() * z.real(), 0.0);
  plan_.forward(u);
  for (std::size_t m = 0; m < n_; ++m) {
    const std::size_t k = m <= n_ / 2 ? m : n_ - m;
    u[m] = k > k_cut_ ? Complex(0.0) : Complex(0.0, -wavenumber_[m]) * u[m];
  }
  return u;
}

void BurgersSpectralSolver::step(double dt) {
  std::vector<Complex> e(n_);
  std::vector<Complex> e2(n_);
  for (std::size_t m = 0; m < n_; ++m) {
    const double kap = wavenumber_[m];
    const Complex lin(-nu_ * kap * kap, -kap * mean_);
    e[m] = std::exp(lin * dt);
    e2[m] = std::exp(lin * (0.5 * dt));
  }
  const auto& v = u_hat_;
  if (!options_.nonlinear) {
    for (std::size_t m = 0; m < n_; ++m) u_hat_[m] = e[m] * v[m];
    return;
  }
  std::vector<Complex> tmp(n_);
  auto k1 = nonlinear(v);
  for (std::size_t m = 0; m < n_; ++m) tmp[m] = e2[m] * (v[m] + 0.5 * dt * k1[m]);
  auto k2 = nonlinear(tmp);
  for (std::size_t m = 0; m < n_; ++m) tmp[m] = e2[m] * v[m] + 0.5 * dt * k2[m];
  auto k3 = nonlinear(tmp);
  for (std::size_t m = 0; m < n_; ++m) tmp[m] = e[m] * v[m] + dt * e2[m] * k3[m];
  auto k4 = nonlinear(tmp);
  for (std::size_t m = 0; m < n_; ++m) {
    u_hat_[m] = e[m] * v[m] + (dt / 6.0) * (e[m] * k1[m] +
                                             2.0 * e2[m] * (k2[m] + k3[m]) + k4[m]);
  }
}

void BurgersSpectralSolver::advance_to(double t) {
  const double span = t - time_;
  if (span < 0.0) throw ContractViolation("cannot integrate backwards in time");
  if (span == 0.0) return;
  const auto substeps =
      static_cast<std::size_t>(std::ceil(span / dt_max_ - 1e-12));
  const double dt = span / static_cast<double>(std::max<std::size_t>(substeps, 1));
  for (std::size_t s = 0; s < std::max<std::size_t>(substeps, 1); ++s) {
    step(dt);
    ++steps_;
  }
  time_ = t;
  for (const auto& z : u_hat_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw SolverError("Burgers solver blew up before t = " + std::to_string(t));
    }
  }
}

std::vector<double> BurgersSpectralSolver::sample(std::span<const double> x) const {
  std::vector<double> out(x.size());
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t p = 0; p < x.size(); ++p) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= k_cut_; ++k) {
      const double phase = wavenumber_[k] * x[p];
      acc += u_hat_[k].real() * std::cos(phase) - u_hat_[k].imag() * std::sin(phase);
    }
    out[p] = mean_ + 2.0 * inv_n * acc;
  }
  return out;
}

std::vector<double> BurgersSpectralSolver::physical() const {
  std::vector<Complex> u = u_hat_;
  plan_.inverse(u);
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = mean_ + u[i].real();
  return out;
}

double BurgersSpectralSolver::tail_fraction() const {
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 1; k <= k_cut_; ++k) {
    const double e = std::norm(u_hat_[k]);
    total += e;
    if (2 * k > k_cut_) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

void BurgersSpectralSolver::check_resolution() const {
  const double tail = tail_fraction();
  if (tail > options_.tail_tolerance) {
    throw SolverError("Burgers solver under-resolved at t = " +
                      std::to_string(time_) + ": spectral tail fraction " +
                      std::to_string(tail) + " > " +
                      std::to_string(options_.tail_tolerance) +
                      " (increase n_spec)");
  }
}

Field burgers_spectral(const ScalarFn& w0, double nu, const Grid& grid,
                       const BurgersOptions& options) {
  BurgersSpectralSolver solver(w0, nu, grid.domain.length, options);
  Field f = make_field(grid);
  for (std::size_t j = 0; j < grid.nt(); ++j) {
    solver.advance_to(grid.t[j]);
    solver.check_resolution();
    const auto row = solver.sample(grid.x);
    for (std::size_t i = 0; i < grid.nx(); ++i) f.values(idx(j), idx(i)) = row[i];
  }
  return f;
}

}  // namespace lpinn
