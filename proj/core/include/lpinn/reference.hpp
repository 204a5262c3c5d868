#pragma once

#include "lpinn/fft.hpp"
#include "lpinn/field.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lpinn {

using ScalarFn = std::function<double(double)>;

/// w(x, t) = w0(wrap(x - c t)), constant along dx/dt = c.
Field exact_convection(const ScalarFn& w0, double c, const Grid& grid);

/// Single-mode closed form e^{-nu k^2 t} sin(k (x - c t)) on a 2 pi domain;
/// for another period L the wavenumber is 2 pi k / L.
Field exact_convdiff(int k, double c, double nu, const Grid& grid);

/// Exact solution of w_t + c w_x = nu w_xx for an arbitrary periodic initial
/// condition: each discrete Fourier mode of the sampled w0 is advanced in
/// closed form. Needs a power-of-two nx.
Field exact_linear_spectral(const ScalarFn& w0, double c, double nu,
                            const Grid& grid);

struct BurgersOptions {
  std::size_t n_spec = 512;
  double cfl = 0.5;               // max|w| dt / dx
  double diffusion_number = 0.25;  // nu dt / dx^2
  std::optional<double> dt;        // overrides the CFL-derived step
  double tail_tolerance = 1e-6;
  bool nonlinear = true;           // false: pure heat equation (testing)
};

/// Fourier pseudo-spectral solver for w_t + w w_x = nu w_xx on [0, L).
///
/// The conserved mean m is split off (w = m + u). Mean advection and
/// diffusion are integrated exactly with an integrating factor; the
/// nonlinear flux (u^2/2)_x is formed in physical space with 2/3-rule
/// dealiasing and advanced with classical RK4.
class BurgersSpectralSolver {
 public:
  BurgersSpectralSolver(const ScalarFn& w0, double nu, double length,
                        BurgersOptions options = {});

  /// Steps forward to exactly `t` using equal substeps no larger than dt().
  /// Throws SolverError on a non-finite state.
  void advance_to(double t);

  double time() const { return time_; }
  double mean() const { return mean_; }
  double dt() const { return dt_max_; }
  std::size_t steps_taken() const { return steps_; }

  /// Evaluates the Fourier series (including the mean) at arbitrary x.
  std::vector<double> sample(std::span<const double> x) const;
  /// Values on the solver's own collocation points.
  std::vector<double> physical() const;

  /// Energy in the upper half of the retained band over all non-mean energy.
  double tail_fraction() const;
  /// Throws SolverError when tail_fraction() exceeds the tolerance.
  void check_resolution() const;

 private:
  std::vector<Complex> nonlinear(const std::vector<Complex>& u_hat) const;
  void step(double dt);

  BurgersOptions options_;
  double nu_;
  double length_;
  std::size_t n_;
  std::size_t k_cut_;
  FftPlan plan_;
  std::vector<double> wavenumber_;  // signed physical wavenumber per bin
  std::vector<Complex> u_hat_;      // fluctuation spectrum
  double mean_ = 0.0;
  double time_ = 0.0;
  double dt_max_ = 0.0;
  std::size_t steps_ = 0;
};

/// Solves to every t in grid.t and samples onto grid.x. Throws SolverError
/// (under-resolved or blow-up) and ContractViolation for nu <= 0.
Field burgers_spectral(const ScalarFn& w0, double nu, const Grid& grid,
                       const BurgersOptions& options = {});

}  // namespace lpinn
