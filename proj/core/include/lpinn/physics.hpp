#pragma once

#include "lpinn/expression.hpp"
#include "lpinn/jet.hpp"
#include "lpinn/tape.hpp"

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace lpinn {

enum class PdeKind { Convection, ConvectionDiffusion, Burgers };

/// w_t + f1 w_x - f2 w_xx = 0 with f2 = nu and f1 = c, or f1 = w for Burgers.
/// For Burgers `c` is only the offset of the default initial condition.
struct PdeSpec {
  PdeKind kind = PdeKind::Convection;
  double c = 0.0;
  double nu = 0.0;

  static PdeSpec convection(double c) { return {PdeKind::Convection, c, 0.0}; }
  static PdeSpec convection_diffusion(double c, double nu) {
    return {PdeKind::ConvectionDiffusion, c, nu};
  }
  static PdeSpec burgers(double nu, double offset = 0.0) {
    return {PdeKind::Burgers, offset, nu};
  }
};

/// Throws ContractViolation on nu < 0, non-finite values, or a pure
/// convection spec with nonzero nu.
void validate(const PdeSpec& pde);
std::string to_string(PdeKind kind);
PdeKind pde_kind_from_string(const std::string& s);

struct LossWeights {
  double lambda_r = 10.0;
  double lambda_bc = 0.0;
  double lambda_ic = 1000.0;
};

struct Domain {
  double length = 2.0 * std::numbers::pi;  // x in [0, length)
  double t_final = 1.0;                     // t in [0, t_final]
};

/// Tensor-product collocation grid. Interior point k = j * nx + i sits at
/// (x_i, t_j); the initial set is the nx points of the t = 0 slice.
struct CollocationSet {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<double> x_ic;
  std::vector<double> w_ic;
  std::size_t nx = 0;
  std::size_t nt = 0;
  Domain domain;

  std::size_t n_r() const { return x.size(); }
  std::size_t n_ic() const { return x_ic.size(); }
};

/// nx equispaced x in [0, L) times nt equispaced t in [0, T].
/// Throws ContractViolation if nx < 2 or nt < 2.
CollocationSet make_collocation(std::size_t nx, std::size_t nt,
                                const Domain& domain, const Expression& w0,
                                double c = 0.0);

/// Per-sample Eulerian residual R = w_t + f1 w_x - f2 w_xx.
Var residual_eulerian(Tape& tape, const PdeSpec& pde, const JetBatch& w);

struct LagrangianResiduals {
  Var r_x;  // dx/dt - f1
  Var r_w;  // dw/dt - f2 w_xx (physical second derivative)
};

inline constexpr double kDefaultJacobianFloor = 1e-6;

/// Residuals of the characteristic system. Jets are with respect to the label
/// x0; the physical second derivative uses
///   w_xx = (w_{x0x0} x_{x0} - w_{x0} x_{x0x0}) / x_{x0}^3.
/// Throws CharacteristicCrossing when any x_{x0} <= jacobian_floor.
LagrangianResiduals residual_lagrangian(
    Tape& tape, const PdeSpec& pde, const JetBatch& x, const JetBatch& w,
    double jacobian_floor = kDefaultJacobianFloor);

/// Denominators of the mean-square terms. Zero means "use the array size";
/// explicit values let a batch be split across workers.
struct LossDenominators {
  double n_r = 0.0;
  double n_ic = 0.0;
  double n_bc = 0.0;
};

/// Loss terms recorded on the tape. Absent terms are invalid Vars.
struct LossTerms {
  Var total;
  Var residual;    // lambda_r * mean(R^2), or the sum of both residual terms
  Var residual_x;  // Lagrangian only
  Var residual_w;  // Lagrangian only
  Var ic;          // lambda_ic * mean(ic^2), summed over x and w for LPINN
  Var bc;
};

/// lambda_r mean(R^2) + lambda_ic mean(ic^2) (+ lambda_bc mean(bc^2) when a
/// boundary mismatch is supplied). `ic` may be absent for a worker chunk that
/// carries only residual points. Throws ContractViolation on empty sets.
LossTerms loss_pinn(Tape& tape, Var residuals, Var ic_mismatch,
                    const LossWeights& weights, Var bc_mismatch = {},
                    const LossDenominators& denominators = {});

/// lambda_r [mean(R_x^2) + mean(R_w^2)]
///   + lambda_ic [mean((x(x0,0) - x0)^2) + mean((w(x0,0) - w0)^2)].
LossTerms loss_lpinn(Tape& tape, Var r_x, Var r_w, Var ic_x_mismatch,
                     Var ic_w_mismatch, const LossWeights& weights,
                     const LossDenominators& denominators = {});

}  // namespace lpinn
