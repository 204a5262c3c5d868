#include "lpinn/physics.hpp"

#include "lpinn/errors.hpp"

#include <cmath>

namespace lpinn {

void validate(const PdeSpec& pde) {
  if (!std::isfinite(pde.c) || !std::isfinite(pde.nu)) {
    throw ContractViolation("PDE coefficients must be finite");
  }
  if (pde.nu < 0.0) throw ContractViolation("diffusivity nu must be >= 0");
  if (pde.kind == PdeKind::Convection && pde.nu != 0.0) {
    throw ContractViolation("pure convection has no diffusion (nu must be 0)");
  }
}

std::string to_string(PdeKind kind) {
  switch (kind) {
    case PdeKind::Convection: return "convection";
    case PdeKind::ConvectionDiffusion: return "convection_diffusion";
    case PdeKind::Burgers: return "burgers";
  }
  return "unknown";
}

PdeKind pde_kind_from_string(const std::string& s) {
  if (s == "convection") return PdeKind::Convection;
  if (s == "convection_diffusion" || s == "convdiff") {
    return PdeKind::ConvectionDiffusion;
  }
  if (s == "burgers") return PdeKind::Burgers;
  throw ConfigError("unknown PDE kind '" + s +
                    "' (expected convection, convection_diffusion or burgers)");
}

CollocationSet make_collocation(std::size_t nx, std::size_t nt,
                                const Domain& domain, const Expression& w0,
                                double c) {
  if (nx < 2 || nt < 2) {
    throw ContractViolation("collocation grid needs nx >= 2 and nt >= 2");
  }
  CollocationSet set;
  set.nx = nx;
  set.nt = nt;
  set.domain = domain;
  set.x.reserve(nx * nt);
  set.t.reserve(nx * nt);
  const double dx = domain.length / static_cast<double>(nx);
  const double dt = domain.t_final / static_cast<double>(nt - 1);
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      set.x.push_back(static_cast<double>(i) * dx);
      set.t.push_back(static_cast<double>(j) * dt);
    }
  }
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) * dx;
    set.x_ic.push_back(x);
    set.w_ic.push_back(w0(x, c));
  }
  return set;
}

namespace {

Var need(Tape& tape, Var v, const JetBatch& like) {
  return v.valid() ? v : tape.constant(Array::Zero(like.rows, like.n));
}

Var mean_square(Tape& tape, Var v, double weight, double denominator) {
  const auto& a = tape.value(v);
  if (a.size() == 0) {
    throw ContractViolation("loss term over an empty collocation set");
  }
  const double n = denominator > 0.0 ? denominator : static_cast<double>(a.size());
  return tape.scale(tape.sum(tape.square(v)), weight / n);
}

Var add_opt(Tape& tape, Var a, Var b) {
  if (!a.valid()) return b;
  if (!b.valid()) return a;
  return tape.add(a, b);
}

}  // namespace

Var residual_eulerian(Tape& tape, const PdeSpec& pde, const JetBatch& w) {
  const Var w_t = need(tape, w.d_dt, w);
  const Var w_x = need(tape, w.d_dx, w);
  Var transport;
  if (pde.kind == PdeKind::Burgers) {
    transport = tape.mul(w.value, w_x);
  } else {
    transport = tape.scale(w_x, pde.c);
  }
  Var r = tape.add(w_t, transport);
  if (pde.nu != 0.0) {
    r = tape.sub(r, tape.scale(need(tape, w.d_dxx, w), pde.nu));
  }
  return r;
}

LagrangianResiduals residual_lagrangian(Tape& tape, const PdeSpec& pde,
                                        const JetBatch& x, const JetBatch& w,
                                        double jacobian_floor) {
  if (x.n != w.n) throw ShapeError("residual_lagrangian: x and w differ in n");
  const Var jac = need(tape, x.d_dx, x);
  const Array& j = tape.value(jac);
  for (Eigen::Index k = 0; k < j.size(); ++k) {
    if (!(j(k) > jacobian_floor)) {
      throw CharacteristicCrossing(
          "characteristics cross: dx/dx0 = " + std::to_string(j(k)) +
          " at sample " + std::to_string(k));
    }
  }

  LagrangianResiduals r;
  const Var x_t = need(tape, x.d_dt, x);
  if (pde.kind == PdeKind::Burgers) {
    r.r_x = tape.sub(x_t, w.value);
  } else {
    r.r_x = tape.shift(x_t, -pde.c);
  }

  r.r_w = need(tape, w.d_dt, w);
  if (pde.nu != 0.0) {
    const Var num = tape.sub(tape.mul(need(tape, w.d_dxx, w), jac),
                             tape.mul(need(tape, w.d_dx, w),
                                      need(tape, x.d_dxx, x)));
    const Var w_xx = tape.div(num, tape.mul(tape.square(jac), jac));
    r.r_w = tape.sub(r.r_w, tape.scale(w_xx, pde.nu));
  }
  return r;
}

LossTerms loss_pinn(Tape& tape, Var residuals, Var ic_mismatch,
                    const LossWeights& weights, Var bc_mismatch,
                    const LossDenominators& den) {
  LossTerms terms;
  terms.residual = mean_square(tape, residuals, weights.lambda_r, den.n_r);
  if (ic_mismatch.valid()) {
    terms.ic = mean_square(tape, ic_mismatch, weights.lambda_ic, den.n_ic);
  }
  if (bc_mismatch.valid() && weights.lambda_bc != 0.0) {
    terms.bc = mean_square(tape, bc_mismatch, weights.lambda_bc, den.n_bc);
  }
  terms.total = add_opt(tape, add_opt(tape, terms.residual, terms.ic), terms.bc);
  return terms;
}

LossTerms loss_lpinn(Tape& tape, Var r_x, Var r_w, Var ic_x_mismatch,
                     Var ic_w_mismatch, const LossWeights& weights,
                     const LossDenominators& den) {
  LossTerms terms;
  terms.residual_x = mean_square(tape, r_x, weights.lambda_r, den.n_r);
  terms.residual_w = mean_square(tape, r_w, weights.lambda_r, den.n_r);
  terms.residual = tape.add(terms.residual_x, terms.residual_w);
  if (ic_x_mismatch.valid() && ic_w_mismatch.valid()) {
    terms.ic = tape.add(
        mean_square(tape, ic_x_mismatch, weights.lambda_ic, den.n_ic),
        mean_square(tape, ic_w_mismatch, weights.lambda_ic, den.n_ic));
  } else if (ic_x_mismatch.valid() != ic_w_mismatch.valid()) {
    throw ContractViolation("loss_lpinn needs both initial-condition terms");
  }
  terms.total = add_opt(tape, terms.residual, terms.ic);
  return terms;
}

}  // namespace lpinn
