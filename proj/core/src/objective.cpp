#include "lpinn/objective.hpp"

#include "lpinn/errors.hpp"

#include <exception>
#include <limits>
#include <numeric>
#include <thread>
#include <utility>

namespace lpinn {

Objective::Objective(Model model, PdeSpec pde, CollocationSet collocation,
                     LossWeights weights, int threads, double jacobian_floor)
    : model_(std::move(model)),
      pde_(pde),
      collocation_(std::move(collocation)),
      weights_(weights),
      threads_(threads),
      jacobian_floor_(jacobian_floor) {
  validate(pde_);
  if (threads_ < 1) throw ContractViolation("thread count must be >= 1");
  if (collocation_.n_r() == 0 || collocation_.n_ic() == 0) {
    throw ContractViolation("collocation set is empty");
  }
}

Evaluation Objective::evaluate_chunk(const ParamVector& params,
                                     std::span<const std::size_t> indices,
                                     bool include_ic, bool with_gradient,
                                     const LossDenominators& den) const {
  std::vector<double> xs(indices.size());
  std::vector<double> ts(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    xs[k] = collocation_.x.at(indices[k]);
    ts[k] = collocation_.t.at(indices[k]);
  }
  const std::vector<double> t0(collocation_.n_ic(), 0.0);
  const auto n_ic = static_cast<Eigen::Index>(collocation_.n_ic());

  Tape tape(params);
  auto [xj, tj] = seed_inputs(tape, xs, ts);
  LossTerms terms;
  if (const auto* pinn = std::get_if<PinnModel>(&model_)) {
    const JetBatch w = pinn->forward(tape, xj, tj);
    const Var r = residual_eulerian(tape, pde_, w);
    Var ic;
    if (include_ic) {
      auto [xi, ti] = seed_inputs(tape, collocation_.x_ic, t0, false);
      const JetBatch w0 = pinn->forward(tape, xi, ti);
      const Var target = tape.constant(
          Eigen::Map<const Eigen::ArrayXd>(collocation_.w_ic.data(), n_ic).transpose());
      ic = tape.sub(w0.value, target);
    }
    terms = loss_pinn(tape, r, ic, weights_, {}, den);
  } else {
    const auto& lpinn = std::get<LpinnModel>(model_);
    const auto out = lpinn.forward(tape, xj, tj);
    // With nu = 0 the chain-rule term is never formed, so a transient fold
    // divides nothing. Crossed characteristics still fail at interpolation.
    const double floor = pde_.nu == 0.0 ? -std::numeric_limits<double>::infinity()
                                        : jacobian_floor_;
    const auto r = residual_lagrangian(tape, pde_, out.x, out.w, floor);
    Var ic_x;
    Var ic_w;
    if (include_ic) {
      auto [xi, ti] = seed_inputs(tape, collocation_.x_ic, t0, false);
      const auto o0 = lpinn.forward(tape, xi, ti);
      ic_x = tape.sub(o0.x.value, xi.value);
      const Var target = tape.constant(
          Eigen::Map<const Eigen::ArrayXd>(collocation_.w_ic.data(), n_ic).transpose());
      ic_w = tape.sub(o0.w.value, target);
    }
    terms = loss_lpinn(tape, r.r_x, r.r_w, ic_x, ic_w, weights_, den);
  }

  Evaluation ev;
  auto val = [&](Var v) { return v.valid() ? tape.scalar(v) : 0.0; };
  ev.loss.total = val(terms.total);
  ev.loss.residual = val(terms.residual);
  ev.loss.ic = val(terms.ic);
  ev.loss.residual_x = val(terms.residual_x);
  ev.loss.residual_w = val(terms.residual_w);
  if (with_gradient) ev.gradient = tape.backward(terms.total).values();
  return ev;
}

Evaluation Objective::evaluate(const ParamVector& params,
                               std::span<const std::size_t> indices,
                               bool with_gradient) const {
  if (!(params.layout() == layout())) {
    throw ShapeError("parameter layout does not match the model");
  }
  std::vector<std::size_t> all;
  if (indices.empty()) {
    all.resize(collocation_.n_r());
    std::iota(all.begin(), all.end(), std::size_t{0});
    indices = all;
  }
  LossDenominators den;
  den.n_r = static_cast<double>(indices.size());
  den.n_ic = static_cast<double>(collocation_.n_ic());

  const auto chunks = std::min<std::size_t>(static_cast<std::size_t>(threads_),
                                            indices.size());
  if (chunks <= 1) return evaluate_chunk(params, indices, true, with_gradient, den);

  std::vector<std::span<const std::size_t>> slices;
  const std::size_t base = indices.size() / chunks;
  const std::size_t extra = indices.size() % chunks;
  for (std::size_t c = 0, begin = 0; c < chunks; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    slices.push_back(indices.subspan(begin, len));
    begin += len;
  }

  std::vector<Evaluation> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  auto job = [&](std::size_t c) {
    try {
      parts[c] = evaluate_chunk(params, slices[c], c == 0, with_gradient, den);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  std::vector<std::thread> workers;
  for (std::size_t c = 1; c < chunks; ++c) workers.emplace_back(job, c);
  job(0);
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Evaluation sum = std::move(parts[0]);
  for (std::size_t c = 1; c < chunks; ++c) {
    sum.loss.total += parts[c].loss.total;
    sum.loss.residual += parts[c].loss.residual;
    sum.loss.residual_x += parts[c].loss.residual_x;
    sum.loss.residual_w += parts[c].loss.residual_w;
    if (with_gradient) sum.gradient += parts[c].gradient;
  }
  return sum;
}

LossBreakdown Objective::loss(const ParamVector& params,
                              std::span<const std::size_t> indices) const {
  return evaluate(params, indices, false).loss;
}

Eigen::VectorXd Objective::gradient(const ParamVector& params,
                                    std::span<const std::size_t> indices) const {
  return evaluate(params, indices, true).gradient;
}

}  // namespace lpinn
