#pragma once

#include "lpinn/network.hpp"
#include "lpinn/physics.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace lpinn {

/// Scalar values of the loss terms; absent terms are 0.
struct LossBreakdown {
  double total = 0.0;
  double residual = 0.0;
  double ic = 0.0;
  double residual_x = 0.0;
  double residual_w = 0.0;
};

struct Evaluation {
  LossBreakdown loss;
  Eigen::VectorXd gradient;  // empty when not requested
};

/// Physics-informed loss of one model on one collocation set.
///
/// Residual points are chosen per call; all initial-condition points are
/// always included. With threads > 1 the residual batch is split into
/// contiguous chunks, each on its own tape, and the chunk results are summed
/// in chunk order, so results depend on the thread count but not on timing.
class Objective {
 public:
  Objective(Model model, PdeSpec pde, CollocationSet collocation,
            LossWeights weights = {}, int threads = 1,
            double jacobian_floor = kDefaultJacobianFloor);

  /// `indices` selects interior points; an empty span means all of them.
  Evaluation evaluate(const ParamVector& params,
                      std::span<const std::size_t> indices,
                      bool with_gradient) const;

  LossBreakdown loss(const ParamVector& params,
                     std::span<const std::size_t> indices = {}) const;
  Eigen::VectorXd gradient(const ParamVector& params,
                           std::span<const std::size_t> indices = {}) const;

  const Model& model() const { return model_; }
  const PdeSpec& pde() const { return pde_; }
  const CollocationSet& collocation() const { return collocation_; }
  const LossWeights& weights() const { return weights_; }
  const ParamLayout& layout() const { return layout_of(model_); }
  bool lagrangian() const { return std::holds_alternative<LpinnModel>(model_); }
  int threads() const { return threads_; }

 private:
  Evaluation evaluate_chunk(const ParamVector& params,
                            std::span<const std::size_t> indices,
                            bool include_ic, bool with_gradient,
                            const LossDenominators& den) const;

  Model model_;
  PdeSpec pde_;
  CollocationSet collocation_;
  LossWeights weights_;
  int threads_;
  double jacobian_floor_;
};

}  // namespace lpinn
