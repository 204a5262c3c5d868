#pragma once

#include "lpinn/objective.hpp"
#include "lpinn/param_vector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace lpinn {

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr = 0.01;
};

AdamState make_adam(std::size_t size, double lr = 0.01);

/// One bias-corrected Adam update of `theta` in place. Throws
/// TrainingDiverged (iteration = state.step + 1) on non-finite gradients
/// and ShapeError on length mismatch.
void adam_step(AdamState& state, Eigen::VectorXd& theta,
               const Eigen::VectorXd& gradient);

struct TrainConfig {
  long iterations = 1000;
  double lr = 0.01;
  std::uint64_t seed = 0;
  long log_every = 100;
  std::size_t batch = 0;  // 0: full grid every iteration
};

struct HistoryEntry {
  long iteration = 0;
  LossBreakdown loss;
};

struct TrainReport {
  std::vector<HistoryEntry> history;
  ParamVector final_params;
  LossBreakdown final_loss;  // full collocation set at the final parameters
  double wall_seconds = 0.0;
  TrainConfig config;
};

/// Minimizes the objective with Adam from `initial`.
///
/// Iteration k (1-based) evaluates the loss on a batch at the current
/// parameters, records it when k == 1, k % log_every == 0 or k is the last
/// iteration, and then steps. Batches are drawn without replacement from the
/// interior points using a generator seeded from config.seed.
///
/// Throws TrainingDiverged carrying the iteration on a non-finite loss or
/// gradient, or when the characteristics cross.
TrainReport train(const TrainConfig& config, const Objective& objective,
                  const ParamVector& initial);

}  // namespace lpinn
