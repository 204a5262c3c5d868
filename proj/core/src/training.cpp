#include "lpinn/training.hpp"

#include "lpinn/errors.hpp"
#include "lpinn/log.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace lpinn {

AdamState make_adam(std::size_t size, double lr) {
  AdamState s;
  s.m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  s.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  s.lr = lr;
  return s;
}

void adam_step(AdamState& s, Eigen::VectorXd& theta,
               const Eigen::VectorXd& g) {
  if (g.size() != theta.size() || s.m.size() != theta.size() ||
      s.v.size() != theta.size()) {
    throw ShapeError("adam_step: gradient, state and parameters differ in length");
  }
  if (!g.allFinite()) {
    throw TrainingDiverged("non-finite gradient", s.step + 1);
  }
  ++s.step;
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * g;
  s.v = s.beta2 * s.v + (1.0 - s.beta2) * g.cwiseAbs2();
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  theta.array() -=
      s.lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.eps);
}

namespace {

// Partial Fisher-Yates over a persistent permutation.
class BatchSampler {
 public:
  BatchSampler(std::size_t population, std::uint64_t seed)
      : perm_(population), rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  }

  std::span<const std::size_t> draw(std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, perm_.size() - 1);
      std::swap(perm_[i], perm_[pick(rng_)]);
    }
    return {perm_.data(), k};
  }

 private:
  std::vector<std::size_t> perm_;
  std::mt19937_64 rng_;
};

bool finite(const LossBreakdown& l) { return std::isfinite(l.total); }

}  // namespace

TrainReport train(const TrainConfig& config, const Objective& objective,
                  const ParamVector& initial) {
  if (config.iterations < 1) throw ContractViolation("iterations must be >= 1");
  if (!(config.lr > 0.0)) throw ContractViolation("learning rate must be > 0");
  if (config.log_every < 1) throw ContractViolation("log_every must be >= 1");

  const auto start = std::chrono::steady_clock::now();
  TrainReport report;
  report.config = config;

  const std::size_t n_r = objective.collocation().n_r();
  const bool full = config.batch == 0 || config.batch >= n_r;
  BatchSampler sampler(n_r, config.seed);

  Eigen::VectorXd theta = initial.values();
  AdamState adam = make_adam(static_cast<std::size_t>(theta.size()), config.lr);
  ParamVector current = initial;

  for (long it = 1; it <= config.iterations; ++it) {
    current.values() = theta;
    std::span<const std::size_t> batch;
    if (!full) batch = sampler.draw(config.batch);
    Evaluation ev;
    try {
      ev = objective.evaluate(current, batch, true);
    } catch (const CharacteristicCrossing& e) {
      throw TrainingDiverged(e.what(), it);
    }
    if (!finite(ev.loss)) throw TrainingDiverged("non-finite loss", it);
    if (it == 1 || it % config.log_every == 0 || it == config.iterations) {
      report.history.push_back({it, ev.loss});
      log::debug("iter {} loss {:.6e} (r {:.3e}, ic {:.3e})", it, ev.loss.total,
                 ev.loss.residual, ev.loss.ic);
    }
    if (!ev.gradient.allFinite()) throw TrainingDiverged("non-finite gradient", it);
    adam_step(adam, theta, ev.gradient);
  }

  current.values() = theta;
  try {
    report.final_loss = objective.loss(current);
  } catch (const CharacteristicCrossing& e) {
    throw TrainingDiverged(e.what(), config.iterations);
  }
  if (!finite(report.final_loss)) {
    throw TrainingDiverged("non-finite final loss", config.iterations);
  }
  report.final_params = std::move(current);
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

}  // namespace lpinn
