#pragma once

#include "lpinn/jet.hpp"
#include "lpinn/param_vector.hpp"
#include "lpinn/tape.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lpinn {

enum class Activation { Tanh, Identity };

struct MlpConfig {
  int hidden_layers = 4;
  int width = 50;
  int out_dim = 1;
  Activation activation = Activation::Tanh;
  Activation final_activation = Activation::Identity;
};

/// Throws ContractViolation unless hidden_layers >= 1, width >= 1,
/// out_dim >= 1 and the final activation is the identity.
void validate(const MlpConfig& config);

/// Fully connected tanh network whose weights live in a shared ParamLayout.
class Mlp {
 public:
  Mlp(std::string prefix, MlpConfig config, int in_dim, ParamLayout& layout);

  JetBatch forward(Tape& tape, const JetBatch& input) const;

  const MlpConfig& config() const { return config_; }
  int in_dim() const { return in_dim_; }
  const std::vector<std::size_t>& weight_blocks() const { return weights_; }
  const std::vector<std::size_t>& bias_blocks() const { return biases_; }
  std::size_t parameter_count() const;

 private:
  MlpConfig config_;
  int in_dim_;
  std::vector<std::size_t> weights_;
  std::vector<std::size_t> biases_;
};

/// Closed-form trainable count of an MLP with `in_dim` inputs.
std::size_t mlp_parameter_count(const MlpConfig& config, int in_dim);

/// (cos(2 pi x / L), sin(2 pi x / L)); for the default L = 2 pi this is
/// (cos x, sin x). Jets follow the exact derivative rules.
std::pair<JetBatch, JetBatch> embed_periodic(
    Tape& tape, const JetBatch& x, double period = 2.0 * std::numbers::pi);

/// Eulerian network: w(x, t) from a single trunk.
class PinnModel {
 public:
  explicit PinnModel(MlpConfig trunk = {}, bool embeds_periodic = true,
                     double period = 2.0 * std::numbers::pi);

  /// Throws ShapeError if x and t differ in length.
  JetBatch forward(Tape& tape, const JetBatch& x, const JetBatch& t) const;

  const ParamLayout& layout() const { return layout_; }
  const Mlp& trunk() const { return trunk_; }
  bool embeds_periodic() const { return embeds_periodic_; }
  double period() const { return period_; }

 private:
  ParamLayout layout_;
  Mlp trunk_;
  bool embeds_periodic_;
  double period_;
};

/// Lagrangian network: two parallel branches over the label x0 and time t.
/// branch_x gives the characteristic position, branch_w the state carried
/// along it.
class LpinnModel {
 public:
  struct Output {
    JetBatch x;
    JetBatch w;
  };

  explicit LpinnModel(MlpConfig branch_x = {2, 50, 1}, MlpConfig branch_w = {},
                      bool embeds_periodic = true,
                      bool predict_displacement = true,
                      double period = 2.0 * std::numbers::pi);

  /// Jets of both outputs are taken with respect to (x0, t).
  Output forward(Tape& tape, const JetBatch& x0, const JetBatch& t) const;

  const ParamLayout& layout() const { return layout_; }
  const Mlp& branch_x() const { return branch_x_; }
  const Mlp& branch_w() const { return branch_w_; }
  bool embeds_periodic() const { return embeds_periodic_; }
  bool predict_displacement() const { return predict_displacement_; }
  double period() const { return period_; }

 private:
  ParamLayout layout_;
  Mlp branch_x_;
  Mlp branch_w_;
  bool embeds_periodic_;
  bool predict_displacement_;
  double period_;
};

using Model = std::variant<PinnModel, LpinnModel>;

const ParamLayout& layout_of(const Model& model);

/// Glorot-uniform weights, zero biases, reproducible from `seed`.
ParamVector init_params(const PinnModel& model, std::uint64_t seed);
ParamVector init_params(const LpinnModel& model, std::uint64_t seed);
ParamVector init_params(const Model& model, std::uint64_t seed);

/// [{"name", "shape": [r, c], "values": [...row-major]}...]
nlohmann::json params_to_json(const ParamVector& params);
/// Inverse of params_to_json. Throws ConfigError when names or shapes do not
/// match `expected`.
ParamVector params_from_json(const nlohmann::json& blocks,
                             const ParamLayout& expected);

}  // namespace lpinn
