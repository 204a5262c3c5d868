#include "lpinn/network.hpp"

#include "lpinn/errors.hpp"

#include <array>
#include <cmath>
#include <random>

namespace lpinn {

void validate(const MlpConfig& config) {
  if (config.hidden_layers < 1) {
    throw ContractViolation("MLP needs at least one hidden layer");
  }
  if (config.width < 1) throw ContractViolation("MLP width must be >= 1");
  if (config.out_dim < 1) throw ContractViolation("MLP out_dim must be >= 1");
  if (config.final_activation != Activation::Identity) {
    throw ContractViolation("the output layer must be linear");
  }
}

std::size_t mlp_parameter_count(const MlpConfig& c, int in_dim) {
  const auto w = static_cast<std::size_t>(c.width);
  const auto in = static_cast<std::size_t>(in_dim);
  const auto out = static_cast<std::size_t>(c.out_dim);
  const auto hidden = static_cast<std::size_t>(c.hidden_layers);
  return (w * in + w) + (hidden - 1) * (w * w + w) + (out * w + out);
}

Mlp::Mlp(std::string prefix, MlpConfig config, int in_dim, ParamLayout& layout)
    : config_(config), in_dim_(in_dim) {
  validate(config_);
  if (in_dim < 1) throw ContractViolation("MLP input dimension must be >= 1");
  int fan_in = in_dim;
  for (int l = 0; l <= config_.hidden_layers; ++l) {
    const bool last = l == config_.hidden_layers;
    const int fan_out = last ? config_.out_dim : config_.width;
    const auto idx = std::to_string(l);
    weights_.push_back(layout.add(prefix + ".W" + idx, fan_out, fan_in));
    biases_.push_back(layout.add(prefix + ".b" + idx, fan_out, 1));
    fan_in = fan_out;
  }
}

std::size_t Mlp::parameter_count() const {
  return mlp_parameter_count(config_, in_dim_);
}

JetBatch Mlp::forward(Tape& tape, const JetBatch& input) const {
  if (input.rows != in_dim_) {
    throw ShapeError("MLP expects " + std::to_string(in_dim_) +
                     " input rows, got " + std::to_string(input.rows));
  }
  JetBatch a = input;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    a = jet::linear(tape, tape.param(weights_[l]), tape.param(biases_[l]), a);
    const bool last = l + 1 == weights_.size();
    const Activation act = last ? config_.final_activation : config_.activation;
    if (act == Activation::Tanh) a = jet::tanh(tape, a);
  }
  return a;
}

std::pair<JetBatch, JetBatch> embed_periodic(Tape& tape, const JetBatch& x,
                                             double period) {
  const double k = 2.0 * std::numbers::pi / period;
  const JetBatch phase = k == 1.0 ? x : jet::scale(tape, x, k);
  return {jet::cos(tape, phase), jet::sin(tape, phase)};
}

namespace {

void check_inputs(const JetBatch& x, const JetBatch& t) {
  if (x.n != t.n || x.rows != 1 || t.rows != 1) {
    throw ShapeError("network inputs must be single-row jets of equal length");
  }
}

JetBatch network_input(Tape& tape, const JetBatch& x, const JetBatch& t,
                       bool embeds_periodic, double period) {
  if (embeds_periodic) {
    auto [c, s] = embed_periodic(tape, x, period);
    const std::array<JetBatch, 3> parts{c, s, t};
    return jet::concat_rows(tape, parts);
  }
  const std::array<JetBatch, 2> parts{x, t};
  return jet::concat_rows(tape, parts);
}

void glorot(ParamVector& p, const Mlp& mlp, std::mt19937_64& rng) {
  for (auto b : mlp.weight_blocks()) {
    auto w = p.block(b);
    const double bound =
        std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
    }
  }
  for (auto b : mlp.bias_blocks()) p.block(b).setZero();
}

}  // namespace

PinnModel::PinnModel(MlpConfig trunk, bool embeds_periodic, double period)
    : layout_(),
      trunk_("trunk", trunk, embeds_periodic ? 3 : 2, layout_),
      embeds_periodic_(embeds_periodic),
      period_(period) {
  if (!(period > 0.0)) throw ContractViolation("domain period must be > 0");
}

JetBatch PinnModel::forward(Tape& tape, const JetBatch& x,
                            const JetBatch& t) const {
  check_inputs(x, t);
  return trunk_.forward(tape,
                        network_input(tape, x, t, embeds_periodic_, period_));
}

LpinnModel::LpinnModel(MlpConfig branch_x, MlpConfig branch_w,
                       bool embeds_periodic, bool predict_displacement,
                       double period)
    : layout_(),
      branch_x_("x", branch_x, embeds_periodic ? 3 : 2, layout_),
      branch_w_("w", branch_w, embeds_periodic ? 3 : 2, layout_),
      embeds_periodic_(embeds_periodic),
      predict_displacement_(predict_displacement),
      period_(period) {
  if (branch_x.out_dim != 1 || branch_w.out_dim != 1) {
    throw ContractViolation("LPINN branches must have a single output");
  }
  if (!(period > 0.0)) throw ContractViolation("domain period must be > 0");
}

LpinnModel::Output LpinnModel::forward(Tape& tape, const JetBatch& x0,
                                       const JetBatch& t) const {
  check_inputs(x0, t);
  // Fully parallel branches; the embedding is shared input, not shared weights.
  const JetBatch input =
      network_input(tape, x0, t, embeds_periodic_, period_);
  JetBatch x = branch_x_.forward(tape, input);
  if (predict_displacement_) x = jet::add(tape, x0, x);
  return {x, branch_w_.forward(tape, input)};
}

const ParamLayout& layout_of(const Model& model) {
  return std::visit([](const auto& m) -> const ParamLayout& { return m.layout(); },
                    model);
}

ParamVector init_params(const PinnModel& model, std::uint64_t seed) {
  ParamVector p(model.layout());
  std::mt19937_64 rng(seed);
  glorot(p, model.trunk(), rng);
  return p;
}

ParamVector init_params(const LpinnModel& model, std::uint64_t seed) {
  ParamVector p(model.layout());
  std::mt19937_64 rng(seed);
  glorot(p, model.branch_x(), rng);
  glorot(p, model.branch_w(), rng);
  return p;
}

ParamVector init_params(const Model& model, std::uint64_t seed) {
  return std::visit([seed](const auto& m) { return init_params(m, seed); },
                    model);
}

nlohmann::json params_to_json(const ParamVector& params) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < params.layout().blocks().size(); ++i) {
    const auto& b = params.layout().block(i);
    std::vector<double> values(params.values().data() + b.offset,
                               params.values().data() + b.offset + b.size());
    out.push_back({{"name", b.name},
                   {"shape", {b.rows, b.cols}},
                   {"values", std::move(values)}});
  }
  return out;
}

ParamVector params_from_json(const nlohmann::json& blocks,
                             const ParamLayout& expected) {
  if (!blocks.is_array() || blocks.size() != expected.blocks().size()) {
    throw ConfigError("checkpoint has " +
                      std::to_string(blocks.is_array() ? blocks.size() : 0) +
                      " parameter blocks, expected " +
                      std::to_string(expected.blocks().size()));
  }
  ParamVector p(expected);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& want = expected.block(i);
    const auto& got = blocks[i];
    try {
      const auto name = got.at("name").get<std::string>();
      const auto shape = got.at("shape").get<std::vector<Eigen::Index>>();
      const auto values = got.at("values").get<std::vector<double>>();
      if (name != want.name || shape.size() != 2 || shape[0] != want.rows ||
          shape[1] != want.cols || values.size() != want.size()) {
        throw ConfigError("checkpoint block " + std::to_string(i) + " ('" +
                          name + "') does not match expected '" + want.name +
                          "' " + std::to_string(want.rows) + "x" +
                          std::to_string(want.cols));
      }
      std::copy(values.begin(), values.end(),
                p.values().data() + want.offset);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed checkpoint block " + std::to_string(i) +
                        ": " + e.what());
    }
  }
  return p;
}

}  // namespace lpinn
