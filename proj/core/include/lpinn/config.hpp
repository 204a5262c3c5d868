#pragma once

#include "lpinn/network.hpp"
#include "lpinn/physics.hpp"
#include "lpinn/reference.hpp"
#include "lpinn/training.hpp"

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace lpinn {

enum class ModelKind { Pinn, Lpinn };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct ExperimentConfig {
  struct Pde {
    PdeKind kind = PdeKind::Convection;
    double c = 0.0;
    double nu = 0.0;
    std::string ic;  // empty: sin(x), or sin(x) + c for Burgers
  } pde;

  struct ModelSection {
    ModelKind kind = ModelKind::Pinn;
    int width = 50;
    int depth = 4;
    int x_width = 50;
    int x_depth = 2;
    bool periodic = true;
    bool predict_displacement = true;
  } model;

  struct GridSection {
    std::size_t nx = 256;
    std::size_t nt = 100;
    double length = 2.0 * std::numbers::pi;
    double t_final = 1.0;
  } grid;

  struct TrainingSection {
    long iterations = 20000;
    double lr = 0.01;
    double lambda_r = 10.0;
    double lambda_ic = 1000.0;
    double lambda_bc = 0.0;
    std::uint64_t seed = 0;
    std::size_t batch = 2048;
    long log_every = 100;
    int threads = 1;
  } training;

  struct AnalysisSection {
    double alpha0 = 0.5;
    double beta0 = 0.5;
    int n_grid = 21;
    std::size_t landscape_batch = 2048;
    int power_iterations = 200;
    std::size_t n_spec = 512;
  } analysis;

  struct Output {
    std::string directory = "runs/default";
    bool binary_fields = false;
  } output;
};

/// Throws ConfigError describing the first invalid field.
void validate(const ExperimentConfig& config);

/// Parses the nested key-value (YAML) config. Unknown sections or keys and
/// invalid values raise ConfigError with "path:line:" anchoring.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text,
                              const std::string& origin = "<string>");

/// Canonical text form; parse_config(serialize_config(c)) == c and the text
/// is stable under a second round trip.
std::string serialize_config(const ExperimentConfig& config);
void save_config(const std::filesystem::path& path, const ExperimentConfig& config);

/// 16 hex digits (FNV-1a 64) over the fields that determine training results:
/// pde, model, grid and training except threads and log_every.
std::string config_hash(const ExperimentConfig& config);

std::string initial_condition_source(const ExperimentConfig& config);
Expression initial_condition(const ExperimentConfig& config);
PdeSpec pde_spec(const ExperimentConfig& config);
Domain domain(const ExperimentConfig& config);
Grid grid(const ExperimentConfig& config);
LossWeights loss_weights(const ExperimentConfig& config);
TrainConfig train_config(const ExperimentConfig& config);
Model build_model(const ExperimentConfig& config);
CollocationSet collocation(const ExperimentConfig& config);
Objective build_objective(const ExperimentConfig& config);

}  // namespace lpinn
