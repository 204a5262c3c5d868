#pragma once

#include "lpinn/config.hpp"
#include "lpinn/error_metric.hpp"
#include "lpinn/field.hpp"
#include "lpinn/hessian.hpp"
#include "lpinn/landscape.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lpinn {

/// Reference solution of the configured problem on `grid`: exact transport
/// for convection, per-mode exact evolution for convection-diffusion, and
/// the pseudo-spectral solver for Burgers.
Field truth_field(const ExperimentConfig& config, const Grid& grid);

struct RunOutcome {
  std::string status;  // "trained" or "failed_to_train"
  std::optional<long> divergence_iteration;
  std::string reason;
  std::optional<ErrorReport> error;  // absent when training failed
  std::optional<TrainReport> report;
  std::string config_hash;
  std::uint64_t seed = 0;

  bool trained() const { return status == "trained"; }
};

/// Trains the configured model and writes config.yaml, report.json,
/// loss.csv, checkpoint.json, prediction.csv, truth.csv and error.json into
/// `out`. Divergence is not an exception here: it produces a report with
/// status "failed_to_train" and the divergence iteration.
RunOutcome run_experiment(const ExperimentConfig& config,
                          const std::filesystem::path& out);

/// Recomputes the error of a saved checkpoint and writes error.json and
/// prediction.csv into `out`.
ErrorReport evaluate_checkpoint(const ExperimentConfig& config,
                                const std::filesystem::path& checkpoint,
                                const std::filesystem::path& out);

struct LandscapeOutcome {
  HessianTop2 eigen;
  LandscapeGrid grid;
  double center_log_loss = 0.0;
  int argmin_offset_alpha = 0;  // cells between the center and the minimum
  int argmin_offset_beta = 0;
};

/// Top-2 Hessian eigenpairs and the log-loss slice around the parameters of
/// `params`, on a fixed seeded subsample of analysis.landscape_batch interior
/// points. Writes landscape.csv and landscape.json when `out` is non-empty.
LandscapeOutcome compute_landscape(const ExperimentConfig& config,
                                   const ParamVector& params,
                                   const std::filesystem::path& out = {});

struct NwidthOutcome {
  std::vector<double> singular_values;
  std::size_t modes_99 = 0;
};

/// Snapshot SVD of the reference field; writes singular_values.csv and
/// nwidth.json when `out` is non-empty.
NwidthOutcome compute_nwidth(const ExperimentConfig& config,
                             const std::filesystem::path& out = {});

/// Writes reference.csv (and reference.bin with output.binary_fields).
Field write_reference(const ExperimentConfig& config,
                      const std::filesystem::path& out);

struct SweepRow {
  ModelKind model = ModelKind::Pinn;
  double c = 0.0;
  RunOutcome outcome;
};

/// One run per (model, c) under out/<model>_c<c>, then error_vs_c.csv.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::vector<double>& c_values,
                                const std::vector<ModelKind>& models,
                                const std::filesystem::path& out);

}  // namespace lpinn
