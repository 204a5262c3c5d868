// Command-line front end: one subcommand per experiment stage.

#include "lpinn/allocator.hpp"
#include "lpinn/checkpoint.hpp"
#include "lpinn/config.hpp"
#include "lpinn/errors.hpp"
#include "lpinn/experiment.hpp"
#include "lpinn/log.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace lpinn;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<long> iterations;
};

void add_common(CLI::App* app, Common& o) {
  app->add_option("--config", o.config, "YAML experiment config")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "override training.seed");
  app->add_option("--out", o.out, "output directory (overrides output.directory)");
  app->add_option("--threads", o.threads, "worker threads for loss evaluation")
      ->check(CLI::PositiveNumber);
  app->add_option("--iterations", o.iterations, "override training.iterations")
      ->check(CLI::PositiveNumber);
}

// Flags override file values; the merged config is validated once.
ExperimentConfig resolve(const Common& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) c.training.seed = *o.seed;
  if (o.out) c.output.directory = *o.out;
  if (o.threads) c.training.threads = *o.threads;
  if (o.iterations) c.training.iterations = *o.iterations;
  validate(c);
  return c;
}

fs::path checkpoint_path(const std::string& flag, const ExperimentConfig& c) {
  return flag.empty() ? fs::path(c.output.directory) / "checkpoint.json" : fs::path(flag);
}

}  // namespace

int main(int argc, char** argv) {
  keep_freed_memory();
  log::init_from_env();

  CLI::App app{"Eulerian and Lagrangian physics-informed networks for 1-D transport"};
  app.require_subcommand(1);

  Common common;
  std::string checkpoint;

  auto* train = app.add_subcommand("train", "train a model and write its artifacts");
  add_common(train, common);

  auto* evaluate = app.add_subcommand("evaluate", "recompute the error of a checkpoint");
  add_common(evaluate, common);
  evaluate->add_option("--checkpoint", checkpoint, "checkpoint.json (default: <out>/checkpoint.json)");

  auto* landscape = app.add_subcommand("landscape", "Hessian eigenpairs and loss slice");
  add_common(landscape, common);
  landscape->add_option("--checkpoint", checkpoint, "checkpoint.json (default: <out>/checkpoint.json)");

  auto* nwidth = app.add_subcommand("nwidth", "singular values of the reference snapshots");
  add_common(nwidth, common);

  std::optional<std::string> pde;
  std::optional<double> nu;
  std::optional<double> speed;
  auto* reference = app.add_subcommand("reference", "write the reference field");
  add_common(reference, common);
  reference->add_option("--pde", pde, "convection | convection_diffusion | burgers");
  reference->add_option("--nu", nu, "diffusivity");
  reference->add_option("--c", speed, "convection speed (Burgers: initial offset)");

  std::vector<double> c_values{0, 10, 20, 30, 40, 50};
  std::vector<std::string> models{"pinn", "lpinn"};
  auto* sweep = app.add_subcommand("sweep", "train every (model, c) pair");
  add_common(sweep, common);
  sweep->add_option("--c-values", c_values, "convection speeds")->delimiter(',');
  sweep->add_option("--models", models, "model kinds")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig c = resolve(common);
    const fs::path out = c.output.directory;

    if (train->parsed()) {
      const auto o = run_experiment(c, out);
      if (o.error) {
        std::printf("%s rel_error %.6g\n", o.status.c_str(), o.error->rel_error);
      } else {
        std::printf("%s at iteration %ld: %s\n", o.status.c_str(),
                    o.divergence_iteration.value_or(0), o.reason.c_str());
      }
    } else if (evaluate->parsed()) {
      const auto r = evaluate_checkpoint(c, checkpoint_path(checkpoint, c), out);
      std::printf("rel_error %.17g\n", r.rel_error);
    } else if (landscape->parsed()) {
      const auto ck = load_checkpoint(checkpoint_path(checkpoint, c), c);
      const auto r = compute_landscape(c, ck.params, out);
      std::printf("lambda1 %.6g lambda2 %.6g ruggedness %.6g\n", r.eigen.first.value,
                  r.eigen.second.value, r.grid.ruggedness);
    } else if (nwidth->parsed()) {
      const auto r = compute_nwidth(c, out);
      std::printf("modes for 99%% energy: %zu of %zu\n", r.modes_99,
                  r.singular_values.size());
    } else if (reference->parsed()) {
      if (pde) c.pde.kind = pde_kind_from_string(*pde);
      if (nu) c.pde.nu = *nu;
      if (speed) c.pde.c = *speed;
      validate(c);
      const auto f = write_reference(c, out);
      std::printf("wrote %zu x %zu field to %s\n", f.nt(), f.nx(), out.c_str());
    } else if (sweep->parsed()) {
      std::vector<ModelKind> kinds;
      for (const auto& m : models) kinds.push_back(model_kind_from_string(m));
      for (const auto& row : run_sweep(c, c_values, kinds, out)) {
        std::printf("%-5s c=%-4g %-16s %s\n", to_string(row.model).c_str(), row.c,
                    row.outcome.status.c_str(),
                    row.outcome.error ? std::to_string(row.outcome.error->rel_error).c_str()
                                      : "-");
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
