#include <doctest.h>

#include "lpinn/checkpoint.hpp"
#include "lpinn/experiment.hpp"
#include "lpinn/reference.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace lpinn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("lpinn_test_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny(ModelKind kind, PdeKind pde = PdeKind::Convection) {
  ExperimentConfig c;
  c.pde.kind = pde;
  c.pde.c = 1.0;
  c.pde.nu = pde == PdeKind::Convection ? 0.0 : 0.1;
  c.model.kind = kind;
  c.model.width = 10;
  c.model.depth = 2;
  c.model.x_width = 8;
  c.model.x_depth = 1;
  c.grid.nx = 16;
  c.grid.nt = 6;
  c.training.iterations = 40;
  c.training.batch = 0;
  c.training.log_every = 10;
  c.analysis.n_grid = 5;
  c.analysis.landscape_batch = 32;
  c.analysis.power_iterations = 20;
  c.analysis.n_spec = 64;
  return c;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("truth fields per problem") {
    ExperimentConfig c = tiny(ModelKind::Pinn);
    c.pde.c = 3.0;
    const Grid g = grid(c);
    const Field conv = truth_field(c, g);
    CHECK(conv.values(5, 3) == doctest::Approx(std::sin(g.x[3] - 3.0)));

    c.pde.kind = PdeKind::ConvectionDiffusion;
    c.pde.nu = 0.1;
    const Field cd = truth_field(c, g);
    CHECK(cd.values(5, 3) == doctest::Approx(std::exp(-0.1) * std::sin(g.x[3] - 3.0)));
    c.grid.nx = 12;
    CHECK(truth_field(c, grid(c)).values(5, 3) ==
          doctest::Approx(std::exp(-0.1) * std::sin(grid(c).x[3] - 3.0)));

    c.pde.kind = PdeKind::Burgers;
    c.pde.c = 2.0;
    c.pde.nu = 0.1;
    c.grid.nx = 16;
    c.analysis.n_spec = 256;
    const Field b = truth_field(c, grid(c));
    CHECK(b.values(0, 4) == doctest::Approx(std::sin(g.x[4]) + 2.0));
  }

  TEST_CASE("a run writes its artifacts and can be re-scored") {
    TempDir dir("run");
    const ExperimentConfig c = tiny(ModelKind::Lpinn);
    const RunOutcome o = run_experiment(c, dir.path);
    REQUIRE(o.trained());
    REQUIRE(o.error);
    for (const char* f : {"config.yaml", "report.json", "loss.csv", "checkpoint.json",
                          "prediction.csv", "truth.csv", "error.json"}) {
      CHECK(fs::exists(dir.path / f));
    }
    const std::string loss = slurp(dir.path / "loss.csv");
    CHECK(loss.rfind("# config_hash: " + config_hash(c) + "\n# seed: 0\n", 0) == 0);
    CHECK(loss.find("iter,total,loss_r,loss_ic,loss_rx,loss_rw\n") != std::string::npos);

    const auto rep = nlohmann::json::parse(slurp(dir.path / "report.json"));
    CHECK(rep["status"] == "trained");
    CHECK(rep["config_hash"] == config_hash(c));
    CHECK(rep["history"].size() == 5);
    CHECK(rep["rel_error"].get<double>() == o.error->rel_error);

    const auto err = nlohmann::json::parse(slurp(dir.path / "error.json"));
    CHECK(err["interpolation"] == "quadratic_nearest3");

    CHECK(load_config(dir.path / "config.yaml").model.kind == ModelKind::Lpinn);
    TempDir again("rescore");
    const ErrorReport r = evaluate_checkpoint(c, dir.path / "checkpoint.json", again.path);
    CHECK(std::abs(r.rel_error - o.error->rel_error) <= 1e-12);
  }

  TEST_CASE("reruns are deterministic") {
    TempDir a("det_a"), b("det_b");
    const ExperimentConfig c = tiny(ModelKind::Pinn);
    const RunOutcome x = run_experiment(c, a.path);
    const RunOutcome y = run_experiment(c, b.path);
    REQUIRE(x.error);
    CHECK(x.error->rel_error == y.error->rel_error);
    CHECK(slurp(a.path / "checkpoint.json") == slurp(b.path / "checkpoint.json"));
    CHECK(slurp(a.path / "loss.csv") == slurp(b.path / "loss.csv"));
  }

  TEST_CASE("divergence becomes a report, not an exception") {
    TempDir dir("diverge");
    ExperimentConfig c = tiny(ModelKind::Lpinn, PdeKind::ConvectionDiffusion);
    c.pde.c = 30.0;
    c.training.lr = 1.0;
    const RunOutcome o = run_experiment(c, dir.path);
    CHECK(o.status == "failed_to_train");
    REQUIRE(o.divergence_iteration);
    CHECK(*o.divergence_iteration >= 1);
    CHECK_FALSE(o.error);
    const auto rep = nlohmann::json::parse(slurp(dir.path / "report.json"));
    CHECK(rep["status"] == "failed_to_train");
    CHECK(rep["divergence_iteration"].get<long>() == *o.divergence_iteration);
    CHECK(rep["rel_error"].is_null());
  }

  TEST_CASE("landscape and n-width artifacts") {
    TempDir dir("analysis");
    const ExperimentConfig c = tiny(ModelKind::Pinn);
    const ParamVector p = init_params(build_model(c), 0);
    const LandscapeOutcome l = compute_landscape(c, p, dir.path);
    CHECK(l.grid.log_loss.rows() == 5);
    CHECK(std::isfinite(l.grid.ruggedness));
    CHECK(std::abs(l.eigen.first.vector.dot(l.eigen.second.vector)) <= 1e-6);
    CHECK(l.center_log_loss == doctest::Approx(l.grid.log_loss(2, 2)));
    const std::string csv = slurp(dir.path / "landscape.csv");
    CHECK(csv.find("alpha,beta,log_loss\n") != std::string::npos);
    CHECK(fs::exists(dir.path / "landscape.json"));

    ExperimentConfig big = c;
    big.grid.nx = 256;
    big.grid.nt = 100;
    big.pde.c = 30.0;
    const NwidthOutcome n = compute_nwidth(big, dir.path);
    CHECK(n.modes_99 == 2);
    CHECK(fs::exists(dir.path / "singular_values.csv"));
    CHECK(fs::exists(dir.path / "nwidth.json"));
  }

  TEST_CASE("sweep table") {
    TempDir dir("sweep");
    ExperimentConfig c = tiny(ModelKind::Pinn);
    c.training.iterations = 5;
    const auto rows = run_sweep(c, {0.0, 2.5}, {ModelKind::Pinn, ModelKind::Lpinn}, dir.path);
    CHECK(rows.size() == 4);
    const std::string csv = slurp(dir.path / "error_vs_c.csv");
    CHECK(csv.find("model,c,status,rel_error,divergence_iteration,config_hash\n") !=
          std::string::npos);
    CHECK(csv.find("lpinn,2.5,trained,") != std::string::npos);
    CHECK(fs::is_directory(dir.path / "pinn_c0"));
  }
}
