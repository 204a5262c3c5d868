#include <doctest.h>

#include "lpinn/config.hpp"
#include "lpinn/errors.hpp"

#include <filesystem>
#include <random>
#include <string>

using namespace lpinn;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

ExperimentConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(1, 9);
  ExperimentConfig c;
  const int kind = small(rng) % 3;
  c.pde.kind = static_cast<PdeKind>(kind);
  c.pde.c = 100.0 * u(rng) - 20.0;
  c.pde.nu = c.pde.kind == PdeKind::Convection ? 0.0 : u(rng) / 3.0 + 1e-9;
  c.pde.ic = small(rng) % 2 ? "" : "sin(x) + 0.5*cos(2*x)";
  c.model.kind = small(rng) % 2 ? ModelKind::Pinn : ModelKind::Lpinn;
  c.model.width = small(rng) * 7;
  c.model.depth = small(rng);
  c.model.x_width = small(rng) * 3;
  c.model.x_depth = small(rng);
  c.model.predict_displacement = small(rng) % 2;
  c.grid.nx = 2 + small(rng) * 30;
  c.grid.nt = 2 + small(rng) * 11;
  c.grid.length = 1.0 + 9.0 * u(rng);
  c.grid.t_final = u(rng) + 0.1;
  c.training.iterations = small(rng) * 1111;
  c.training.lr = u(rng) * 1e-2 + 1e-6;
  c.training.lambda_r = u(rng) * 50;
  c.training.lambda_ic = u(rng) * 5000;
  c.training.seed = rng() >> 1;
  c.training.batch = static_cast<std::size_t>(small(rng)) * 100;
  c.training.log_every = small(rng);
  c.training.threads = small(rng);
  c.analysis.alpha0 = u(rng) + 0.01;
  c.analysis.beta0 = 1e-3 * u(rng) + 1e-9;
  c.analysis.n_grid = 3 + small(rng);
  c.analysis.n_spec = std::size_t{1} << (2 + small(rng));
  c.output.directory = "runs/with space/\"quoted\" \\ back";
  c.output.binary_fields = small(rng) % 2;
  return c;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("shipped configs load") {
    const std::filesystem::path dir = std::filesystem::path(LPINN_SOURCE_DIR) / "configs";
    REQUIRE(std::filesystem::exists(dir / "default.yaml"));
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.path().extension() != ".yaml") continue;
      CAPTURE(e.path().string());
      CHECK_NOTHROW(load_config(e.path()));
      ++count;
    }
    CHECK(count >= 4);
  }

  TEST_CASE("empty document gives the defaults") {
    const ExperimentConfig c = parse_config("{}");
    CHECK(c.training.iterations == 20000);
    CHECK(c.training.lr == 0.01);
    CHECK(c.grid.nx == 256);
    CHECK(c.grid.nt == 100);
    CHECK(c.model.width == 50);
    CHECK(c.model.depth == 4);
    CHECK(serialize_config(c) == serialize_config(ExperimentConfig{}));
  }

  TEST_CASE("random configs round-trip byte for byte") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
      const ExperimentConfig c = random_config(rng);
      const std::string text = serialize_config(c);
      CAPTURE(text);
      const ExperimentConfig back = parse_config(text);
      CHECK(serialize_config(back) == text);
      CHECK(config_hash(back) == config_hash(c));
    }
  }

  TEST_CASE("hash tracks result-relevant fields only") {
    ExperimentConfig a;
    const std::string h = config_hash(a);
    CHECK(h.size() == 16);
    ExperimentConfig b = a;
    b.training.threads = 4;
    b.training.log_every = 7;
    b.output.directory = "elsewhere";
    b.analysis.n_grid = 5;
    CHECK(config_hash(b) == h);
    b.pde.c = 1e-12;
    CHECK(config_hash(b) != h);
    ExperimentConfig s = a;
    s.training.seed = 1;
    CHECK(config_hash(s) != h);
  }

  TEST_CASE("unknown keys name file and line") {
    const std::string msg = error_of("pde:\n  kind: convection\n  speed: 3\n");
    CHECK(msg.find("test.yaml:3:") != std::string::npos);
    CHECK(msg.find("pde.speed") != std::string::npos);
    CHECK(error_of("solver:\n  x: 1\n").find("unknown section 'solver'") != std::string::npos);
  }

  TEST_CASE("bad values are rejected") {
    CHECK(error_of("training:\n  lr: -1\n").find("test.yaml:2:") != std::string::npos);
    CHECK_FALSE(error_of("training:\n  lr: .inf\n").empty());
    CHECK_FALSE(error_of("training:\n  iterations: 0\n").empty());
    CHECK_FALSE(error_of("training:\n  iterations: 1.5\n").empty());
    CHECK_FALSE(error_of("pde:\n  kind: convection\n  nu: 0.1\n").empty());
    CHECK_FALSE(error_of("pde:\n  kind: burgers\n  nu: 0\n").empty());
    CHECK_FALSE(error_of("pde:\n  kind: heat\n").empty());
    CHECK_FALSE(error_of("pde:\n  ic: sin(x\n").empty());
    CHECK_FALSE(error_of("model:\n  kind: cnn\n").empty());
    CHECK_FALSE(error_of("model:\n  periodic: maybe\n").empty());
    CHECK_FALSE(error_of("training:\n  lambda_bc: 1\n").empty());
    CHECK_FALSE(error_of("analysis:\n  n_spec: 500\n").empty());
    CHECK_FALSE(error_of("grid: [1, 2]\n").empty());
    CHECK(error_of("pde:\n  kind: [\n").find("test.yaml:") != std::string::npos);
  }

  TEST_CASE("expressions are accepted for lengths") {
    const ExperimentConfig c = parse_config("grid:\n  length: 2*pi\n");
    CHECK(c.grid.length == 2.0 * M_PI);
  }

  TEST_CASE("derived objects follow the config") {
    ExperimentConfig c;
    c.pde.kind = PdeKind::Burgers;
    c.pde.c = 30.0;
    c.pde.nu = 0.01;
    CHECK(initial_condition_source(c) == "sin(x) + c");
    CHECK(initial_condition(c)(0.0, 30.0) == 30.0);
    c.grid.nx = 16;
    c.grid.nt = 4;
    const CollocationSet col = collocation(c);
    CHECK(col.n_r() == 64);
    CHECK(col.w_ic[0] == 30.0);
    c.model.kind = ModelKind::Lpinn;
    const Model m = build_model(c);
    CHECK(std::holds_alternative<LpinnModel>(m));
    CHECK(std::get<LpinnModel>(m).branch_x().config().hidden_layers == 2);
    CHECK(train_config(c).batch == 2048);
  }
}
