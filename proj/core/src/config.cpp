#include "lpinn/config.hpp"

#include "lpinn/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lpinn {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Pinn ? "pinn" : "lpinn";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "pinn") return ModelKind::Pinn;
  if (s == "lpinn") return ModelKind::Lpinn;
  throw ConfigError("unknown model kind '" + s + "' (expected pinn or lpinn)");
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  // Keep floats recognizable as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const auto line = node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + msg);
  }

  double real(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a number");
    const auto s = n.Scalar();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      try {
        v = Expression(s)(0.0);
      } catch (const ConfigError&) {
        fail(n, key + ": '" + s + "' is not a number");
      }
    }
    if (!std::isfinite(v)) fail(n, key + ": value is not finite");
    return v;
  }

  long integer(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected an integer");
    const auto s = n.Scalar();
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(n, key + ": '" + s + "' is not an integer");
    }
    return v;
  }

  long at_least(const YAML::Node& n, const std::string& key, long lo) const {
    const long v = integer(n, key);
    if (v < lo) fail(n, key + " must be >= " + std::to_string(lo));
    return v;
  }

  bool boolean(const YAML::Node& n, const std::string& key) const {
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, key + ": expected true or false");
    }
  }

  std::string text(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a string");
    return n.Scalar();
  }

  using Setter = std::function<void(const YAML::Node&)>;

  void section(const YAML::Node& node, const std::string& name,
               const std::map<std::string, Setter>& setters) const {
    if (node.IsNull()) return;
    if (!node.IsMap()) fail(node, "section '" + name + "' must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.Scalar();
      const auto it = setters.find(key);
      if (it == setters.end()) fail(kv.first, "unknown key '" + name + "." + key + "'");
      it->second(kv.second);
    }
  }

 private:
  std::string origin_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  ExperimentConfig c;
  if (root.IsNull()) {
    validate(c);
    return c;
  }
  const Reader r(origin);
  if (!root.IsMap()) r.fail(root, "config must be a mapping of sections");

  auto& p = c.pde;
  auto& m = c.model;
  auto& g = c.grid;
  auto& t = c.training;
  auto& a = c.analysis;
  auto& o = c.output;

  const std::map<std::string, std::map<std::string, Reader::Setter>> sections{
      {"pde",
       {{"kind",
         [&](const YAML::Node& n) {
           try {
             p.kind = pde_kind_from_string(r.text(n, "pde.kind"));
           } catch (const ConfigError& e) {
             r.fail(n, e.what());
           }
         }},
        {"c", [&](const YAML::Node& n) { p.c = r.real(n, "pde.c"); }},
        {"nu",
         [&](const YAML::Node& n) {
           p.nu = r.real(n, "pde.nu");
           if (p.nu < 0.0) r.fail(n, "pde.nu must be >= 0");
         }},
        {"ic",
         [&](const YAML::Node& n) {
           p.ic = r.text(n, "pde.ic");
           try {
             if (!p.ic.empty()) Expression{p.ic};
           } catch (const ConfigError& e) {
             r.fail(n, e.what());
           }
         }}}},
      {"model",
       {{"kind",
         [&](const YAML::Node& n) {
           try {
             m.kind = model_kind_from_string(r.text(n, "model.kind"));
           } catch (const ConfigError& e) {
             r.fail(n, e.what());
           }
         }},
        {"width", [&](const YAML::Node& n) { m.width = static_cast<int>(r.at_least(n, "model.width", 1)); }},
        {"depth", [&](const YAML::Node& n) { m.depth = static_cast<int>(r.at_least(n, "model.depth", 1)); }},
        {"x_width", [&](const YAML::Node& n) { m.x_width = static_cast<int>(r.at_least(n, "model.x_width", 1)); }},
        {"x_depth", [&](const YAML::Node& n) { m.x_depth = static_cast<int>(r.at_least(n, "model.x_depth", 1)); }},
        {"periodic", [&](const YAML::Node& n) { m.periodic = r.boolean(n, "model.periodic"); }},
        {"predict_displacement",
         [&](const YAML::Node& n) {
           m.predict_displacement = r.boolean(n, "model.predict_displacement");
         }}}},
      {"grid",
       {{"nx", [&](const YAML::Node& n) { g.nx = static_cast<std::size_t>(r.at_least(n, "grid.nx", 2)); }},
        {"nt", [&](const YAML::Node& n) { g.nt = static_cast<std::size_t>(r.at_least(n, "grid.nt", 2)); }},
        {"length",
         [&](const YAML::Node& n) {
           g.length = r.real(n, "grid.length");
           if (!(g.length > 0.0)) r.fail(n, "grid.length must be > 0");
         }},
        {"t_final",
         [&](const YAML::Node& n) {
           g.t_final = r.real(n, "grid.t_final");
           if (!(g.t_final > 0.0)) r.fail(n, "grid.t_final must be > 0");
         }}}},
      {"training",
       {{"iterations", [&](const YAML::Node& n) { t.iterations = r.at_least(n, "training.iterations", 1); }},
        {"lr",
         [&](const YAML::Node& n) {
           t.lr = r.real(n, "training.lr");
           if (!(t.lr > 0.0)) r.fail(n, "training.lr must be > 0");
         }},
        {"lambda_r", [&](const YAML::Node& n) { t.lambda_r = r.real(n, "training.lambda_r"); }},
        {"lambda_ic", [&](const YAML::Node& n) { t.lambda_ic = r.real(n, "training.lambda_ic"); }},
        {"lambda_bc", [&](const YAML::Node& n) { t.lambda_bc = r.real(n, "training.lambda_bc"); }},
        {"seed", [&](const YAML::Node& n) { t.seed = static_cast<std::uint64_t>(r.at_least(n, "training.seed", 0)); }},
        {"batch", [&](const YAML::Node& n) { t.batch = static_cast<std::size_t>(r.at_least(n, "training.batch", 0)); }},
        {"log_every", [&](const YAML::Node& n) { t.log_every = r.at_least(n, "training.log_every", 1); }},
        {"threads", [&](const YAML::Node& n) { t.threads = static_cast<int>(r.at_least(n, "training.threads", 1)); }}}},
      {"analysis",
       {{"alpha0", [&](const YAML::Node& n) { a.alpha0 = r.real(n, "analysis.alpha0"); }},
        {"beta0", [&](const YAML::Node& n) { a.beta0 = r.real(n, "analysis.beta0"); }},
        {"n_grid", [&](const YAML::Node& n) { a.n_grid = static_cast<int>(r.at_least(n, "analysis.n_grid", 3)); }},
        {"landscape_batch",
         [&](const YAML::Node& n) {
           a.landscape_batch = static_cast<std::size_t>(r.at_least(n, "analysis.landscape_batch", 0));
         }},
        {"power_iterations",
         [&](const YAML::Node& n) {
           a.power_iterations = static_cast<int>(r.at_least(n, "analysis.power_iterations", 1));
         }},
        {"n_spec",
         [&](const YAML::Node& n) {
           a.n_spec = static_cast<std::size_t>(r.at_least(n, "analysis.n_spec", 8));
           if (!is_power_of_two(a.n_spec)) r.fail(n, "analysis.n_spec must be a power of two");
         }}}},
      {"output",
       {{"directory", [&](const YAML::Node& n) { o.directory = r.text(n, "output.directory"); }},
        {"binary_fields", [&](const YAML::Node& n) { o.binary_fields = r.boolean(n, "output.binary_fields"); }}}},
  };

  for (const auto& kv : root) {
    const auto name = kv.first.Scalar();
    const auto it = sections.find(name);
    if (it == sections.end()) r.fail(kv.first, "unknown section '" + name + "'");
    r.section(kv.second, name, it->second);
  }
  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.pde.nu < 0.0) throw ConfigError("pde.nu must be >= 0");
  if (c.pde.kind == PdeKind::Convection && c.pde.nu != 0.0) {
    throw ConfigError("pde.nu must be 0 for pure convection");
  }
  if (c.pde.kind == PdeKind::Burgers && !(c.pde.nu > 0.0)) {
    throw ConfigError("pde.nu must be > 0 for Burgers");
  }
  if (c.model.width < 1 || c.model.depth < 1 || c.model.x_width < 1 ||
      c.model.x_depth < 1) {
    throw ConfigError("model widths and depths must be >= 1");
  }
  if (c.grid.nx < 2 || c.grid.nt < 2) throw ConfigError("grid.nx and grid.nt must be >= 2");
  if (!(c.grid.length > 0.0) || !(c.grid.t_final > 0.0)) {
    throw ConfigError("grid.length and grid.t_final must be > 0");
  }
  if (c.training.iterations < 1) throw ConfigError("training.iterations must be >= 1");
  if (!(c.training.lr > 0.0)) throw ConfigError("training.lr must be > 0");
  if (c.training.lambda_r < 0.0 || c.training.lambda_ic < 0.0 ||
      c.training.lambda_bc < 0.0) {
    throw ConfigError("loss weights must be >= 0");
  }
  if (c.model.periodic && c.training.lambda_bc != 0.0) {
    throw ConfigError("training.lambda_bc must be 0 when periodicity is embedded");
  }
  if (c.training.threads < 1) throw ConfigError("training.threads must be >= 1");
  if (c.training.log_every < 1) throw ConfigError("training.log_every must be >= 1");
  if (c.analysis.n_grid < 3) throw ConfigError("analysis.n_grid must be >= 3");
  if (!(c.analysis.alpha0 > 0.0) || !(c.analysis.beta0 > 0.0)) {
    throw ConfigError("analysis.alpha0 and analysis.beta0 must be > 0");
  }
  if (!is_power_of_two(c.analysis.n_spec)) {
    throw ConfigError("analysis.n_spec must be a power of two");
  }
  try {
    initial_condition(c);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("pde.ic: ") + e.what());
  }
}

namespace {

// Double-quoted YAML scalar.
std::string quoted(const std::string& v) {
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

void write_hashed(std::ostream& s, const ExperimentConfig& c) {
  s << "pde:\n"
    << "  kind: " << to_string(c.pde.kind) << '\n'
    << "  c: " << num(c.pde.c) << '\n'
    << "  nu: " << num(c.pde.nu) << '\n'
    << "  ic: " << quoted(c.pde.ic) << '\n'
    << "model:\n"
    << "  kind: " << to_string(c.model.kind) << '\n'
    << "  width: " << c.model.width << '\n'
    << "  depth: " << c.model.depth << '\n'
    << "  x_width: " << c.model.x_width << '\n'
    << "  x_depth: " << c.model.x_depth << '\n'
    << "  periodic: " << (c.model.periodic ? "true" : "false") << '\n'
    << "  predict_displacement: " << (c.model.predict_displacement ? "true" : "false") << '\n'
    << "grid:\n"
    << "  nx: " << c.grid.nx << '\n'
    << "  nt: " << c.grid.nt << '\n'
    << "  length: " << num(c.grid.length) << '\n'
    << "  t_final: " << num(c.grid.t_final) << '\n'
    << "training:\n"
    << "  iterations: " << c.training.iterations << '\n'
    << "  lr: " << num(c.training.lr) << '\n'
    << "  lambda_r: " << num(c.training.lambda_r) << '\n'
    << "  lambda_ic: " << num(c.training.lambda_ic) << '\n'
    << "  lambda_bc: " << num(c.training.lambda_bc) << '\n'
    << "  seed: " << c.training.seed << '\n'
    << "  batch: " << c.training.batch << '\n';
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream s;
  write_hashed(s, c);
  s << "  log_every: " << c.training.log_every << '\n'
    << "  threads: " << c.training.threads << '\n'
    << "analysis:\n"
    << "  alpha0: " << num(c.analysis.alpha0) << '\n'
    << "  beta0: " << num(c.analysis.beta0) << '\n'
    << "  n_grid: " << c.analysis.n_grid << '\n'
    << "  landscape_batch: " << c.analysis.landscape_batch << '\n'
    << "  power_iterations: " << c.analysis.power_iterations << '\n'
    << "  n_spec: " << c.analysis.n_spec << '\n'
    << "output:\n"
    << "  directory: " << quoted(c.output.directory) << '\n'
    << "  binary_fields: " << (c.output.binary_fields ? "true" : "false") << '\n';
  return s.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& c) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << serialize_config(c);
}

std::string config_hash(const ExperimentConfig& c) {
  std::ostringstream s;
  write_hashed(s, c);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string initial_condition_source(const ExperimentConfig& c) {
  if (!c.pde.ic.empty()) return c.pde.ic;
  return c.pde.kind == PdeKind::Burgers ? "sin(x) + c" : "sin(x)";
}

Expression initial_condition(const ExperimentConfig& c) {
  return Expression(initial_condition_source(c));
}

PdeSpec pde_spec(const ExperimentConfig& c) { return {c.pde.kind, c.pde.c, c.pde.nu}; }

Domain domain(const ExperimentConfig& c) { return {c.grid.length, c.grid.t_final}; }

Grid grid(const ExperimentConfig& c) { return make_grid(c.grid.nx, c.grid.nt, domain(c)); }

LossWeights loss_weights(const ExperimentConfig& c) {
  return {c.training.lambda_r, c.training.lambda_bc, c.training.lambda_ic};
}

TrainConfig train_config(const ExperimentConfig& c) {
  TrainConfig t;
  t.iterations = c.training.iterations;
  t.lr = c.training.lr;
  t.seed = c.training.seed;
  t.log_every = c.training.log_every;
  t.batch = c.training.batch;
  return t;
}

Model build_model(const ExperimentConfig& c) {
  const MlpConfig w{c.model.depth, c.model.width, 1};
  if (c.model.kind == ModelKind::Pinn) {
    return PinnModel(w, c.model.periodic, c.grid.length);
  }
  const MlpConfig x{c.model.x_depth, c.model.x_width, 1};
  return LpinnModel(x, w, c.model.periodic, c.model.predict_displacement,
                    c.grid.length);
}

CollocationSet collocation(const ExperimentConfig& c) {
  return make_collocation(c.grid.nx, c.grid.nt, domain(c), initial_condition(c),
                          c.pde.c);
}

Objective build_objective(const ExperimentConfig& c) {
  return Objective(build_model(c), pde_spec(c), collocation(c), loss_weights(c),
                   c.training.threads);
}

}  // namespace lpinn
