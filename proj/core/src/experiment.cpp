#include "lpinn/experiment.hpp"

#include "lpinn/checkpoint.hpp"
#include "lpinn/errors.hpp"
#include "lpinn/log.hpp"
#include "lpinn/prediction.hpp"
#include "lpinn/reference.hpp"
#include "lpinn/snapshot_svd.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

namespace lpinn {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> provenance(const ExperimentConfig& c) {
  return {"config_hash: " + config_hash(c),
          "seed: " + std::to_string(c.training.seed)};
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_csv_header(std::ostream& out, const ExperimentConfig& c) {
  for (const auto& line : provenance(c)) out << "# " << line << '\n';
}

void write_json(const fs::path& path, const ojson& doc) {
  open_out(path) << doc.dump(2) << '\n';
}

ojson stamp(const ExperimentConfig& c) {
  return ojson{{"config_hash", config_hash(c)}, {"seed", c.training.seed}};
}

ojson loss_json(const LossBreakdown& l) {
  return ojson{{"total", l.total},
               {"residual", l.residual},
               {"ic", l.ic},
               {"residual_x", l.residual_x},
               {"residual_w", l.residual_w}};
}

ojson error_json(const ErrorReport& e) {
  return ojson{{"rel_error", e.rel_error},
               {"interpolation", e.interpolation},
               {"excluded", e.excluded},
               {"points", e.points}};
}

ScalarFn initial_fn(const ExperimentConfig& c) {
  const Expression ic = initial_condition(c);
  const double offset = c.pde.c;
  return [ic, offset](double x) { return ic(x, offset); };
}

ErrorReport score(const ExperimentConfig& c, const ParamVector& params,
                  Field* prediction_out, const Field* truth) {
  const Model model = build_model(c);
  const Grid g = grid(c);
  Field pred = predict_eulerian(model, params, g);
  const Field ref = truth ? *truth : truth_field(c, g);
  ErrorReport r = rel_error(ref, pred);
  if (c.model.kind == ModelKind::Lpinn) r.interpolation = "quadratic_nearest3";
  if (prediction_out) *prediction_out = std::move(pred);
  return r;
}

void write_loss_csv(const fs::path& path, const ExperimentConfig& c,
                    const std::vector<HistoryEntry>& history) {
  auto out = open_out(path);
  write_csv_header(out, c);
  const bool lag = c.model.kind == ModelKind::Lpinn;
  out << "iter,total,loss_r,loss_ic" << (lag ? ",loss_rx,loss_rw" : "") << '\n';
  for (const auto& h : history) {
    out << h.iteration << ',' << fmt17(h.loss.total) << ',' << fmt17(h.loss.residual)
        << ',' << fmt17(h.loss.ic);
    if (lag) out << ',' << fmt17(h.loss.residual_x) << ',' << fmt17(h.loss.residual_w);
    out << '\n';
  }
}

std::vector<std::size_t> landscape_points(const ExperimentConfig& c, std::size_t n_r) {
  const std::size_t want = c.analysis.landscape_batch;
  if (want == 0 || want >= n_r) return {};
  std::vector<std::size_t> idx(n_r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(c.training.seed ^ 0x6a09e667f3bcc909ULL);
  for (std::size_t i = 0; i < want; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n_r - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(want);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::string c_label(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", c);
  return buf;
}

}  // namespace

Field truth_field(const ExperimentConfig& c, const Grid& g) {
  const ScalarFn w0 = initial_fn(c);
  switch (c.pde.kind) {
    case PdeKind::Convection:
      return exact_convection(w0, c.pde.c, g);
    case PdeKind::ConvectionDiffusion:
      if (is_power_of_two(g.nx())) return exact_linear_spectral(w0, c.pde.c, c.pde.nu, g);
      if (initial_condition_source(c) == "sin(x)") {
        return exact_convdiff(1, c.pde.c, c.pde.nu, g);
      }
      throw ConfigError(
          "convection-diffusion truth for a general initial condition needs a "
          "power-of-two grid.nx");
    case PdeKind::Burgers: {
      BurgersOptions opt;
      opt.n_spec = c.analysis.n_spec;
      return burgers_spectral(w0, c.pde.nu, g, opt);
    }
  }
  throw ConfigError("unknown pde kind");
}

RunOutcome run_experiment(const ExperimentConfig& c, const fs::path& out) {
  validate(c);
  fs::create_directories(out);
  save_config(out / "config.yaml", c);

  RunOutcome o;
  o.config_hash = config_hash(c);
  o.seed = c.training.seed;

  const Objective objective = build_objective(c);
  const ParamVector initial = init_params(objective.model(), c.training.seed);
  log::info("training {} on {} (c={}, nu={}) for {} iterations -> {}",
            to_string(c.model.kind), to_string(c.pde.kind), c.pde.c, c.pde.nu,
            c.training.iterations, out.string());

  try {
    o.report = train(train_config(c), objective, initial);
    o.status = "trained";
  } catch (const TrainingDiverged& e) {
    o.status = "failed_to_train";
    o.divergence_iteration = e.iteration();
    o.reason = e.what();
    log::warn("training failed at iteration {}: {}", e.iteration(), e.what());
  }

  if (o.report) {
    save_checkpoint(out / "checkpoint.json",
                    {o.config_hash, o.seed, c.model.kind, o.report->final_params});
    write_loss_csv(out / "loss.csv", c, o.report->history);
    const Grid g = grid(c);
    const Field truth = truth_field(c, g);
    save_field_csv(out / "truth.csv", truth, provenance(c));
    try {
      Field pred;
      o.error = score(c, o.report->final_params, &pred, &truth);
      save_field_csv(out / "prediction.csv", pred, provenance(c));
      ojson ej = stamp(c);
      ej.update(error_json(*o.error));
      write_json(out / "error.json", ej);
    } catch (const CharacteristicCrossing& e) {
      // A trained map that folds over cannot be read back on the fixed grid.
      o.status = "failed_to_train";
      o.divergence_iteration = c.training.iterations;
      o.reason = std::string("prediction: ") + e.what();
    }
  } else {
    write_loss_csv(out / "loss.csv", c, {});
  }

  ojson rep = stamp(c);
  rep["status"] = o.status;
  rep["divergence_iteration"] =
      o.divergence_iteration ? ojson(*o.divergence_iteration) : ojson(nullptr);
  rep["reason"] = o.reason;
  rep["model"] = to_string(c.model.kind);
  rep["pde"] = ojson{{"kind", to_string(c.pde.kind)}, {"c", c.pde.c}, {"nu", c.pde.nu},
                     {"ic", initial_condition_source(c)}};
  rep["parameters"] = layout_of(objective.model()).total_size();
  rep["threads"] = c.training.threads;
  if (o.report) {
    rep["iterations"] = o.report->config.iterations;
    rep["final_loss"] = loss_json(o.report->final_loss);
    rep["wall_seconds"] = o.report->wall_seconds;
    ojson hist = ojson::array();
    for (const auto& h : o.report->history) {
      ojson e = loss_json(h.loss);
      e["iteration"] = h.iteration;
      hist.push_back(e);
    }
    rep["history"] = std::move(hist);
  }
  rep["rel_error"] = o.error ? ojson(o.error->rel_error) : ojson(nullptr);
  rep["config"] = serialize_config(c);
  write_json(out / "report.json", rep);

  if (o.error) {
    log::info("{} {}: rel_error {:.4g}", to_string(c.model.kind), o.status,
              o.error->rel_error);
  }
  return o;
}

ErrorReport evaluate_checkpoint(const ExperimentConfig& c, const fs::path& checkpoint,
                                const fs::path& out) {
  validate(c);
  const Checkpoint ck = load_checkpoint(checkpoint, c);
  Field pred;
  const ErrorReport r = score(c, ck.params, &pred, nullptr);
  fs::create_directories(out);
  save_field_csv(out / "prediction.csv", pred, provenance(c));
  ojson ej = stamp(c);
  ej.update(error_json(r));
  write_json(out / "error.json", ej);
  return r;
}

LandscapeOutcome compute_landscape(const ExperimentConfig& c, const ParamVector& params,
                                   const fs::path& out) {
  validate(c);
  const Objective objective = build_objective(c);
  const auto idx = landscape_points(c, objective.collocation().n_r());
  const ParamLayout layout = objective.layout();

  const GradientFn grad = [&](const Eigen::VectorXd& th) {
    return objective.gradient(ParamVector(layout, th), idx);
  };
  const LossFn loss = [&](const Eigen::VectorXd& th) {
    return objective.loss(ParamVector(layout, th), idx).total;
  };

  LandscapeOutcome o;
  PowerIterationOptions pi;
  pi.max_iterations = c.analysis.power_iterations;
  o.eigen = hessian_top2(grad, params.values(), pi);
  if (!o.eigen.converged()) {
    log::warn("power iteration did not converge in {} iterations", pi.max_iterations);
  }

  LandscapeOptions lo{c.analysis.alpha0, c.analysis.beta0, c.analysis.n_grid};
  o.grid = loss_landscape(loss, params.values(), o.eigen.first.vector,
                          o.eigen.second.vector, lo);
  const int mid = c.analysis.n_grid / 2;
  o.center_log_loss = o.grid.log_loss(mid, mid);
  Eigen::Index ia = mid;
  Eigen::Index ib = mid;
  double best = o.center_log_loss;
  for (Eigen::Index i = 0; i < o.grid.log_loss.rows(); ++i) {
    for (Eigen::Index j = 0; j < o.grid.log_loss.cols(); ++j) {
      if (o.grid.log_loss(i, j) < best) {
        best = o.grid.log_loss(i, j);
        ia = i;
        ib = j;
      }
    }
  }
  o.argmin_offset_alpha = static_cast<int>(ia) - mid;
  o.argmin_offset_beta = static_cast<int>(ib) - mid;

  if (!out.empty()) {
    fs::create_directories(out);
    auto csv = open_out(out / "landscape.csv");
    write_csv_header(csv, c);
    csv << "alpha,beta,log_loss\n";
    for (std::size_t i = 0; i < o.grid.alphas.size(); ++i) {
      for (std::size_t j = 0; j < o.grid.betas.size(); ++j) {
        const double v = o.grid.log_loss(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j));
        csv << fmt17(o.grid.alphas[i]) << ',' << fmt17(o.grid.betas[j]) << ','
            << (std::isfinite(v) ? fmt17(v) : std::string("inf")) << '\n';
      }
    }
    ojson meta = stamp(c);
    meta["eigenvalues"] = {o.eigen.first.value, o.eigen.second.value};
    meta["eigen_iterations"] = {o.eigen.first.iterations, o.eigen.second.iterations};
    meta["converged"] = o.eigen.converged();
    meta["directions_dot"] = o.eigen.first.vector.dot(o.eigen.second.vector);
    meta["ruggedness"] = o.grid.ruggedness;
    meta["center_log_loss"] = o.center_log_loss;
    meta["argmin_offset"] = {o.argmin_offset_alpha, o.argmin_offset_beta};
    meta["alpha0"] = c.analysis.alpha0;
    meta["beta0"] = c.analysis.beta0;
    meta["n_grid"] = c.analysis.n_grid;
    meta["points"] = idx.empty() ? objective.collocation().n_r() : idx.size();
    write_json(out / "landscape.json", meta);
  }
  return o;
}

NwidthOutcome compute_nwidth(const ExperimentConfig& c, const fs::path& out) {
  validate(c);
  const Field f = truth_field(c, grid(c));
  NwidthOutcome o;
  o.singular_values = snapshot_svd(f);
  o.modes_99 = modes_for_energy(o.singular_values, 0.99);
  if (!out.empty()) {
    fs::create_directories(out);
    auto csv = open_out(out / "singular_values.csv");
    write_csv_header(csv, c);
    csv << "index,sigma,cumulative_energy\n";
    double total = 0.0;
    for (double s : o.singular_values) total += s * s;
    double run = 0.0;
    for (std::size_t i = 0; i < o.singular_values.size(); ++i) {
      run += o.singular_values[i] * o.singular_values[i];
      csv << i + 1 << ',' << fmt17(o.singular_values[i]) << ',' << fmt17(run / total)
          << '\n';
    }
    ojson meta = stamp(c);
    meta["modes_99"] = o.modes_99;
    meta["count"] = o.singular_values.size();
    write_json(out / "nwidth.json", meta);
  }
  return o;
}

Field write_reference(const ExperimentConfig& c, const fs::path& out) {
  validate(c);
  const Field f = truth_field(c, grid(c));
  fs::create_directories(out);
  save_field_csv(out / "reference.csv", f, provenance(c));
  if (c.output.binary_fields) save_field_binary(out / "reference.bin", f);
  ojson meta = stamp(c);
  meta["pde"] = to_string(c.pde.kind);
  meta["c"] = c.pde.c;
  meta["nu"] = c.pde.nu;
  meta["ic"] = initial_condition_source(c);
  meta["nx"] = c.grid.nx;
  meta["nt"] = c.grid.nt;
  if (c.pde.kind == PdeKind::Burgers) meta["n_spec"] = c.analysis.n_spec;
  write_json(out / "reference.json", meta);
  return f;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base,
                                const std::vector<double>& c_values,
                                const std::vector<ModelKind>& models,
                                const fs::path& out) {
  std::vector<SweepRow> rows;
  for (const ModelKind m : models) {
    for (const double cv : c_values) {
      ExperimentConfig c = base;
      c.pde.c = cv;
      c.model.kind = m;
      c.output.directory = (out / (to_string(m) + "_c" + c_label(cv))).string();
      rows.push_back({m, cv, run_experiment(c, c.output.directory)});
    }
  }
  fs::create_directories(out);
  auto csv = open_out(out / "error_vs_c.csv");
  write_csv_header(csv, base);
  csv << "model,c,status,rel_error,divergence_iteration,config_hash\n";
  for (const auto& r : rows) {
    csv << to_string(r.model) << ',' << fmt17(r.c) << ',' << r.outcome.status << ','
        << (r.outcome.error ? fmt17(r.outcome.error->rel_error) : std::string("nan"))
        << ','
        << (r.outcome.divergence_iteration
                ? std::to_string(*r.outcome.divergence_iteration)
                : std::string())
        << ',' << r.outcome.config_hash << '\n';
  }
  return rows;
}

}  // namespace lpinn
