#include "lpinn/prediction.hpp"

#include "lpinn/errors.hpp"
#include "lpinn/interpolation.hpp"

#include <algorithm>
#include <vector>

namespace lpinn {

namespace {

constexpr std::size_t kChunk = 4096;

struct Flat {
  std::vector<double> x;
  std::vector<double> t;
};

Flat flatten(const Grid& grid) {
  Flat f;
  for (double t : grid.t) {
    for (double x : grid.x) {
      f.x.push_back(x);
      f.t.push_back(t);
    }
  }
  return f;
}

// Evaluates `fn(tape, x_jet, t_jet)` over chunks of the flattened grid and
// scatters the returned value rows into the outputs.
template <typename Fn>
void for_chunks(const Flat& flat, const ParamVector& params, std::size_t nx,
                Fn&& fn) {
  for (std::size_t begin = 0; begin < flat.x.size(); begin += kChunk) {
    const std::size_t len = std::min(kChunk, flat.x.size() - begin);
    Tape tape(params);
    auto [xj, tj] = seed_inputs(tape, std::span(flat.x).subspan(begin, len),
                                std::span(flat.t).subspan(begin, len), false);
    fn(tape, xj, tj, begin, len, nx);
  }
}

}  // namespace

Field predict(const PinnModel& model, const ParamVector& params, const Grid& grid) {
  Field f = make_field(grid);
  const Flat flat = flatten(grid);
  for_chunks(flat, params, grid.nx(),
             [&](Tape& tape, const JetBatch& x, const JetBatch& t,
                 std::size_t begin, std::size_t len, std::size_t nx) {
               const auto& w = tape.value(model.forward(tape, x, t).value);
               for (std::size_t k = 0; k < len; ++k) {
                 const std::size_t g = begin + k;
                 f.values(static_cast<Eigen::Index>(g / nx),
                          static_cast<Eigen::Index>(g % nx)) =
                     w(0, static_cast<Eigen::Index>(k));
               }
             });
  return f;
}

Field predict_lagrangian(const LpinnModel& model, const ParamVector& params,
                         const Grid& grid) {
  Field f = make_field(grid);
  f.frame = Frame::Lagrangian;
  f.positions = Eigen::MatrixXd::Zero(f.values.rows(), f.values.cols());
  const Flat flat = flatten(grid);
  for_chunks(flat, params, grid.nx(),
             [&](Tape& tape, const JetBatch& x, const JetBatch& t,
                 std::size_t begin, std::size_t len, std::size_t nx) {
               const auto out = model.forward(tape, x, t);
               const auto& xs = tape.value(out.x.value);
               const auto& ws = tape.value(out.w.value);
               for (std::size_t k = 0; k < len; ++k) {
                 const std::size_t g = begin + k;
                 const auto j = static_cast<Eigen::Index>(g / nx);
                 const auto i = static_cast<Eigen::Index>(g % nx);
                 f.positions(j, i) = xs(0, static_cast<Eigen::Index>(k));
                 f.values(j, i) = ws(0, static_cast<Eigen::Index>(k));
               }
             });
  return f;
}

Field to_eulerian(const Field& lagrangian, const Grid& grid) {
  if (lagrangian.frame != Frame::Lagrangian) {
    throw ContractViolation("to_eulerian expects a Lagrangian field");
  }
  if (lagrangian.nt() != grid.nt()) {
    throw ShapeError("to_eulerian: time grids differ");
  }
  Field f = make_field(grid);
  const auto n = static_cast<std::size_t>(lagrangian.positions.cols());
  std::vector<double> xs(n);
  std::vector<double> ws(n);
  for (Eigen::Index j = 0; j < lagrangian.positions.rows(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = lagrangian.positions(j, static_cast<Eigen::Index>(i));
      ws[i] = lagrangian.values(j, static_cast<Eigen::Index>(i));
    }
    const auto row = interp_quadratic(xs, ws, grid.x, grid.domain.length);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      f.values(j, static_cast<Eigen::Index>(i)) = row[i];
    }
  }
  return f;
}

Field predict_eulerian(const Model& model, const ParamVector& params,
                       const Grid& grid) {
  if (const auto* pinn = std::get_if<PinnModel>(&model)) {
    return predict(*pinn, params, grid);
  }
  return to_eulerian(predict_lagrangian(std::get<LpinnModel>(model), params, grid),
                     grid);
}

}  // namespace lpinn
