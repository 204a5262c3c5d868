#include "lpinn/jet.hpp"

#include "lpinn/errors.hpp"

#include <string>
#include <vector>

namespace lpinn {

namespace {

Var opt_add(Tape& t, Var a, Var b) {
  if (!a.valid()) return b;
  if (!b.valid()) return a;
  return t.add(a, b);
}

Var opt_mul(Tape& t, Var a, Var b) {
  if (!a.valid() || !b.valid()) return {};
  return t.mul(a, b);
}

Var opt_scale(Tape& t, Var a, double s) {
  if (!a.valid()) return {};
  return t.scale(a, s);
}

Var opt_matmul(Tape& t, Var w, Var a) {
  if (!a.valid()) return {};
  return t.matmul(w, a);
}

void check_n(const JetBatch& u, const JetBatch& v, const char* what) {
  if (u.n != v.n || u.rows != v.rows) {
    throw ShapeError(std::string(what) + ": jet shape " +
                     std::to_string(u.rows) + "x" + std::to_string(u.n) +
                     " vs " + std::to_string(v.rows) + "x" +
                     std::to_string(v.n));
  }
}

JetBatch like(const JetBatch& u) {
  JetBatch r;
  r.rows = u.rows;
  r.n = u.n;
  return r;
}

// Applies an elementwise function given f'(u) and f''(u) as tape nodes.
JetBatch chain(Tape& t, const JetBatch& u, Var f, Var df, Var d2f) {
  JetBatch r = like(u);
  r.value = f;
  r.d_dx = opt_mul(t, df, u.d_dx);
  r.d_dt = opt_mul(t, df, u.d_dt);
  Var curv = u.d_dx.valid() ? t.mul(d2f, t.square(u.d_dx)) : Var{};
  r.d_dxx = opt_add(t, curv, opt_mul(t, df, u.d_dxx));
  return r;
}

}  // namespace

Array channel(const Tape& tape, const JetBatch& jet, Channel c) {
  Var v;
  switch (c) {
    case Channel::Value: v = jet.value; break;
    case Channel::Dx: v = jet.d_dx; break;
    case Channel::Dt: v = jet.d_dt; break;
    case Channel::Dxx: v = jet.d_dxx; break;
  }
  if (!v.valid()) return Array::Zero(jet.rows, jet.n);
  return tape.value(v);
}

std::pair<JetBatch, JetBatch> seed_inputs(Tape& tape, std::span<const double> x,
                                          std::span<const double> t,
                                          bool with_derivatives) {
  if (x.size() != t.size()) {
    throw ShapeError("seed_inputs: x has " + std::to_string(x.size()) +
                     " samples but t has " + std::to_string(t.size()));
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  JetBatch xj;
  JetBatch tj;
  xj.n = tj.n = n;
  xj.value = tape.constant(Eigen::Map<const Eigen::ArrayXd>(x.data(), n).transpose());
  tj.value = tape.constant(Eigen::Map<const Eigen::ArrayXd>(t.data(), n).transpose());
  if (with_derivatives) {
    xj.d_dx = tape.constant(Array::Ones(1, n));
    tj.d_dt = tape.constant(Array::Ones(1, n));
  }
  return {xj, tj};
}

namespace jet {

JetBatch add(Tape& t, const JetBatch& u, const JetBatch& v) {
  check_n(u, v, "jet::add");
  JetBatch r = like(u);
  r.value = t.add(u.value, v.value);
  r.d_dx = opt_add(t, u.d_dx, v.d_dx);
  r.d_dt = opt_add(t, u.d_dt, v.d_dt);
  r.d_dxx = opt_add(t, u.d_dxx, v.d_dxx);
  return r;
}

JetBatch sub(Tape& t, const JetBatch& u, const JetBatch& v) {
  return add(t, u, scale(t, v, -1.0));
}

JetBatch mul(Tape& t, const JetBatch& u, const JetBatch& v) {
  check_n(u, v, "jet::mul");
  JetBatch r = like(u);
  r.value = t.mul(u.value, v.value);
  r.d_dx = opt_add(t, opt_mul(t, u.d_dx, v.value), opt_mul(t, u.value, v.d_dx));
  r.d_dt = opt_add(t, opt_mul(t, u.d_dt, v.value), opt_mul(t, u.value, v.d_dt));
  Var cross = opt_scale(t, opt_mul(t, u.d_dx, v.d_dx), 2.0);
  r.d_dxx = opt_add(t, opt_add(t, opt_mul(t, u.d_dxx, v.value), cross),
                    opt_mul(t, u.value, v.d_dxx));
  return r;
}

JetBatch scale(Tape& t, const JetBatch& u, double s) {
  JetBatch r = like(u);
  r.value = t.scale(u.value, s);
  r.d_dx = opt_scale(t, u.d_dx, s);
  r.d_dt = opt_scale(t, u.d_dt, s);
  r.d_dxx = opt_scale(t, u.d_dxx, s);
  return r;
}

JetBatch shift(Tape& t, const JetBatch& u, double s) {
  JetBatch r = u;
  r.value = t.shift(u.value, s);
  return r;
}

JetBatch square(Tape& t, const JetBatch& u) {
  JetBatch r = like(u);
  r.value = t.square(u.value);
  r.d_dx = opt_scale(t, opt_mul(t, u.value, u.d_dx), 2.0);
  r.d_dt = opt_scale(t, opt_mul(t, u.value, u.d_dt), 2.0);
  Var curv = u.d_dx.valid() ? t.square(u.d_dx) : Var{};
  r.d_dxx = opt_scale(t, opt_add(t, curv, opt_mul(t, u.value, u.d_dxx)), 2.0);
  return r;
}

JetBatch tanh(Tape& t, const JetBatch& u) {
  Var y = t.tanh(u.value);
  if (!u.d_dx.valid() && !u.d_dt.valid() && !u.d_dxx.valid()) {
    JetBatch r = like(u);
    r.value = y;
    return r;
  }
  Var dy = t.affine(t.square(y), -1.0, 1.0);      // 1 - y^2
  Var d2y = t.scale(t.mul(y, dy), -2.0);           // -2 y (1 - y^2)
  return chain(t, u, y, dy, d2y);
}

JetBatch sin(Tape& t, const JetBatch& u) {
  Var s = t.sin(u.value);
  if (!u.d_dx.valid() && !u.d_dt.valid() && !u.d_dxx.valid()) {
    JetBatch r = like(u);
    r.value = s;
    return r;
  }
  Var c = t.cos(u.value);
  return chain(t, u, s, c, t.scale(s, -1.0));
}

JetBatch cos(Tape& t, const JetBatch& u) {
  Var c = t.cos(u.value);
  if (!u.d_dx.valid() && !u.d_dt.valid() && !u.d_dxx.valid()) {
    JetBatch r = like(u);
    r.value = c;
    return r;
  }
  Var s = t.sin(u.value);
  return chain(t, u, c, t.scale(s, -1.0), t.scale(c, -1.0));
}

JetBatch linear(Tape& t, Var weights, Var bias, const JetBatch& u) {
  JetBatch r;
  r.rows = t.value(weights).rows();
  r.n = u.n;
  r.value = t.matmul(weights, u.value);
  if (bias.valid()) r.value = t.add_bias(r.value, bias);
  r.d_dx = opt_matmul(t, weights, u.d_dx);
  r.d_dt = opt_matmul(t, weights, u.d_dt);
  r.d_dxx = opt_matmul(t, weights, u.d_dxx);
  return r;
}

JetBatch concat_rows(Tape& t, std::span<const JetBatch> parts) {
  if (parts.empty()) throw ShapeError("jet::concat_rows: no operands");
  JetBatch r;
  r.n = parts.front().n;
  r.rows = 0;
  for (const auto& p : parts) {
    if (p.n != r.n) throw ShapeError("jet::concat_rows: sample count mismatch");
    r.rows += p.rows;
  }
  auto stack = [&](Var JetBatch::*field) -> Var {
    bool any = false;
    for (const auto& p : parts) any = any || (p.*field).valid();
    if (!any) return {};
    std::vector<Var> vs;
    vs.reserve(parts.size());
    for (const auto& p : parts) {
      vs.push_back((p.*field).valid() ? p.*field
                                      : t.constant(Array::Zero(p.rows, p.n)));
    }
    return t.concat_rows(vs);
  };
  r.value = stack(&JetBatch::value);
  r.d_dx = stack(&JetBatch::d_dx);
  r.d_dt = stack(&JetBatch::d_dt);
  r.d_dxx = stack(&JetBatch::d_dxx);
  return r;
}

}  // namespace jet
}  // namespace lpinn
