#pragma once

#include "lpinn/tape.hpp"

#include <span>
#include <utility>

namespace lpinn {

/// A batch of values together with their first and second input
/// derivatives (d/dx, d/dt, d2/dx2), each recorded on a Tape.
///
/// Every channel is a rows x n array. An absent channel (invalid Var) is
/// identically zero; this keeps value-only evaluations and the t-seed cheap.
struct JetBatch {
  Var value;
  Var d_dx;
  Var d_dt;
  Var d_dxx;
  Eigen::Index rows = 1;
  Eigen::Index n = 0;
};

enum class Channel { Value, Dx, Dt, Dxx };

/// Materializes one channel, filling absent channels with zeros.
Array channel(const Tape& tape, const JetBatch& jet, Channel c);

/// Input jets for raw coordinates. With `with_derivatives` false only value
/// channels are created, which is all an initial-condition fit needs.
/// Throws ShapeError if x and t differ in length.
std::pair<JetBatch, JetBatch> seed_inputs(Tape& tape, std::span<const double> x,
                                          std::span<const double> t,
                                          bool with_derivatives = true);

// Exact chain and product rules over jets. Activation derivatives are built
// from tape primitives, so reverse mode through these needs only first-order
// rules per primitive.
namespace jet {

JetBatch add(Tape& tape, const JetBatch& u, const JetBatch& v);
JetBatch sub(Tape& tape, const JetBatch& u, const JetBatch& v);
JetBatch mul(Tape& tape, const JetBatch& u, const JetBatch& v);
JetBatch scale(Tape& tape, const JetBatch& u, double s);
JetBatch shift(Tape& tape, const JetBatch& u, double s);
JetBatch square(Tape& tape, const JetBatch& u);
JetBatch tanh(Tape& tape, const JetBatch& u);
JetBatch sin(Tape& tape, const JetBatch& u);
JetBatch cos(Tape& tape, const JetBatch& u);

/// weights * u (+ bias on the value channel). `bias` may be absent.
JetBatch linear(Tape& tape, Var weights, Var bias, const JetBatch& u);

/// Stacks feature rows of jets with equal n.
JetBatch concat_rows(Tape& tape, std::span<const JetBatch> parts);

}  // namespace jet
}  // namespace lpinn
