#include "lpinn/interpolation.hpp"

#include "lpinn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lpinn {

std::vector<double> interp_quadratic(std::span<const double> xs,
                                     std::span<const double> ws,
                                     std::span<const double> targets,
                                     double period) {
  const std::size_t n = xs.size();
  if (ws.size() != n) throw ShapeError("interp_quadratic: x and w differ in length");
  if (n < 3) throw ContractViolation("interp_quadratic needs at least 3 nodes");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw CharacteristicCrossing("moving grid is not monotone at node " +
                                   std::to_string(i));
    }
  }
  if (!(xs[n - 1] - xs[0] < period)) {
    throw CharacteristicCrossing("moving grid wraps onto itself across the seam");
  }

  const auto ni = static_cast<long>(n);
  auto pos = [&](long k) {
    const long q = k >= 0 ? k / ni : -((-k + ni - 1) / ni);
    const long r = k - q * ni;
    return xs[static_cast<std::size_t>(r)] + static_cast<double>(q) * period;
  };
  auto val = [&](long k) {
    const long r = ((k % ni) + ni) % ni;
    return ws[static_cast<std::size_t>(r)];
  };

  std::vector<double> out(targets.size());
  for (std::size_t p = 0; p < targets.size(); ++p) {
    const double shifted = targets[p] - xs[0];
    const double x = xs[0] + (shifted - period * std::floor(shifted / period));
    // First node strictly greater than x; nodes at or below x precede it.
    const auto upper = std::upper_bound(xs.begin(), xs.end(), x);
    const long hi = static_cast<long>(upper - xs.begin());  // may equal n
    const long lo = hi - 1;
    const long k = (x - pos(lo) <= pos(hi) - x) ? lo : hi;

    const double x0 = pos(k - 1), x1 = pos(k), x2 = pos(k + 1);
    const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    out[p] = l0 * val(k - 1) + l1 * val(k) + l2 * val(k + 1);
  }
  return out;
}

}  // namespace lpinn
