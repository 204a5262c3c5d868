#pragma once

#include "lpinn/field.hpp"

#include <span>
#include <vector>

namespace lpinn {

/// Singular values (descending) of the nx x nt snapshot matrix whose columns
/// are time slices.
std::vector<double> snapshot_svd(const Field& field);

/// Smallest n such that the leading n singular values hold at least
/// `fraction` of sum(sigma^2).
std::size_t modes_for_energy(std::span<const double> singular_values,
                             double fraction = 0.99);

}  // namespace lpinn
