#pragma once

#include <cmath>

#include "hgcl/matrix.hpp"
#include "hgcl/rng.hpp"

namespace hgcl {

/// Uniform Glorot init: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
inline Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-a, a);
  return m;
}

}  // namespace hgcl
