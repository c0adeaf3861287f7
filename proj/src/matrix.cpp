#include "hgcl/matrix.hpp"

#include <string>

#include "hgcl/parallel.hpp"

namespace hgcl {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + ")");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  auto rows = [&](std::size_t lo, std::size_t hi) {
    // ikj order keeps the inner loop streaming over contiguous rows of b.
    for (std::size_t i = lo; i < hi; ++i) {
      double* ci = c.data() + i * m;
      const double* ai = a.data() + i * k;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = ai[p];
        if (av == 0.0) continue;
        const double* bp = b.data() + p * m;
        for (std::size_t j = 0; j < m; ++j) ci[j] += av * bp[j];
      }
    }
  };
  if (n * k * m >= 1u << 20) {
    parallel_for(n, rows);
  } else {
    rows(0, n);
  }
  return c;
}

Matrix transposed(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix cosine_similarity_matrix(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  Matrix unit(n, d);
  std::vector<bool> nonzero(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = l2_norm(x.row(i));
    if (norm > 0.0) {
      nonzero[i] = true;
      for (std::size_t j = 0; j < d; ++j) unit(i, j) = x(i, j) / norm;
    }
  }
  Matrix s(n, n);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (!nonzero[i]) continue;
      s(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!nonzero[j]) continue;
        s(i, j) = dot(unit.row(i), unit.row(j));
      }
    }
  });
  // mirror the strict upper triangle
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s(j, i) = s(i, j);
  return s;
}

}  // namespace hgcl
