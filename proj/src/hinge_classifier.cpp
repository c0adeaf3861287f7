#include "hgcl/hinge_classifier.hpp"

#include <cmath>

#include "hgcl/errors.hpp"

namespace hgcl::eval {

void HingeClassifier::fit(const Matrix& x, const std::vector<int>& y, int num_classes,
                          Options opts) {
  const std::size_t n = x.rows(), d = x.cols();
  if (y.size() != n) throw ShapeError("HingeClassifier::fit: label count mismatch");
  if (n == 0) throw ShapeError("HingeClassifier::fit: empty training set");
  num_classes_ = num_classes;

  mean_.assign(d, 0.0);
  scale_.assign(d, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean_[j] += x(i, j);
  for (std::size_t j = 0; j < d; ++j) mean_[j] /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x(i, j) - mean_[j];
      var[j] += c * c;
    }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    scale_[j] = sd > 1e-9 ? 1.0 / sd : 1.0;
  }

  Matrix xs(n, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) xs(i, j) = (x(i, j) - mean_[j]) * scale_[j];
    xs(i, d) = 1.0;
  }

  weights_ = Matrix(num_classes, d + 1);
  std::vector<double> margin(n);
  for (int c = 0; c < num_classes; ++c) {
    for (int t = 1; t <= opts.iterations; ++t) {
      const double eta = 1.0 / (opts.reg * static_cast<double>(t));
      for (std::size_t i = 0; i < n; ++i)
        margin[i] = (y[i] == c ? 1.0 : -1.0) * dot(weights_.row(c), xs.row(i));
      // w <- (1 - eta*reg) w + (eta/n) * sum of y_i x_i over violators
      for (std::size_t j = 0; j <= d; ++j) weights_(c, j) *= 1.0 - eta * opts.reg;
      const double step = eta / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (margin[i] >= 1.0) continue;
        const double yi = y[i] == c ? 1.0 : -1.0;
        const auto xi = xs.row(i);
        for (std::size_t j = 0; j <= d; ++j) weights_(c, j) += step * yi * xi[j];
      }
    }
  }
}

std::vector<int> HingeClassifier::predict(const Matrix& x) const {
  const std::size_t n = x.rows(), d = x.cols();
  if (d != mean_.size()) throw ShapeError("HingeClassifier::predict: dimension mismatch");
  std::vector<int> pred(n, 0);
  std::vector<double> row(d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) row[j] = (x(i, j) - mean_[j]) * scale_[j];
    row[d] = 1.0;
    int best = 0;
    double best_score = dot(weights_.row(0), row);
    for (int c = 1; c < num_classes_; ++c) {
      const double s = dot(weights_.row(c), row);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    pred[i] = best;
  }
  return pred;
}

}  // namespace hgcl::eval
