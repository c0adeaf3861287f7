#pragma once

#include <vector>

#include "hgcl/matrix.hpp"

namespace hgcl::eval {

/// Linear one-vs-rest classifier trained by full-batch subgradient descent
/// on L2-regularized hinge loss. Features are standardized per dimension
/// from the training data. Deterministic.
class HingeClassifier {
 public:
  struct Options {
    int iterations = 400;
    double reg = 1e-3;  // L2 coefficient (Pegasos-style step sizes 1/(reg*t))
  };

  void fit(const Matrix& x, const std::vector<int>& y, int num_classes, Options opts);
  void fit(const Matrix& x, const std::vector<int>& y, int num_classes) {
    fit(x, y, num_classes, Options());
  }
  std::vector<int> predict(const Matrix& x) const;

 private:
  Matrix weights_;  // num_classes x (d+1), last column is the bias
  std::vector<double> mean_, scale_;
  int num_classes_ = 0;
};

}  // namespace hgcl::eval
