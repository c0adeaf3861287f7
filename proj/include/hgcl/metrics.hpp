#pragma once

#include <vector>

namespace hgcl::metrics {

struct F1Scores {
  double macro = 0.0;  // unweighted mean of per-class F1
  double micro = 0.0;  // F1 from global TP/FP/FN counts
};

/// Per-class F1 from predictions; a class with no true and no predicted
/// members scores 0.
F1Scores f1_scores(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                   int num_classes);

std::vector<double> per_class_f1(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred, int num_classes);

/// Normalized mutual information, arithmetic-mean normalization:
/// I(U;V) / ((H(U)+H(V))/2). Both partitions trivial -> 1; one trivial -> 0.
double nmi(const std::vector<int>& a, const std::vector<int>& b);

/// Adjusted Rand index. Degenerate denominator (both partitions trivial)
/// -> 1 when the index is complete, matching the usual convention.
double ari(const std::vector<int>& a, const std::vector<int>& b);

/// Macro-F1 of always predicting the most frequent class.
double majority_class_macro_f1(const std::vector<int>& labels);

}  // namespace hgcl::metrics
