#include "hgcl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "hgcl/errors.hpp"

namespace hgcl::metrics {

namespace {

int relabel(const std::vector<int>& xs, std::vector<int>& out) {
  // compacts arbitrary label values to 0..k-1
  std::vector<int> values(xs);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  out.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(values.begin(), values.end(), xs[i]) -
                              values.begin());
  return static_cast<int>(values.size());
}

}  // namespace

std::vector<double> per_class_f1(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred, int num_classes) {
  if (y_true.size() != y_pred.size())
    throw ShapeError("f1: prediction/label length mismatch");
  std::vector<std::size_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if (t == p)
      ++tp[t];
    else {
      ++fp[p];
      ++fn[t];
    }
  }
  std::vector<double> f1(num_classes, 0.0);
  for (int c = 0; c < num_classes; ++c) {
    const double denom = 2.0 * static_cast<double>(tp[c]) + static_cast<double>(fp[c]) +
                         static_cast<double>(fn[c]);
    f1[c] = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp[c]) / denom;
  }
  return f1;
}

F1Scores f1_scores(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                   int num_classes) {
  const std::vector<double> per_class = per_class_f1(y_true, y_pred, num_classes);
  F1Scores s;
  for (const double f : per_class) s.macro += f;
  s.macro /= static_cast<double>(num_classes);

  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == y_pred[i])
      ++tp;
    else {
      ++fp;
      ++fn;
    }
  }
  const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp) +
                       static_cast<double>(fn);
  s.micro = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
  return s;
}

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw ShapeError("nmi: partition length mismatch");
  if (a.empty()) return 1.0;
  std::vector<int> u, v;
  const int ku = relabel(a, u);
  const int kv = relabel(b, v);
  const double n = static_cast<double>(a.size());

  std::vector<double> pu(ku, 0.0), pv(kv, 0.0);
  std::vector<std::vector<double>> joint(ku, std::vector<double>(kv, 0.0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    pu[u[i]] += 1.0;
    pv[v[i]] += 1.0;
    joint[u[i]][v[i]] += 1.0;
  }
  double hu = 0.0, hv = 0.0, mi = 0.0;
  for (int i = 0; i < ku; ++i) {
    const double p = pu[i] / n;
    if (p > 0.0) hu -= p * std::log(p);
  }
  for (int j = 0; j < kv; ++j) {
    const double p = pv[j] / n;
    if (p > 0.0) hv -= p * std::log(p);
  }
  for (int i = 0; i < ku; ++i)
    for (int j = 0; j < kv; ++j) {
      const double pij = joint[i][j] / n;
      if (pij > 0.0) mi += pij * std::log(pij * n * n / (pu[i] * pv[j]));
    }
  if (hu == 0.0 && hv == 0.0) return 1.0;  // both trivial and identical
  const double denom = 0.5 * (hu + hv);
  if (denom == 0.0) return 0.0;
  return mi / denom;
}

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw ShapeError("ari: partition length mismatch");
  if (a.size() < 2) return 1.0;
  std::vector<int> u, v;
  const int ku = relabel(a, u);
  const int kv = relabel(b, v);

  std::vector<std::uint64_t> su(ku, 0), sv(kv, 0);
  std::vector<std::vector<std::uint64_t>> joint(ku, std::vector<std::uint64_t>(kv, 0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    ++su[u[i]];
    ++sv[v[i]];
    ++joint[u[i]][v[i]];
  }
  auto choose2 = [](std::uint64_t x) {
    return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0;
  };
  double sum_joint = 0.0, sum_u = 0.0, sum_v = 0.0;
  for (int i = 0; i < ku; ++i)
    for (int j = 0; j < kv; ++j) sum_joint += choose2(joint[i][j]);
  for (int i = 0; i < ku; ++i) sum_u += choose2(su[i]);
  for (int j = 0; j < kv; ++j) sum_v += choose2(sv[j]);

  const double all_pairs = choose2(a.size());
  const double expected = sum_u * sum_v / all_pairs;
  const double max_index = 0.5 * (sum_u + sum_v);
  if (max_index == expected) return 1.0;  // both partitions degenerate
  return (sum_joint - expected) / (max_index - expected);
}

double majority_class_macro_f1(const std::vector<int>& labels) {
  if (labels.empty()) return 0.0;
  int k = 0;
  for (const int l : labels) k = std::max(k, l + 1);
  std::vector<std::size_t> counts(k, 0);
  for (const int l : labels) ++counts[l];
  const std::size_t majority =
      static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  std::vector<int> pred(labels.size(), static_cast<int>(majority));
  return f1_scores(labels, pred, k).macro;
}

}  // namespace hgcl::metrics
