#include "hgcl/kmeans.hpp"

#include <cmath>
#include <limits>

#include "hgcl/errors.hpp"
#include "hgcl/rng.hpp"

namespace hgcl::eval {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iters) {
  const std::size_t n = x.rows(), d = x.cols();
  if (k <= 0 || static_cast<std::size_t>(k) > n)
    throw ShapeError("kmeans: k must be in [1, n]");
  Rng rng = Rng::substream(seed, "kmeans");

  // k-means++ seeding
  Matrix centroids(k, d);
  std::vector<double> dist2(n, std::numeric_limits<double>::max());
  {
    const std::size_t first = rng.uniform_index(n);
    for (std::size_t j = 0; j < d; ++j) centroids(0, j) = x(first, j);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dist2[i] = std::min(dist2[i], sq_dist(x.row(i), centroids.row(c - 1)));
        total += dist2[i];
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        const double r = rng.uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += dist2[i];
          if (acc >= r) {
            pick = i;
            break;
          }
        }
      } else {
        pick = rng.uniform_index(n);
      }
      for (std::size_t j = 0; j < d; ++j) centroids(c, j) = x(pick, j);
    }
  }

  KMeansResult res;
  res.assignment.assign(n, 0);
  std::vector<std::size_t> counts(k, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    res.iterations = iter + 1;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(x.row(i), centroids.row(0));
      for (int c = 1; c < k; ++c) {
        const double dc = sq_dist(x.row(i), centroids.row(c));
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
    }

    Matrix next(k, d);
    counts.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[res.assignment[i]];
      for (std::size_t j = 0; j < d; ++j) next(res.assignment[i], j) += x(i, j);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // re-seed with the point farthest from its current centroid
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dd = sq_dist(x.row(i), centroids.row(res.assignment[i]));
          if (dd > far_d) {
            far_d = dd;
            far = i;
          }
        }
        for (std::size_t j = 0; j < d; ++j) next(c, j) = x(far, j);
        ++res.reseeded_centroids;
        changed = true;
      } else {
        for (std::size_t j = 0; j < d; ++j) next(c, j) /= static_cast<double>(counts[c]);
      }
    }
    centroids = std::move(next);
    if (!changed) break;
  }

  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    res.inertia += sq_dist(x.row(i), centroids.row(res.assignment[i]));
  return res;
}

}  // namespace hgcl::eval
