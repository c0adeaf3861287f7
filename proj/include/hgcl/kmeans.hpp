#pragma once

#include <cstdint>
#include <vector>

#include "hgcl/matrix.hpp"

namespace hgcl::eval {

struct KMeansResult {
  std::vector<int> assignment;
  double inertia = 0.0;
  int iterations = 0;
  int reseeded_centroids = 0;  // empty clusters recovered during Lloyd steps
};

/// Seeded k-means with k-means++ initialization and a Lloyd iteration cap.
/// An emptied cluster is re-seeded with the point farthest from its
/// centroid. Deterministic for a given seed.
KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iters = 300);

}  // namespace hgcl::eval
