#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "hgcl/autodiff.hpp"
#include "hgcl/graph.hpp"
#include "hgcl/matrix.hpp"

namespace hgcl::contrast {

/// Per-node positive/negative partitions plus the score tables that
/// produced them. For each node i the two lists partition all other nodes.
struct SampleSets {
  std::vector<std::vector<std::uint32_t>> positives;  // sorted, i excluded
  std::vector<std::vector<std::uint32_t>> negatives;  // sorted, i excluded
  Matrix similarity;   // attribute cosine over target nodes
  Matrix correlation;  // weighted meta-path membership counts

  std::size_t size() const { return positives.size(); }
};

/// Weighted count of meta-paths whose neighbor set of i contains j.
double topological_correlation(std::uint32_t i, std::uint32_t j,
                               const std::vector<double>& delta,
                               const std::vector<MetaPathAdjacency>& adjacencies);

/// All-pairs correlation values as a dense matrix.
Matrix topological_correlation_matrix(const std::vector<MetaPathAdjacency>& adjacencies,
                                      const std::vector<double>& delta);

/// Positives are the pairs passing both thresholds; negatives are the rest.
/// With a disabled criterion (nullopt) only the other one is applied — this
/// realizes the sampling ablations.
SampleSets select_samples(const Matrix& similarity, const Matrix& correlation,
                          std::optional<double> eps_a, std::optional<double> eps_t);

inline SampleSets select_samples(const Matrix& similarity, const Matrix& correlation,
                                 double eps_a, double eps_t) {
  return select_samples(similarity, correlation, std::optional(eps_a), std::optional(eps_t));
}

/// One direction of the reciprocal contrastive objective. Scores are
/// cos(., .)/tau; positives attract within the view and across views (the
/// node's own cross-view counterpart is always a positive); the denominator
/// ranges over all admissible pairs plus the cross-view self term. The
/// intra-view self term never appears. Nonnegative by construction.
ad::Var view_contrastive_loss(ad::Tape& tape, ad::Var z, ad::Var z_other,
                              const SampleSets& samples, double tau);

/// lambda * psi(Z_topo, Z_attr) + (1 - lambda) * psi(Z_attr, Z_topo).
ad::Var final_loss(ad::Tape& tape, ad::Var z_topo, ad::Var z_attr,
                   const SampleSets& samples, double tau, double lambda);

/// CSV diagnostic: node, positive count, negative count.
void write_sample_diagnostics(const SampleSets& samples, const std::filesystem::path& file);

}  // namespace hgcl::contrast
