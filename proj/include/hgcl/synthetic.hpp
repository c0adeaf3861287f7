#pragma once

#include <cstdint>
#include <vector>

#include "hgcl/graph.hpp"

namespace hgcl::eval {

/// Heterogeneous stochastic block model. Target nodes carry class labels
/// and class-conditional noisy attributes; every auxiliary type is wired to
/// the targets with intra-class probability above inter-class, giving the
/// meta-paths class structure. Auxiliary nodes take latent classes
/// round-robin so the blocks stay balanced.
struct SyntheticSpec {
  int num_classes = 3;
  int per_class = 100;                    // target nodes per class
  std::vector<int> aux_sizes = {90, 60};  // one auxiliary node type per entry
  std::vector<double> p_intra = {0.1};    // per relation; last value repeats
  std::vector<double> p_inter = {0.01};   // per relation; last value repeats
  double noise = 1.0;                     // attribute noise scale; signal has unit scale
  int target_dim = 32;
  int aux_dim = 16;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

/// Builds the graph with types item (target), ctx0, ctx1, ...; relations
/// IC0, IC1, ...; and per-aux-type meta-paths item-ctxK-item named MPK.
HeteroGraph generate_synthetic(const SyntheticSpec& spec);

}  // namespace hgcl::eval
