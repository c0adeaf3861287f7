#pragma once

#include <vector>

#include "hgcl/attr_view.hpp"
#include "hgcl/autodiff.hpp"
#include "hgcl/config.hpp"
#include "hgcl/graph.hpp"
#include "hgcl/rng.hpp"

namespace hgcl::topoview {

struct MetaPathAggregate {
  ad::Var h;      // n x d
  ad::Var gamma;  // per-(node, neighbor) attention weights
};

/// Attention aggregation over one meta-path's neighbor sets: the logit for
/// (i, j) is score_act(s . [h_i || h_j]), softmaxed over j in N_i, and
/// h_i' = agg_act(sum_j gamma_ij h_j). Every neighbor set must be nonempty
/// (self-inclusion guarantees this for MetaPathAdjacency).
MetaPathAggregate metapath_attention_aggregate(ad::Tape& tape, ad::Var h,
                                               const MetaPathAdjacency& adj, ad::Var s,
                                               ad::Activation score_act,
                                               ad::Activation agg_act);

/// Semantic-attention fusion of per-meta-path representations into Z_topo;
/// returns the per-path weights eta alongside.
attrview::SemanticFusion fuse_across_metapaths(ad::Tape& tape,
                                               const std::vector<ad::Var>& per_path,
                                               const std::vector<ad::Var>& q,
                                               ad::Var w_prime, ad::Var b_prime,
                                               ad::Activation inner_act);

/// Topology-guided view: target-type attributes are linearly projected to
/// the hidden dimension, aggregated per meta-path with node-level
/// attention, fused across meta-paths, then projected to the output dim.
/// Intermediate meta-path nodes contribute connectivity only.
class Encoder {
 public:
  Encoder(const HeteroGraph& g, const TrainConfig& cfg, ad::ParamStore& store, Rng& init);

  struct Output {
    ad::Var z;    // n_target x out_dim
    ad::Var eta;  // per-meta-path fusion weights
  };

  Output forward(ad::Tape& tape, const std::vector<ad::Var>& params,
                 const HeteroGraph& g,
                 const std::vector<MetaPathAdjacency>& adjacencies) const;

 private:
  std::size_t target_;
  std::size_t n_paths_;
  ad::Activation act_score_, act_agg_, act_semantic_;
  std::size_t p_input_;
  std::vector<std::size_t> p_s_;  // per meta-path attention vector
  std::vector<std::size_t> p_q_;  // per meta-path semantic vector
  std::size_t p_w_prime_, p_b_prime_;
  std::size_t p_out_;
};

}  // namespace hgcl::topoview
