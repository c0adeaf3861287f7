#pragma once

#include <cstdint>
#include <vector>

#include "hgcl/autodiff.hpp"
#include "hgcl/config.hpp"
#include "hgcl/graph.hpp"
#include "hgcl/rng.hpp"

namespace hgcl::attrview {

/// Undirected neighbor lists over one node type's regenerated edges.
/// Symmetric, no self loops.
struct HomoGraph {
  std::vector<std::vector<std::uint32_t>> adj;
  std::size_t edge_count() const;
};

/// Keeps (i,j), i != j, iff the cosine similarity of rows i and j of x is
/// at least eps. Zero-norm rows match nothing.
HomoGraph build_homogeneous_graph(const Matrix& x, double eps);

/// Bipartite target-to-other-type edges, sorted by (src, dst).
struct BipartiteEdges {
  std::vector<std::uint32_t> src;  // target-type node index
  std::vector<std::uint32_t> dst;  // other-type node index
  std::size_t size() const { return src.size(); }
};

/// Keeps (i,j) iff cos(row i of ht_proj, row j of hf_proj) >= eps. The
/// inputs are the already type-projected representations of the target and
/// the other type.
BipartiteEdges build_hetero_edges(const Matrix& ht_proj, const Matrix& hf_proj, double eps);

/// One mean-aggregator layer: row i is act(W_enc . [x_i || mean of x over
/// i's neighbors]). An isolated node falls back to its own row as the mean.
ad::Var sage_encode(ad::Tape& tape, const HomoGraph& g, ad::Var x, ad::Var w_enc,
                    ad::Activation act);

struct HeteroAggregate {
  ad::Var z;           // n_target x d, zero rows for targets with no neighbors
  ad::Var alpha;       // per-edge attention weights
  ad::Segments segments;
  std::vector<std::uint32_t> segment_target;
  std::size_t isolated = 0;  // targets with no neighbors of this type
};

/// Bilinear attention over a bipartite edge list: per edge (i,j) the logit
/// is score_act(h_i^T W h_j) built from ht/hf rows; weights are softmaxed
/// per target node; aggregation sums the rows of `values` (the projected
/// other-type representations).
HeteroAggregate hetero_attention_aggregate(ad::Tape& tape, ad::Var ht, ad::Var hf,
                                           ad::Var values, ad::Var bilinear,
                                           const BipartiteEdges& edges,
                                           std::size_t n_target,
                                           ad::Activation score_act,
                                           ad::Activation agg_act);

struct SemanticFusion {
  ad::Var fused;
  ad::Var beta;  // |groups| x 1, sums to 1
};

/// Attention-weighted combination of per-group representations. Each group
/// g is scored by the mean over its rows of q_g . inner_act(W' z + b'),
/// scores are softmaxed into beta, and the output is the beta-weighted sum.
SemanticFusion semantic_fuse(ad::Tape& tape, const std::vector<ad::Var>& groups,
                             const std::vector<ad::Var>& q, ad::Var w_prime,
                             ad::Var b_prime, ad::Activation inner_act);

/// Attribute-guided view: regenerated homogeneous graphs feed per-type mean
/// aggregators; heterogeneous edges are regenerated each call from the
/// current representations; attention fuses the per-type views into one
/// embedding for the target nodes.
class Encoder {
 public:
  /// Registers all learnable parameters in `store` (Glorot-uniform init).
  Encoder(const HeteroGraph& g, const TrainConfig& cfg, ad::ParamStore& store, Rng& init);

  struct Output {
    ad::Var z;       // n_target x out_dim
    ad::Var beta;    // per-type fusion weights
    std::vector<std::size_t> isolated_per_type;  // parallel to non-target types
    std::vector<std::size_t> hetero_edge_counts;
  };

  /// `params` must come from ParamStore::to_tape on the same store. When
  /// `fixed_edges` is non-null the given bipartite edge lists are used
  /// instead of regenerating them (one list per non-target type).
  Output forward(ad::Tape& tape, const std::vector<ad::Var>& params,
                 const HeteroGraph& g, const std::vector<HomoGraph>& homo,
                 const std::vector<BipartiteEdges>* fixed_edges = nullptr) const;

  const std::vector<std::size_t>& non_target_types() const { return other_types_; }

 private:
  std::size_t target_;
  std::vector<std::size_t> other_types_;
  std::vector<double> eps_hetero_;  // parallel to other_types_
  ad::Activation act_sage_, act_score_, act_agg_, act_semantic_;
  // parameter slots
  std::vector<std::size_t> p_sage_;       // per type
  std::vector<std::size_t> p_proj_;       // per type (W_f)
  std::size_t p_bilinear_;
  std::vector<std::size_t> p_q_;          // per type (q_f)
  std::size_t p_w_prime_, p_b_prime_;
  std::size_t p_out_;
};

}  // namespace hgcl::attrview
