#include "hgcl/topo_view.hpp"

#include "hgcl/errors.hpp"
#include "hgcl/init.hpp"

namespace hgcl::topoview {

MetaPathAggregate metapath_attention_aggregate(ad::Tape& tape, ad::Var h,
                                               const MetaPathAdjacency& adj, ad::Var s,
                                               ad::Activation score_act,
                                               ad::Activation agg_act) {
  const std::size_t n = adj.neighbor_sets.size();
  if (h.rows() != n) throw ShapeError("metapath_attention_aggregate: row count mismatch");
  if (s.rows() != 2 * h.cols() || s.cols() != 1)
    throw ShapeError("metapath_attention_aggregate: attention vector must be 2d x 1");

  std::vector<std::uint32_t> src, dst;
  ad::Segments segs;
  std::vector<std::uint32_t> targets;
  segs.offsets.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (adj.neighbor_sets[i].empty())
      throw GraphError("metapath_attention_aggregate: empty neighbor set (self-inclusion missing)");
    for (const std::uint32_t j : adj.neighbor_sets[i]) {
      src.push_back(static_cast<std::uint32_t>(i));
      dst.push_back(j);
    }
    segs.offsets.push_back(src.size());
    targets.push_back(static_cast<std::uint32_t>(i));
  }

  ad::Var hi = tape.gather_rows(h, src);
  ad::Var hj = tape.gather_rows(h, dst);
  ad::Var logits = tape.activation(tape.matmul(tape.hcat(hi, hj), s), score_act);
  ad::Var gamma = tape.segment_softmax(logits, segs);
  ad::Var summed = tape.weighted_segment_sum(gamma, hj, segs, targets, n);
  return {tape.activation(summed, agg_act), gamma};
}

attrview::SemanticFusion fuse_across_metapaths(ad::Tape& tape,
                                               const std::vector<ad::Var>& per_path,
                                               const std::vector<ad::Var>& q,
                                               ad::Var w_prime, ad::Var b_prime,
                                               ad::Activation inner_act) {
  return attrview::semantic_fuse(tape, per_path, q, w_prime, b_prime, inner_act);
}

Encoder::Encoder(const HeteroGraph& g, const TrainConfig& cfg, ad::ParamStore& store,
                 Rng& init) {
  target_ = g.target_index();
  n_paths_ = g.meta_paths.size();
  if (n_paths_ == 0) throw GraphError("topology view requires at least one meta-path");
  const auto hidden = static_cast<std::size_t>(cfg.hidden_dim);
  const auto out_dim = static_cast<std::size_t>(cfg.out_dim);
  act_score_ = ad::activation_from_name(cfg.activations.topo_score);
  act_agg_ = ad::activation_from_name(cfg.activations.topo_agg);
  act_semantic_ = ad::activation_from_name(cfg.activations.semantic);

  const std::size_t raw = g.attributes[target_].cols();
  p_input_ = store.add("topo.input_proj", glorot_uniform(raw, hidden, init));
  for (const MetaPath& m : g.meta_paths)
    p_s_.push_back(store.add("topo.s." + m.name, glorot_uniform(2 * hidden, 1, init)));
  for (const MetaPath& m : g.meta_paths)
    p_q_.push_back(store.add("topo.q." + m.name, glorot_uniform(hidden, 1, init)));
  p_w_prime_ = store.add("topo.w_prime", glorot_uniform(hidden, hidden, init));
  p_b_prime_ = store.add("topo.b_prime", Matrix(1, hidden));
  p_out_ = store.add("topo.out_proj", glorot_uniform(hidden, out_dim, init));
}

Encoder::Output Encoder::forward(ad::Tape& tape, const std::vector<ad::Var>& params,
                                 const HeteroGraph& g,
                                 const std::vector<MetaPathAdjacency>& adjacencies) const {
  if (adjacencies.size() != n_paths_)
    throw ShapeError("topo forward: one adjacency per configured meta-path required");

  ad::Var x = tape.constant(g.attributes[target_]);
  ad::Var h = tape.matmul(x, params[p_input_]);

  std::vector<ad::Var> per_path, qs;
  per_path.reserve(n_paths_);
  for (std::size_t p = 0; p < n_paths_; ++p) {
    MetaPathAggregate agg =
        metapath_attention_aggregate(tape, h, adjacencies[p], params[p_s_[p]],
                                     act_score_, act_agg_);
    per_path.push_back(agg.h);
    qs.push_back(params[p_q_[p]]);
  }

  attrview::SemanticFusion fusion = fuse_across_metapaths(
      tape, per_path, qs, params[p_w_prime_], params[p_b_prime_], act_semantic_);
  return {tape.matmul(fusion.fused, params[p_out_]), fusion.beta};
}

}  // namespace hgcl::topoview
