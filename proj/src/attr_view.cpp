#include "hgcl/attr_view.hpp"

#include <algorithm>

#include "hgcl/init.hpp"
#include "hgcl/parallel.hpp"

namespace hgcl::attrview {

std::size_t HomoGraph::edge_count() const {
  std::size_t deg = 0;
  for (const auto& lst : adj) deg += lst.size();
  return deg / 2;
}

HomoGraph build_homogeneous_graph(const Matrix& x, double eps) {
  const std::size_t n = x.rows();
  const Matrix sim = cosine_similarity_matrix(x);
  HomoGraph g;
  g.adj.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (sim(i, j) >= eps) {
        g.adj[i].push_back(static_cast<std::uint32_t>(j));
        g.adj[j].push_back(static_cast<std::uint32_t>(i));
      }
  return g;  // lists are already ascending by construction
}

BipartiteEdges build_hetero_edges(const Matrix& ht_proj, const Matrix& hf_proj, double eps) {
  if (ht_proj.cols() != hf_proj.cols())
    throw ShapeError("build_hetero_edges: projections must share a dimension");
  const std::size_t nt = ht_proj.rows(), nf = hf_proj.rows(), d = ht_proj.cols();

  auto normalize = [d](const Matrix& m) {
    Matrix u(m.rows(), d);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double norm = l2_norm(m.row(i));
      if (norm > 0.0)
        for (std::size_t j = 0; j < d; ++j) u(i, j) = m(i, j) / norm;
    }
    return u;
  };
  const Matrix ut = normalize(ht_proj);
  const Matrix uf = normalize(hf_proj);

  std::vector<std::vector<std::uint32_t>> per_target(nt);
  parallel_for(nt, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < nf; ++j)
        if (dot(ut.row(i), uf.row(j)) >= eps)
          per_target[i].push_back(static_cast<std::uint32_t>(j));
  });

  BipartiteEdges edges;
  for (std::size_t i = 0; i < nt; ++i)
    for (const std::uint32_t j : per_target[i]) {
      edges.src.push_back(static_cast<std::uint32_t>(i));
      edges.dst.push_back(j);
    }
  return edges;
}

ad::Var sage_encode(ad::Tape& tape, const HomoGraph& g, ad::Var x, ad::Var w_enc,
                    ad::Activation act) {
  if (g.adj.size() != x.rows()) throw ShapeError("sage_encode: adjacency/attribute mismatch");
  ad::RowGroups groups(g.adj.size());
  for (std::size_t i = 0; i < g.adj.size(); ++i) {
    if (g.adj[i].empty())
      groups[i] = {static_cast<std::uint32_t>(i)};  // isolated: own row as mean
    else
      groups[i].assign(g.adj[i].begin(), g.adj[i].end());
  }
  ad::Var mean = tape.masked_mean_rows(x, std::move(groups));
  return tape.activation(tape.matmul(tape.hcat(x, mean), w_enc), act);
}

namespace {

/// Contiguous per-target segments of an edge list sorted by src.
std::pair<ad::Segments, std::vector<std::uint32_t>> segment_by_src(
    const std::vector<std::uint32_t>& src) {
  ad::Segments segs;
  std::vector<std::uint32_t> targets;
  std::size_t at = 0;
  while (at < src.size()) {
    std::size_t end = at;
    while (end < src.size() && src[end] == src[at]) ++end;
    if (segs.offsets.empty()) segs.offsets.push_back(at);
    segs.offsets.push_back(end);
    targets.push_back(src[at]);
    at = end;
  }
  return {std::move(segs), std::move(targets)};
}

}  // namespace

HeteroAggregate hetero_attention_aggregate(ad::Tape& tape, ad::Var ht, ad::Var hf,
                                           ad::Var values, ad::Var bilinear,
                                           const BipartiteEdges& edges,
                                           std::size_t n_target,
                                           ad::Activation score_act,
                                           ad::Activation agg_act) {
  HeteroAggregate out;
  if (edges.size() == 0) {
    out.z = tape.constant(Matrix(n_target, values.cols()));
    out.alpha = tape.constant(Matrix(0, 1));
    out.isolated = n_target;
    return out;
  }
  auto [segs, targets] = segment_by_src(edges.src);
  ad::Var hi = tape.gather_rows(ht, edges.src);
  ad::Var hj = tape.gather_rows(hf, edges.dst);
  ad::Var logits =
      tape.activation(tape.row_dot(tape.matmul(hi, bilinear), hj), score_act);
  ad::Var alpha = tape.segment_softmax(logits, segs);
  ad::Var vj = tape.gather_rows(values, edges.dst);
  ad::Var summed = tape.weighted_segment_sum(alpha, vj, segs, targets, n_target);
  out.z = tape.activation(summed, agg_act);
  out.alpha = alpha;
  out.segments = std::move(segs);
  out.isolated = n_target - targets.size();
  out.segment_target = std::move(targets);
  return out;
}

SemanticFusion semantic_fuse(ad::Tape& tape, const std::vector<ad::Var>& groups,
                             const std::vector<ad::Var>& q, ad::Var w_prime,
                             ad::Var b_prime, ad::Activation inner_act) {
  if (groups.empty()) throw ShapeError("semantic_fuse: no groups");
  if (groups.size() != q.size())
    throw ShapeError("semantic_fuse: one attention vector per group required");
  std::vector<ad::Var> scores;
  scores.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    ad::Var keyed = tape.activation(
        tape.add_row(tape.matmul(groups[g], w_prime), b_prime), inner_act);
    scores.push_back(tape.mean_rows(tape.matmul(keyed, q[g])));  // 1 x 1
  }
  ad::Var stacked = tape.vcat(scores);
  ad::Segments whole;
  whole.offsets = {0, groups.size()};
  ad::Var beta = tape.segment_softmax(stacked, whole);
  return {tape.weighted_sum(groups, beta), beta};
}

Encoder::Encoder(const HeteroGraph& g, const TrainConfig& cfg, ad::ParamStore& store,
                 Rng& init) {
  target_ = g.target_index();
  const auto hidden = static_cast<std::size_t>(cfg.hidden_dim);
  const auto out_dim = static_cast<std::size_t>(cfg.out_dim);
  act_sage_ = ad::activation_from_name(cfg.activations.sage);
  act_score_ = ad::activation_from_name(cfg.activations.hetero_score);
  act_agg_ = ad::activation_from_name(cfg.activations.hetero_agg);
  act_semantic_ = ad::activation_from_name(cfg.activations.semantic);

  for (std::size_t t = 0; t < g.node_types.size(); ++t) {
    const std::size_t raw = g.attributes[t].cols();
    p_sage_.push_back(store.add("attr.sage." + g.node_types[t],
                                glorot_uniform(2 * raw, hidden, init)));
    p_proj_.push_back(store.add("attr.proj." + g.node_types[t],
                                glorot_uniform(hidden, hidden, init)));
    if (t != target_) {
      other_types_.push_back(t);
      eps_hetero_.push_back(cfg.eps_hetero.get(g.node_types[t]));
    }
  }
  p_bilinear_ = store.add("attr.bilinear", glorot_uniform(hidden, hidden, init));
  for (std::size_t t = 0; t < g.node_types.size(); ++t)
    p_q_.push_back(store.add("attr.q." + g.node_types[t], glorot_uniform(hidden, 1, init)));
  p_w_prime_ = store.add("attr.w_prime", glorot_uniform(hidden, hidden, init));
  p_b_prime_ = store.add("attr.b_prime", Matrix(1, hidden));
  p_out_ = store.add("attr.out_proj", glorot_uniform(hidden, out_dim, init));
}

Encoder::Output Encoder::forward(ad::Tape& tape, const std::vector<ad::Var>& params,
                                 const HeteroGraph& g, const std::vector<HomoGraph>& homo,
                                 const std::vector<BipartiteEdges>* fixed_edges) const {
  if (homo.size() != g.node_types.size())
    throw ShapeError("attr forward: one homogeneous graph per type required");

  // Per-type mean-aggregator encodings H^f.
  std::vector<ad::Var> h(g.node_types.size());
  std::vector<ad::Var> proj(g.node_types.size());
  for (std::size_t t = 0; t < g.node_types.size(); ++t) {
    ad::Var x = tape.constant(g.attributes[t]);
    h[t] = sage_encode(tape, homo[t], x, params[p_sage_[t]], act_sage_);
    proj[t] = tape.matmul(h[t], params[p_proj_[t]]);
  }

  Output out;
  std::vector<ad::Var> groups;   // Z^t first, then one Z^f per other type
  std::vector<ad::Var> qs;
  groups.push_back(h[target_]);
  qs.push_back(params[p_q_[target_]]);

  for (std::size_t k = 0; k < other_types_.size(); ++k) {
    const std::size_t t = other_types_[k];
    BipartiteEdges regenerated;
    const BipartiteEdges* edges;
    if (fixed_edges) {
      edges = &(*fixed_edges)[k];
    } else {
      regenerated = build_hetero_edges(proj[target_].value(), proj[t].value(),
                                       eps_hetero_[k]);
      edges = &regenerated;
    }
    // Scoring happens in the shared projected space (the same one the
    // edges were selected in); aggregation sums the projected rows.
    HeteroAggregate agg = hetero_attention_aggregate(
        tape, proj[target_], proj[t], proj[t], params[p_bilinear_], *edges,
        g.node_counts[target_], act_score_, act_agg_);
    groups.push_back(agg.z);
    qs.push_back(params[p_q_[t]]);
    out.isolated_per_type.push_back(agg.isolated);
    out.hetero_edge_counts.push_back(edges->size());
  }

  SemanticFusion fusion = semantic_fuse(tape, groups, qs, params[p_w_prime_],
                                        params[p_b_prime_], act_semantic_);
  out.z = tape.matmul(fusion.fused, params[p_out_]);
  out.beta = fusion.beta;
  return out;
}

}  // namespace hgcl::attrview
