#include "hgcl/graph.hpp"

#include <algorithm>
#include <set>

#include "hgcl/errors.hpp"
#include "hgcl/parallel.hpp"
#include "hgcl/rng.hpp"

namespace hgcl {

std::size_t HeteroGraph::type_index(std::string_view type) const {
  for (std::size_t i = 0; i < node_types.size(); ++i)
    if (node_types[i] == type) return i;
  throw GraphError("unknown node type '" + std::string(type) + "'");
}

std::size_t HeteroGraph::total_nodes() const {
  std::size_t n = 0;
  for (const std::size_t c : node_counts) n += c;
  return n;
}

std::size_t HeteroGraph::total_edges() const {
  std::size_t n = 0;
  for (const Relation& r : relations) n += r.edges.size();
  return n;
}

std::size_t HeteroGraph::num_classes() const {
  int top = -1;
  for (const int l : labels) top = std::max(top, l);
  return static_cast<std::size_t>(top + 1);
}

void validate(const HeteroGraph& g) {
  if (g.node_types.size() != g.node_counts.size() ||
      g.node_types.size() != g.attributes.size())
    throw GraphError("node_types, node_counts and attributes must be parallel");
  if (g.node_types.size() + g.relations.size() < 2)
    throw GraphError("heterogeneity requires |node types| + |relation types| >= 2");
  {
    std::set<std::string> seen(g.node_types.begin(), g.node_types.end());
    if (seen.size() != g.node_types.size()) throw GraphError("duplicate node type name");
  }
  g.type_index(g.target_type);  // must exist
  for (std::size_t t = 0; t < g.node_types.size(); ++t) {
    const Matrix& x = g.attributes[t];
    if (x.rows() != g.node_counts[t])
      throw GraphError("attribute matrix for type '" + g.node_types[t] +
                       "' has " + std::to_string(x.rows()) + " rows, expected " +
                       std::to_string(g.node_counts[t]));
    if (!x.all_finite())
      throw GraphError("attribute matrix for type '" + g.node_types[t] +
                       "' contains a non-finite value");
  }
  std::set<std::string> rel_names;
  for (const Relation& r : g.relations) {
    if (!rel_names.insert(r.name).second)
      throw GraphError("duplicate relation name '" + r.name + "'");
    const std::size_t ns = g.node_counts[g.type_index(r.src_type)];
    const std::size_t nd = g.node_counts[g.type_index(r.dst_type)];
    for (const auto& [s, d] : r.edges) {
      if (s >= ns || d >= nd)
        throw GraphError("relation '" + r.name + "': edge (" + std::to_string(s) +
                         "," + std::to_string(d) + ") index out of range");
    }
  }
  if (!g.labels.empty()) {
    if (g.labels.size() != g.target_count())
      throw GraphError("labels must cover exactly the target type's nodes (" +
                       std::to_string(g.labels.size()) + " vs " +
                       std::to_string(g.target_count()) + ")");
    for (const int l : g.labels)
      if (l < 0) throw GraphError("negative class label");
  }
  for (const MetaPath& m : g.meta_paths) validate(m, g);
}

void validate(const MetaPath& m, const HeteroGraph& g) {
  if (m.type_sequence.size() < 2 || m.relation_sequence.size() + 1 != m.type_sequence.size())
    throw GraphError("meta-path '" + m.name + "': need l+1 types for l relations, l >= 1");
  if (m.type_sequence.front() != g.target_type || m.type_sequence.back() != g.target_type)
    throw GraphError("meta-path '" + m.name + "' must start and end at the target type");
  for (const std::string& t : m.type_sequence) g.type_index(t);
  for (std::size_t s = 0; s < m.relation_sequence.size(); ++s) {
    const std::string& from = m.type_sequence[s];
    const std::string& to = m.type_sequence[s + 1];
    const auto it = std::find_if(g.relations.begin(), g.relations.end(),
                                 [&](const Relation& r) { return r.name == m.relation_sequence[s]; });
    if (it == g.relations.end())
      throw GraphError("meta-path '" + m.name + "': unknown relation '" +
                       m.relation_sequence[s] + "'");
    const bool forward = it->src_type == from && it->dst_type == to;
    const bool reverse = it->dst_type == from && it->src_type == to;
    if (!forward && !reverse)
      throw GraphError("meta-path '" + m.name + "': relation '" + it->name +
                       "' does not connect " + from + " and " + to);
  }
}

double density(const HeteroGraph& g) {
  const std::size_t n = g.total_nodes();
  if (n == 0) return 0.0;
  return static_cast<double>(g.total_edges()) /
         (static_cast<double>(n) * static_cast<double>(n));
}

bool MetaPathAdjacency::contains(std::uint32_t i, std::uint32_t j) const {
  const auto& set = neighbor_sets[i];
  return std::binary_search(set.begin(), set.end(), j);
}

namespace {

/// Forward adjacency for one meta-path step, honoring the declared relation
/// direction. Same-type steps take the relation as undirected.
std::vector<std::vector<std::uint32_t>> step_adjacency(const HeteroGraph& g,
                                                       const std::string& from,
                                                       const std::string& to,
                                                       const std::string& rel_name) {
  const auto it = std::find_if(g.relations.begin(), g.relations.end(),
                               [&](const Relation& r) { return r.name == rel_name; });
  if (it == g.relations.end())
    throw GraphError("meta-path step: unknown relation '" + rel_name + "'");
  const std::size_t n_from = g.node_counts[g.type_index(from)];
  std::vector<std::vector<std::uint32_t>> adj(n_from);
  const bool same_type = it->src_type == it->dst_type;
  const bool forward = it->src_type == from && it->dst_type == to;
  const bool reverse = it->dst_type == from && it->src_type == to;
  if (!forward && !reverse)
    throw GraphError("meta-path step: relation '" + rel_name + "' does not connect " +
                     from + " -> " + to);
  for (const auto& [s, d] : it->edges) {
    if (same_type) {
      adj[s].push_back(d);
      adj[d].push_back(s);
    } else if (forward) {
      adj[s].push_back(d);
    } else {
      adj[d].push_back(s);
    }
  }
  for (auto& lst : adj) {
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
  }
  return adj;
}

}  // namespace

MetaPathAdjacency meta_path_neighbors(const HeteroGraph& g, const MetaPath& m) {
  validate(m, g);
  const std::size_t n_target = g.target_count();

  std::vector<std::vector<std::vector<std::uint32_t>>> steps;
  steps.reserve(m.relation_sequence.size());
  for (std::size_t s = 0; s < m.relation_sequence.size(); ++s)
    steps.push_back(step_adjacency(g, m.type_sequence[s], m.type_sequence[s + 1],
                                   m.relation_sequence[s]));

  std::vector<std::size_t> layer_counts(steps.size());
  for (std::size_t s = 0; s < steps.size(); ++s)
    layer_counts[s] = g.node_counts[g.type_index(m.type_sequence[s + 1])];

  MetaPathAdjacency out;
  out.metapath = m;
  out.neighbor_sets.resize(n_target);

  // Per-start-node frontier expansion; a mark array deduplicates each layer.
  parallel_for(n_target, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> frontier, next;
    std::vector<std::uint8_t> mark;
    for (std::size_t i = lo; i < hi; ++i) {
      frontier.assign(1, static_cast<std::uint32_t>(i));
      for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto& adj = steps[s];
        const std::size_t n_next = layer_counts[s];
        mark.assign(n_next, 0);
        next.clear();
        for (const std::uint32_t u : frontier)
          for (const std::uint32_t v : adj[u])
            if (!mark[v]) {
              mark[v] = 1;
              next.push_back(v);
            }
        frontier.swap(next);
      }
      frontier.push_back(static_cast<std::uint32_t>(i));  // self-inclusion
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      out.neighbor_sets[i] = frontier;
    }
  });
  return out;
}

HeteroGraph perturb_edges(const HeteroGraph& g, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw GraphError("perturb_edges: p must be in [0,1]");
  HeteroGraph out = g;
  Rng rng = Rng::substream(seed, "perturb_edges");
  for (Relation& r : out.relations) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> kept;
    kept.reserve(r.edges.size());
    for (const auto& e : r.edges)
      if (!(rng.uniform() < p)) kept.push_back(e);
    r.edges = std::move(kept);
  }
  return out;
}

HeteroGraph mask_attributes(const HeteroGraph& g, double ratio, std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0) throw GraphError("mask_attributes: ratio must be in [0,1]");
  HeteroGraph out = g;
  Rng rng = Rng::substream(seed, "mask_attributes");
  for (std::size_t t = 0; t < out.attributes.size(); ++t) {
    Matrix& x = out.attributes[t];
    const std::size_t dim = x.cols();
    const std::size_t k = static_cast<std::size_t>(ratio * static_cast<double>(dim));
    if (k == 0) continue;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto dims = rng.sample_without_replacement(dim, k);
      for (const std::uint32_t j : dims) x(i, j) = 0.0;
    }
  }
  return out;
}

}  // namespace hgcl
