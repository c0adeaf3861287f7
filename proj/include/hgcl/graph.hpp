#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgcl/matrix.hpp"

namespace hgcl {

/// One typed edge relation, stored directed as declared. Meta-path
/// composition may traverse it in either direction.
struct Relation {
  std::string src_type;
  std::string name;
  std::string dst_type;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

/// A composite relation: a node-type sequence joined by named relations.
/// The first and last type must both be the target type.
struct MetaPath {
  std::string name;
  std::vector<std::string> type_sequence;      // length l+1
  std::vector<std::string> relation_sequence;  // length l
};

/// Typed nodes with per-type dense attribute matrices and typed edge lists.
/// Immutable by convention after construction/validation; the perturbation
/// operations return modified copies.
struct HeteroGraph {
  std::vector<std::string> node_types;
  std::vector<std::size_t> node_counts;   // parallel to node_types
  std::vector<Matrix> attributes;         // parallel to node_types
  std::vector<Relation> relations;
  std::string target_type;
  std::vector<int> labels;                // per target node; empty if absent
  std::vector<MetaPath> meta_paths;

  std::size_t type_index(std::string_view type) const;
  std::size_t target_index() const { return type_index(target_type); }
  std::size_t target_count() const { return node_counts[target_index()]; }
  std::size_t total_nodes() const;
  std::size_t total_edges() const;
  bool has_labels() const { return !labels.empty(); }
  /// Number of distinct label values (labels are class indices 0..k-1).
  std::size_t num_classes() const;
};

/// Checks every structural invariant; throws GraphError / DatasetError with
/// a description of the first violation.
void validate(const HeteroGraph& g);

void validate(const MetaPath& m, const HeteroGraph& g);

/// Total edges over squared total node count.
double density(const HeteroGraph& g);

/// Per-target-node neighbor sets under one meta-path, self always included.
struct MetaPathAdjacency {
  MetaPath metapath;
  std::vector<std::vector<std::uint32_t>> neighbor_sets;  // sorted ascending

  bool contains(std::uint32_t i, std::uint32_t j) const;
};

/// Nodes reachable from each target node by instantiating the meta-path,
/// computed by stepwise boolean adjacency composition. A step whose source
/// and destination types coincide uses the relation in both directions;
/// otherwise the direction is fixed by the type sequence.
MetaPathAdjacency meta_path_neighbors(const HeteroGraph& g, const MetaPath& m);

/// Deletes each edge independently with probability p. Nodes, attributes
/// and labels are untouched. Deterministic for a given seed.
HeteroGraph perturb_edges(const HeteroGraph& g, double p, std::uint64_t seed);

/// Zeroes a random floor(ratio * dim) dimensions of every node's attribute
/// vector. Deterministic for a given seed.
HeteroGraph mask_attributes(const HeteroGraph& g, double ratio, std::uint64_t seed);

}  // namespace hgcl
