#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hgcl/attr_view.hpp"
#include "hgcl/autodiff.hpp"
#include "hgcl/config.hpp"
#include "hgcl/contrast.hpp"
#include "hgcl/graph.hpp"

namespace hgcl::train {

/// Everything derivable from (graph, config) before the epoch loop:
/// regenerated homogeneous graphs, meta-path neighborhoods, the sampling
/// score tables and the positive/negative partitions. Pure and
/// deterministic.
struct Preprocessed {
  std::vector<attrview::HomoGraph> homo;        // per node type
  std::vector<MetaPathAdjacency> metapath_adj;  // per configured meta-path
  std::vector<double> delta;                    // per configured meta-path
  contrast::SampleSets samples;
};

Preprocessed preprocess(const HeteroGraph& g, const TrainConfig& cfg);

struct TrainedModel {
  TrainConfig config;
  ad::ParamStore params;
  Matrix z_attr;  // empty for the topo-only variant
  Matrix z_topo;  // empty for the attr-only variant
  Matrix z;       // evaluation embedding: z_attr || z_topo (single view for ablations)
  std::vector<double> loss_history;
};

/// Runs the full training loop: per epoch both view forwards, the
/// reciprocal loss, backprop and one Adam step. Stops at the epoch limit or
/// after `patience` epochs without relative improvement. Identical
/// (graph, config) inputs give bit-identical histories and embeddings.
TrainedModel train(const HeteroGraph& g, const TrainConfig& cfg);

/// CSV with one row per node: node_index, v0..v{d-1}. Values are written
/// with shortest round-trip precision so a reload is bit-exact.
void export_embeddings(const Matrix& z, const std::filesystem::path& file);
Matrix load_embeddings(const std::filesystem::path& file);

void export_loss_history(const std::vector<double>& history, const std::filesystem::path& file);

/// Binary checkpoint: magic, embedded config JSON, then named tensors as
/// (name, rows, cols, little-endian f64 payload).
void save_checkpoint(const TrainedModel& model, const std::filesystem::path& file);

/// Restores config and parameters. Embeddings are not part of a checkpoint;
/// the returned model's z matrices are empty.
TrainedModel load_checkpoint(const std::filesystem::path& file);

/// Max |grad| per registered parameter after one forward/backward on the
/// given instance. Diagnostic for dead-subgraph checks.
std::vector<std::pair<std::string, double>> gradient_magnitudes(const HeteroGraph& g,
                                                                const TrainConfig& cfg);

}  // namespace hgcl::train
