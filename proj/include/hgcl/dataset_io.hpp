#pragma once

#include <filesystem>

#include "hgcl/graph.hpp"

namespace hgcl {

/// Reads a dataset directory: `schema.json` plus `nodes_<type>.csv` and
/// `edges_<relation>.csv` files. Returns a fully validated graph.
/// Failures raise DatasetError naming the offending file and line.
HeteroGraph load_graph(const std::filesystem::path& dir);

/// Writes a graph in the load_graph directory format.
void save_graph(const HeteroGraph& g, const std::filesystem::path& dir);

}  // namespace hgcl
