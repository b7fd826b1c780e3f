// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "graph.hpp"
#include "params.hpp"

namespace siamdiff {

// Flat-container form of a graph, serializable through the checkpoint format:
// coords (n x 3), node_features, node_residue (n x 1), edges (m x 3 as
// src/dst/relation), edge_features, line_graph (l x 3 as e_src/e_dst/bin) and
// meta (1 x 2: level id, residue count).
NamedTensors graph_to_tensors(const ProteinGraph& g);

}  // namespace siamdiff
