// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "kernels.hpp"
#include "protein.hpp"
#include "tensor.hpp"

namespace siamdiff {

enum class GraphLevel { atom, residue };

const char* graph_level_name(GraphLevel level);

struct GraphConfig {
    GraphLevel level = GraphLevel::atom;
    double atom_radius = 4.5;     // Angstrom, strict <
    int seq_dist_threshold = 3;   // d_seq, hops
    double residue_radius = 10.0; // Angstrom, strict <
    int knn_k = 10;
    int long_range_cutoff = 5;    // d_long: spatial edges with |i-j| below are dropped
    int angle_bins = 8;

    void validate() const;
    int relation_count() const;   // atom: 1 (radius); residue: 2*d_seq sequential + radius + knn
    int node_feature_dim() const;
    int edge_feature_dim() const;
};

// Element vocabulary for atom one-hot features.
constexpr int kElementVocab = 8;  // C N O S SE P H other
int element_index(const std::string& atom_name);

struct Edge {
    uint32_t src = 0, dst = 0, relation = 0;
    bool operator==(const Edge&) const = default;
};

struct LineEdge {
    uint32_t e_src = 0, e_dst = 0, bin = 0;
};

// Typed multi-relational graph plus the index structures message passing and
// the noise head need. Geometric features are functions of pairwise distances
// and angles only, so they are invariant under rigid motions of the input.
struct ProteinGraph {
    GraphLevel level = GraphLevel::atom;
    uint32_t num_nodes = 0;
    uint32_t num_residues = 0;
    Tensor node_features;            // num_nodes x F_v
    std::vector<Edge> edges;         // sorted by (src, dst, relation), no self loops
    Tensor edge_features;            // num_edges x F_e
    std::vector<LineEdge> line_graph_edges;
    std::vector<Vec3> coords;        // node coordinates at this diffusion step
    std::vector<uint32_t> node_residue;

    // Message-passing index structures (see finalize()).
    std::vector<IndexGroups> rel_src;   // per relation: gather rows of node states
    std::vector<IndexGroups> rel_dst;   // per relation: scatter messages to nodes
    IndexGroups all_dst;                // edge-rep contribution scatter, one entry per edge
    std::vector<IndexGroups> lg_src;    // per angle bin: line-graph gather
    std::vector<IndexGroups> lg_dst;    // per angle bin: line-graph scatter

    // Unique directed node pairs shared by the noise head and the chain-rule
    // target; pair_dirs[p] = (r_src - r_dst) / dist.
    std::vector<uint32_t> pair_src, pair_dst;
    std::vector<double> pair_dist;
    Tensor pair_dirs;
    IndexGroups pair_src_groups, pair_dst_groups;

    IndexGroups pool_groups;  // node -> residue mean pooling

    size_t num_edges() const { return edges.size(); }
};

ProteinGraph build_atom_graph(const Protein& p, const GraphConfig& cfg);
ProteinGraph build_residue_graph(const Protein& p, const GraphConfig& cfg);
ProteinGraph build_graph(const Protein& p, const GraphConfig& cfg);

// Line-graph edges for consecutive directed edges (i->j, j->k), labeled by the
// angle at j discretized uniformly over [0, pi].
std::vector<LineEdge> build_line_graph(const std::vector<Edge>& edges,
                                       const std::vector<Vec3>& coords, int angle_bins);

}  // namespace siamdiff
