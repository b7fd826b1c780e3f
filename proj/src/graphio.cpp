// SPDX-License-Identifier: Apache-2.0
#include "graphio.hpp"

#include "diffusion.hpp"

namespace siamdiff {

NamedTensors graph_to_tensors(const ProteinGraph& g) {
    NamedTensors out;
    out.tensors["coords"] = coords_to_tensor(g.coords);
    out.tensors["node_features"] = g.node_features;
    Tensor owner(int64_t(g.num_nodes), 1);
    for (uint32_t i = 0; i < g.num_nodes; ++i) owner.v[i] = double(g.node_residue[i]);
    out.tensors["node_residue"] = std::move(owner);

    Tensor edges(int64_t(g.num_edges()), 3);
    for (size_t e = 0; e < g.num_edges(); ++e) {
        edges.at(int64_t(e), 0) = double(g.edges[e].src);
        edges.at(int64_t(e), 1) = double(g.edges[e].dst);
        edges.at(int64_t(e), 2) = double(g.edges[e].relation);
    }
    out.tensors["edges"] = std::move(edges);
    out.tensors["edge_features"] = g.edge_features;

    Tensor lg(int64_t(g.line_graph_edges.size()), 3);
    for (size_t e = 0; e < g.line_graph_edges.size(); ++e) {
        lg.at(int64_t(e), 0) = double(g.line_graph_edges[e].e_src);
        lg.at(int64_t(e), 1) = double(g.line_graph_edges[e].e_dst);
        lg.at(int64_t(e), 2) = double(g.line_graph_edges[e].bin);
    }
    out.tensors["line_graph"] = std::move(lg);

    Tensor meta(1, 2);
    meta.v[0] = g.level == GraphLevel::atom ? 0.0 : 1.0;
    meta.v[1] = double(g.num_residues);
    out.tensors["meta"] = std::move(meta);
    return out;
}

}  // namespace siamdiff
