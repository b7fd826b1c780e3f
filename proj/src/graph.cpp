// SPDX-License-Identifier: Apache-2.0
#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"

namespace siamdiff {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* graph_level_name(GraphLevel level) {
    return level == GraphLevel::atom ? "atom" : "residue";
}

void GraphConfig::validate() const {
    if (!(atom_radius > 0)) throw ConfigError("graph: atom_radius must be > 0");
    if (!(residue_radius > 0)) throw ConfigError("graph: residue_radius must be > 0");
    if (seq_dist_threshold < 1) throw ConfigError("graph: seq_dist_threshold must be >= 1");
    if (knn_k < 1) throw ConfigError("graph: knn_k must be >= 1");
    if (long_range_cutoff < 0) throw ConfigError("graph: long_range_cutoff must be >= 0");
    if (angle_bins < 1) throw ConfigError("graph: angle_bins must be >= 1");
}

int GraphConfig::relation_count() const {
    return level == GraphLevel::atom ? 1 : 2 * seq_dist_threshold + 2;
}

int GraphConfig::node_feature_dim() const {
    return level == GraphLevel::atom ? kElementVocab + kResidueAlphabet : kResidueAlphabet;
}

int GraphConfig::edge_feature_dim() const {
    return 2 * kResidueAlphabet + relation_count() + (seq_dist_threshold + 1) + 1;
}

int element_index(const std::string& atom_name) {
    std::string stripped;
    for (char c : atom_name)
        if (c != ' ') stripped += c;
    if (stripped == "SE") return 4;
    for (char c : stripped) {
        if (c >= '0' && c <= '9') continue;
        switch (c) {
            case 'C': return 0;
            case 'N': return 1;
            case 'O': return 2;
            case 'S': return 3;
            case 'P': return 5;
            case 'H':
            case 'D': return 6;
            default: return 7;
        }
    }
    return 7;
}

std::vector<LineEdge> build_line_graph(const std::vector<Edge>& edges,
                                       const std::vector<Vec3>& coords, int angle_bins) {
    std::vector<LineEdge> out;
    if (edges.empty()) return out;
    // Group edges by source node so successors of e = (i->j) are found in
    // O(deg) instead of scanning all edges.
    uint32_t n = 0;
    for (const Edge& e : edges) n = std::max(n, std::max(e.src, e.dst) + 1);
    std::vector<std::vector<uint32_t>> by_src(n);
    for (uint32_t e = 0; e < edges.size(); ++e) by_src[edges[e].src].push_back(e);

    for (uint32_t e1 = 0; e1 < edges.size(); ++e1) {
        const uint32_t i = edges[e1].src, j = edges[e1].dst;
        const Vec3 v1 = coords[i] - coords[j];
        const double n1 = v1.norm();
        for (uint32_t e2 : by_src[j]) {
            const uint32_t k = edges[e2].dst;
            const Vec3 v2 = coords[k] - coords[j];
            const double n2 = v2.norm();
            if (n1 < 1e-9 || n2 < 1e-9)
                throw GeometryError("line graph: zero-length edge at node " + std::to_string(j));
            double cosang = v1.dot(v2) / (n1 * n2);
            cosang = std::clamp(cosang, -1.0, 1.0);
            const double angle = std::acos(cosang);  // [0, pi]
            int bin = int(angle / kPi * angle_bins);
            bin = std::clamp(bin, 0, angle_bins - 1);
            out.push_back({e1, e2, uint32_t(bin)});
        }
    }
    return out;
}

namespace {

int seq_bucket(uint32_t ri, uint32_t rj, int d_seq) {
    const int d = std::abs(int(ri) - int(rj));
    return std::min(d, d_seq);
}

void fill_edge_features(ProteinGraph& g, const Protein& p, const GraphConfig& cfg) {
    const int fdim = cfg.edge_feature_dim();
    const int rel_count = cfg.relation_count();
    g.edge_features = Tensor(int64_t(g.edges.size()), fdim);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& ed = g.edges[e];
        double* row = g.edge_features.row(int64_t(e));
        const uint32_t ri = g.node_residue[ed.src], rj = g.node_residue[ed.dst];
        row[int(p.sequence[ri])] = 1.0;
        row[kResidueAlphabet + int(p.sequence[rj])] = 1.0;
        row[2 * kResidueAlphabet + int(ed.relation)] = 1.0;
        const int bucket = seq_bucket(ri, rj, cfg.seq_dist_threshold);
        row[2 * kResidueAlphabet + rel_count + bucket] = 1.0;
        row[fdim - 1] = (g.coords[ed.src] - g.coords[ed.dst]).norm();
    }
}

void finalize(ProteinGraph& g, const GraphConfig& cfg) {
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.dst != b.dst) return a.dst < b.dst;
        return a.relation < b.relation;
    });
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (const Edge& e : g.edges)
        if (e.src == e.dst) throw GeometryError("graph: self loop produced");

    g.line_graph_edges = build_line_graph(g.edges, g.coords, cfg.angle_bins);

    const uint32_t n = g.num_nodes;
    const uint32_t m = uint32_t(g.edges.size());
    const int rel_count = cfg.relation_count();
    std::vector<std::vector<uint32_t>> srcs(rel_count), dsts(rel_count);
    std::vector<uint32_t> all_dst;
    all_dst.reserve(m);
    for (const Edge& e : g.edges) {
        srcs[e.relation].push_back(e.src);
        dsts[e.relation].push_back(e.dst);
        all_dst.push_back(e.dst);
    }
    g.rel_src.clear();
    g.rel_dst.clear();
    for (int r = 0; r < rel_count; ++r) {
        g.rel_src.push_back(IndexGroups::build(srcs[r], n));
        g.rel_dst.push_back(IndexGroups::build(dsts[r], n));
    }
    g.all_dst = IndexGroups::build(all_dst, n);

    std::vector<std::vector<uint32_t>> lg_s(cfg.angle_bins), lg_d(cfg.angle_bins);
    for (const LineEdge& le : g.line_graph_edges) {
        lg_s[le.bin].push_back(le.e_src);
        lg_d[le.bin].push_back(le.e_dst);
    }
    g.lg_src.clear();
    g.lg_dst.clear();
    for (int b = 0; b < cfg.angle_bins; ++b) {
        g.lg_src.push_back(IndexGroups::build(lg_s[b], m));
        g.lg_dst.push_back(IndexGroups::build(lg_d[b], m));
    }

    // Unique directed pairs (relation collapsed) shared by the equivariant
    // heads; edge list is sorted, so uniqueness is a linear scan.
    g.pair_src.clear();
    g.pair_dst.clear();
    g.pair_dist.clear();
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (e > 0 && g.edges[e].src == g.edges[e - 1].src && g.edges[e].dst == g.edges[e - 1].dst)
            continue;
        g.pair_src.push_back(g.edges[e].src);
        g.pair_dst.push_back(g.edges[e].dst);
    }
    const size_t np = g.pair_src.size();
    g.pair_dirs = Tensor(int64_t(np), 3);
    g.pair_dist.resize(np);
    for (size_t q = 0; q < np; ++q) {
        const Vec3 d = g.coords[g.pair_src[q]] - g.coords[g.pair_dst[q]];
        const double dist = d.norm();
        if (dist < 1e-9)
            throw GeometryError("graph: coincident adjacent nodes " +
                                std::to_string(g.pair_src[q]) + "," +
                                std::to_string(g.pair_dst[q]));
        g.pair_dist[q] = dist;
        g.pair_dirs.at(int64_t(q), 0) = d.x / dist;
        g.pair_dirs.at(int64_t(q), 1) = d.y / dist;
        g.pair_dirs.at(int64_t(q), 2) = d.z / dist;
    }
    g.pair_src_groups = IndexGroups::build(g.pair_src, n);
    g.pair_dst_groups = IndexGroups::build(g.pair_dst, n);

    g.pool_groups = IndexGroups::build(g.node_residue, g.num_residues);
}

}  // namespace

ProteinGraph build_atom_graph(const Protein& p, const GraphConfig& cfg) {
    cfg.validate();
    if (cfg.level != GraphLevel::atom)
        throw ConfigError("build_atom_graph: config level is not atom");
    const uint32_t n = uint32_t(p.num_atoms());
    if (n == 0) throw DataError("build_atom_graph: empty protein");

    ProteinGraph g;
    g.level = GraphLevel::atom;
    g.num_nodes = n;
    g.num_residues = uint32_t(p.num_residues());
    g.coords = p.coords;
    g.node_residue = p.atom_to_residue;

    g.node_features = Tensor(n, cfg.node_feature_dim());
    for (uint32_t i = 0; i < n; ++i) {
        double* row = g.node_features.row(i);
        row[element_index(p.atom_names[i])] = 1.0;
        row[kElementVocab + int(p.sequence[p.atom_to_residue[i]])] = 1.0;
    }

    const double r2 = cfg.atom_radius * cfg.atom_radius;
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = i + 1; j < n; ++j) {
            const Vec3 d = p.coords[i] - p.coords[j];
            if (d.dot(d) < r2) {
                g.edges.push_back({i, j, 0});
                g.edges.push_back({j, i, 0});
            }
        }
    }

    finalize(g, cfg);
    fill_edge_features(g, p, cfg);
    return g;
}

ProteinGraph build_residue_graph(const Protein& p, const GraphConfig& cfg) {
    cfg.validate();
    if (cfg.level != GraphLevel::residue)
        throw ConfigError("build_residue_graph: config level is not residue");
    const uint32_t n = uint32_t(p.num_residues());
    if (n == 0) throw DataError("build_residue_graph: empty protein");

    ProteinGraph g;
    g.level = GraphLevel::residue;
    g.num_nodes = n;
    g.num_residues = n;
    g.coords.resize(n);
    g.node_residue.resize(n);
    for (uint32_t r = 0; r < n; ++r) {
        const auto ca = p.find_atom(r, "CA");
        if (!ca)
            throw DataError("build_residue_graph: residue " + std::to_string(r + 1) +
                            " missing CA");
        g.coords[r] = p.coords[*ca];
        g.node_residue[r] = r;
    }

    g.node_features = Tensor(n, cfg.node_feature_dim());
    for (uint32_t i = 0; i < n; ++i)
        g.node_features.at(i, int(p.sequence[i])) = 1.0;

    const int d_seq = cfg.seq_dist_threshold;
    const int d_long = cfg.long_range_cutoff;
    const uint32_t rel_radius = uint32_t(2 * d_seq);
    const uint32_t rel_knn = rel_radius + 1;

    // Sequential edges: one relation per signed offset (-d_seq..-1, 1..d_seq).
    for (uint32_t i = 0; i < n; ++i) {
        for (int off = -d_seq; off <= d_seq; ++off) {
            if (off == 0) continue;
            const int64_t j = int64_t(i) + off;
            if (j < 0 || j >= int64_t(n)) continue;
            const uint32_t rel = uint32_t(off < 0 ? off + d_seq : off + d_seq - 1);
            g.edges.push_back({i, uint32_t(j), rel});
        }
    }

    // Radius edges, filtered by the long-range cutoff.
    const double rr2 = cfg.residue_radius * cfg.residue_radius;
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = i + 1; j < n; ++j) {
            if (int(j - i) < d_long) continue;
            const Vec3 d = g.coords[i] - g.coords[j];
            if (d.dot(d) < rr2) {
                g.edges.push_back({i, j, rel_radius});
                g.edges.push_back({j, i, rel_radius});
            }
        }
    }

    // kNN edges: k nearest per node (ties broken by lower index), pair set
    // symmetrized, then the long-range cutoff applied.
    std::set<std::pair<uint32_t, uint32_t>> knn_pairs;
    for (uint32_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, uint32_t>> cand;
        cand.reserve(n - 1);
        for (uint32_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec3 d = g.coords[i] - g.coords[j];
            cand.emplace_back(d.dot(d), j);
        }
        const size_t k = std::min(size_t(cfg.knn_k), cand.size());
        std::sort(cand.begin(), cand.end());
        for (size_t t = 0; t < k; ++t) {
            const uint32_t j = cand[t].second;
            knn_pairs.insert({std::min(i, j), std::max(i, j)});
        }
    }
    for (const auto& [a, b] : knn_pairs) {
        if (int(b - a) < d_long) continue;
        g.edges.push_back({a, b, rel_knn});
        g.edges.push_back({b, a, rel_knn});
    }

    finalize(g, cfg);
    fill_edge_features(g, p, cfg);
    return g;
}

ProteinGraph build_graph(const Protein& p, const GraphConfig& cfg) {
    return cfg.level == GraphLevel::atom ? build_atom_graph(p, cfg) : build_residue_graph(p, cfg);
}

}  // namespace siamdiff
