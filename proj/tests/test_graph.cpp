// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "error.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "toygen.hpp"

using namespace siamdiff;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Minimal protein with explicit coordinates, all glycine backbones collapsed
// to single pseudo-atoms (name CA so residue graphs work too).
Protein point_protein(const std::vector<Vec3>& pts) {
    Protein p;
    for (size_t i = 0; i < pts.size(); ++i) {
        p.sequence.push_back(ResidueType::GLY);
        p.coords.push_back(pts[i]);
        p.atom_names.emplace_back("CA");
        p.atom_to_residue.push_back(uint32_t(i));
        p.residue_atom_spans.emplace_back(uint32_t(i), uint32_t(i + 1));
    }
    p.chi_topology.assign(pts.size(), {});
    return p;
}

size_t count_relation(const ProteinGraph& g, uint32_t rel) {
    size_t n = 0;
    for (const Edge& e : g.edges) n += e.relation == rel;
    return n;
}

}  // namespace

TEST_CASE("atom graph: radius threshold is strict") {
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    const Protein two = point_protein({{0, 0, 0}, {4.6, 0, 0}});
    CHECK(build_atom_graph(two, cfg).num_edges() == 0);

    const Protein close = point_protein({{0, 0, 0}, {4.4, 0, 0}});
    CHECK(build_atom_graph(close, cfg).num_edges() == 2);
}

TEST_CASE("atom graph: collinear 0/3/6 chain with 4.5 radius") {
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    const Protein p = point_protein({{0, 0, 0}, {3, 0, 0}, {6, 0, 0}});
    const ProteinGraph g = build_atom_graph(p, cfg);
    std::set<std::pair<uint32_t, uint32_t>> pairs;
    for (const Edge& e : g.edges) pairs.insert({e.src, e.dst});
    CHECK(pairs == std::set<std::pair<uint32_t, uint32_t>>{{0, 1}, {1, 0}, {1, 2}, {2, 1}});

    // Brute-force all-pairs oracle.
    for (uint32_t i = 0; i < 3; ++i)
        for (uint32_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            const bool want = (p.coords[i] - p.coords[j]).norm() < cfg.atom_radius;
            CHECK(pairs.count({i, j}) == size_t(want));
        }
}

TEST_CASE("atom graph features: one-hot atom/residue types plus distance") {
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    const Protein p = build_peptide("GA");
    const ProteinGraph g = build_atom_graph(p, cfg);
    CHECK(g.node_features.cols == cfg.node_feature_dim());
    CHECK(g.edge_features.cols == cfg.edge_feature_dim());
    // Every node feature row has exactly two ones (element + residue type).
    for (int64_t i = 0; i < g.node_features.rows; ++i) {
        double sum = 0;
        for (int64_t c = 0; c < g.node_features.cols; ++c) sum += g.node_features.at(i, c);
        CHECK(sum == 2.0);
    }
    // Edge feature tail carries the true distance.
    for (size_t e = 0; e < g.num_edges(); ++e) {
        const double want = (g.coords[g.edges[e].src] - g.coords[g.edges[e].dst]).norm();
        CHECK(g.edge_features.at(int64_t(e), g.edge_features.cols - 1) ==
              doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("residue graph: sequential relations per signed offset") {
    GraphConfig cfg;
    cfg.level = GraphLevel::residue;
    const Protein p = point_protein({{0, 0, 0}, {3.8, 0, 0}, {7.6, 0, 0}, {11.4, 0, 0}});
    const ProteinGraph g = build_residue_graph(p, cfg);

    // Enumerate-offsets oracle: every |i-j| <= 3 pair appears with its own
    // relation id, offsets mapped as -3,-2,-1,+1,+2,+3 -> 0,1,2,3,4,5.
    for (uint32_t i = 0; i < 4; ++i) {
        for (uint32_t j = 0; j < 4; ++j) {
            if (i == j || std::abs(int(i) - int(j)) > cfg.seq_dist_threshold) continue;
            const int off = int(j) - int(i);
            const uint32_t rel = uint32_t(off < 0 ? off + 3 : off + 2);
            bool found = false;
            for (const Edge& e : g.edges)
                found = found || (e.src == i && e.dst == j && e.relation == rel);
            CHECK(found);
        }
    }
}

TEST_CASE("residue graph: long-range cutoff removes short radius/knn edges") {
    GraphConfig cfg;
    cfg.level = GraphLevel::residue;
    // Residues 1 and 3 are 7.6 A apart (< 10) but |i-j| = 2 < d_long = 5.
    const Protein p = point_protein({{0, 0, 0}, {3.8, 0, 0}, {7.6, 0, 0}, {11.4, 0, 0}});
    const ProteinGraph g = build_residue_graph(p, cfg);
    CHECK(count_relation(g, uint32_t(2 * cfg.seq_dist_threshold)) == 0);      // radius
    CHECK(count_relation(g, uint32_t(2 * cfg.seq_dist_threshold + 1)) == 0);  // knn

    // With a shorter cutoff the radius edges appear.
    cfg.long_range_cutoff = 2;
    const ProteinGraph g2 = build_residue_graph(p, cfg);
    CHECK(count_relation(g2, uint32_t(2 * cfg.seq_dist_threshold)) > 0);
}

TEST_CASE("residue graph: single residue, and missing CA errors") {
    GraphConfig cfg;
    cfg.level = GraphLevel::residue;
    const ProteinGraph g = build_residue_graph(point_protein({{0, 0, 0}}), cfg);
    CHECK(g.num_nodes == 1);
    CHECK(g.num_edges() == 0);
    CHECK(g.line_graph_edges.empty());

    Protein bad = point_protein({{0, 0, 0}, {5, 0, 0}});
    bad.atom_names[1] = "CB";
    CHECK_THROWS_AS(build_residue_graph(bad, cfg), DataError);
}

TEST_CASE("knn ties break toward the lower node index") {
    GraphConfig cfg;
    cfg.level = GraphLevel::residue;
    cfg.knn_k = 2;
    cfg.long_range_cutoff = 0;
    cfg.residue_radius = 0.5;  // no radius edges
    cfg.seq_dist_threshold = 1;
    // Node 0 equidistant from 1,2,3 (all at distance 10 in a plane).
    const Protein p = point_protein({{0, 0, 0}, {10, 0, 0}, {-10, 0, 0}, {0, 10, 0}});
    const ProteinGraph g = build_residue_graph(p, cfg);
    const uint32_t knn_rel = uint32_t(2 * cfg.seq_dist_threshold + 1);
    // 0's two nearest under tie-break are 1 and 2, never 3 via node 0's list;
    // but 3's own list includes 0, so the {0,3} pair still appears. Check the
    // per-node selection directly: pair {0,1} and {0,2} must exist.
    std::set<std::pair<uint32_t, uint32_t>> kp;
    for (const Edge& e : g.edges)
        if (e.relation == knn_rel) kp.insert({e.src, e.dst});
    CHECK(kp.count({0, 1}) == 1);
    CHECK(kp.count({0, 2}) == 1);
    CHECK(kp.count({1, 0}) == 1);
}

TEST_CASE("line graph: right angle and collinear binning") {
    // Directed path edges around node 1: (0->1, 1->2) forming a right angle.
    const std::vector<Vec3> pts = {{1, 0, 0}, {0, 0, 0}, {0, 1, 0}};
    std::vector<Edge> edges = {{0, 1, 0}, {1, 2, 0}};
    auto lg = build_line_graph(edges, pts, 8);
    REQUIRE(lg.size() == 1);
    // angle(r0 - r1, r2 - r1) = pi/2 -> bin 4 of 8.
    CHECK(lg[0].e_src == 0);
    CHECK(lg[0].e_dst == 1);
    CHECK(lg[0].bin == 4);

    // Collinear triple: angle pi clamps into the last bin.
    const std::vector<Vec3> line = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    auto lg2 = build_line_graph(edges, line, 8);
    REQUIRE(lg2.size() == 1);
    CHECK(lg2[0].bin == 7);

    // A single directed edge has no successor.
    std::vector<Edge> one = {{0, 1, 0}};
    CHECK(build_line_graph(one, pts, 8).empty());
}

TEST_CASE("graph construction is rigid-transform invariant") {
    GraphConfig acfg;
    acfg.level = GraphLevel::atom;
    GraphConfig rcfg;
    rcfg.level = GraphLevel::residue;
    Rng rng(515);
    const Protein base = build_peptide("KVSTDE");
    const ProteinGraph ga = build_atom_graph(base, acfg);
    const ProteinGraph gr = build_residue_graph(base, rcfg);
    for (int rep = 0; rep < 100; ++rep) {
        const RigidTransform g = RigidTransform::random(rng);
        Protein moved = base;
        g.apply_in_place(moved.coords);
        const ProteinGraph ga2 = build_atom_graph(moved, acfg);
        const ProteinGraph gr2 = build_residue_graph(moved, rcfg);
        CHECK(ga2.edges == ga.edges);
        CHECK(gr2.edges == gr.edges);
        CHECK(max_abs_diff(ga2.node_features, ga.node_features) == 0.0);
        CHECK(max_abs_diff(ga2.edge_features, ga.edge_features) < 1e-9);
        CHECK(max_abs_diff(gr2.edge_features, gr.edge_features) < 1e-9);
        REQUIRE(ga2.line_graph_edges.size() == ga.line_graph_edges.size());
        for (size_t i = 0; i < ga.line_graph_edges.size(); ++i)
            CHECK(ga2.line_graph_edges[i].bin == ga.line_graph_edges[i].bin);
    }
}

TEST_CASE("graph determinism: identical inputs give identical sorted edges") {
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    const Protein p = build_peptide("KVS");
    const ProteinGraph a = build_atom_graph(p, cfg);
    const ProteinGraph b = build_atom_graph(p, cfg);
    CHECK(a.edges == b.edges);
    for (size_t e = 1; e < a.edges.size(); ++e) {
        const Edge &x = a.edges[e - 1], &y = a.edges[e];
        CHECK((x.src < y.src || (x.src == y.src && x.dst < y.dst) ||
               (x.src == y.src && x.dst == y.dst && x.relation < y.relation)));
    }
}

TEST_CASE("coincident adjacent nodes raise a geometry error") {
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    const Protein p = point_protein({{0, 0, 0}, {0, 0, 0}});
    CHECK_THROWS_AS(build_atom_graph(p, cfg), GeometryError);
}
