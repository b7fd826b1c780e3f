// SPDX-License-Identifier: Apache-2.0
#include "conformer.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "error.hpp"

namespace siamdiff {

ClashChecker::ClashChecker(const Protein& reference, double bond_cutoff) {
    n_ = reference.num_atoms();
    std::vector<std::vector<uint32_t>> adj(n_);
    for (const auto& [a, b] : detect_bonds(reference, bond_cutoff)) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    excluded_.assign(n_, {});
    // Graph distance <= 2: direct bonds and angle partners.
    for (uint32_t i = 0; i < n_; ++i) {
        std::vector<uint32_t> reach;
        for (uint32_t j : adj[i]) {
            reach.push_back(j);
            for (uint32_t k : adj[j])
                if (k != i) reach.push_back(k);
        }
        std::sort(reach.begin(), reach.end());
        reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
        for (uint32_t j : reach)
            if (j > i) excluded_[i].push_back(j);
    }
}

std::pair<double, std::pair<uint32_t, uint32_t>> ClashChecker::min_nonbonded(
    const std::vector<Vec3>& coords) const {
    if (coords.size() != n_) throw ShapeError("ClashChecker: coordinate count changed");
    double best = 1e300;
    std::pair<uint32_t, uint32_t> arg{0, 0};
    for (uint32_t i = 0; i < n_; ++i) {
        const auto& excl = excluded_[i];
        size_t cursor = 0;
        for (uint32_t j = i + 1; j < n_; ++j) {
            while (cursor < excl.size() && excl[cursor] < j) ++cursor;
            if (cursor < excl.size() && excl[cursor] == j) continue;
            const Vec3 d = coords[i] - coords[j];
            const double dist2 = d.dot(d);
            if (dist2 < best * best) {
                best = std::sqrt(dist2);
                arg = {i, j};
            }
        }
    }
    return {best, arg};
}

Protein simulate_conformer(const Protein& p, GraphLevel level, const ConformerConfig& cfg,
                           Rng& rng) {
    if (level == GraphLevel::residue) return simulate_conformer(p, level, cfg, rng, ClashChecker(p));
    ClashChecker checker(p);
    return simulate_conformer(p, level, cfg, rng, checker);
}

Protein simulate_conformer(const Protein& p, GraphLevel level, const ConformerConfig& cfg,
                           Rng& rng, const ClashChecker& checker) {
    if (!(cfg.torsion_sigma > 0) || !(cfg.residue_gauss_sigma > 0))
        throw InvalidParameterError("simulate_conformer: sigmas must be > 0");

    if (level == GraphLevel::residue) {
        if (p.num_atoms() != p.num_residues())
            throw InvalidParameterError("simulate_conformer: residue level expects CA-only protein");
        Protein out = p;
        for (auto& c : out.coords) {
            c.x += cfg.residue_gauss_sigma * rng.gaussian();
            c.y += cfg.residue_gauss_sigma * rng.gaussian();
            c.z += cfg.residue_gauss_sigma * rng.gaussian();
        }
        return out;
    }

    if (p.chi_topology.size() != p.num_residues())
        throw InvalidParameterError("simulate_conformer: protein lacks chi topology");

    double last_dist = 0;
    std::pair<uint32_t, uint32_t> last_pair{0, 0};
    for (int attempt = 0; attempt <= cfg.clash_max_retries; ++attempt) {
        const auto eps = sample_wrapped_normal(cfg.torsion_sigma, p.num_residues() * kMaxChi, rng);
        Protein cand = perturb_torsional(p, eps);
        const auto [dmin, pair] = checker.min_nonbonded(cand.coords);
        if (dmin >= cfg.clash_min_dist) return cand;
        last_dist = dmin;
        last_pair = pair;
    }
    throw GeometryError("simulate_conformer: clash retries exhausted; closest pair (" +
                        std::to_string(last_pair.first) + "," + std::to_string(last_pair.second) +
                        ") at " + std::to_string(last_dist) + " A");
}

}  // namespace siamdiff
