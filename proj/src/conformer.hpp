// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "graph.hpp"
#include "protein.hpp"
#include "rng.hpp"

namespace siamdiff {

struct ConformerConfig {
    double torsion_sigma = 0.1 * 3.14159265358979323846;  // radians, atom level
    double residue_gauss_sigma = 0.3;                     // Angstrom, residue level
    double clash_min_dist = 1.2;                          // Angstrom
    int clash_max_retries = 20;
};

// Precomputed clash-exclusion sets: pairs within two covalent bonds of each
// other (their distances are fixed or near-fixed under torsional rotation).
class ClashChecker {
   public:
    explicit ClashChecker(const Protein& reference, double bond_cutoff = 1.9);

    // Smallest distance over non-excluded pairs, with the pair itself.
    std::pair<double, std::pair<uint32_t, uint32_t>> min_nonbonded(
        const std::vector<Vec3>& coords) const;

   private:
    size_t n_ = 0;
    std::vector<std::vector<uint32_t>> excluded_;  // per atom, sorted partners j > i
};

// Atom level: wrapped-normal torsional perturbation of the side chains with
// clash rejection. Residue level: independent Gaussian displacement of the CA
// coordinates. The sequence is never changed.
Protein simulate_conformer(const Protein& p, GraphLevel level, const ConformerConfig& cfg,
                           Rng& rng);
Protein simulate_conformer(const Protein& p, GraphLevel level, const ConformerConfig& cfg,
                           Rng& rng, const ClashChecker& checker);

}  // namespace siamdiff
