// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "conformer.hpp"
#include "error.hpp"
#include "toygen.hpp"

using namespace siamdiff;

TEST_CASE("simulate_conformer: sigma -> 0 gives vanishing RMSD") {
    const Protein p = build_peptide("KVSE");
    ConformerConfig cfg;
    cfg.torsion_sigma = 1e-9;
    Rng rng(1);
    const Protein c = simulate_conformer(p, GraphLevel::atom, cfg, rng);
    CHECK(rmsd(p.coords, c.coords) < 1e-7);
}

TEST_CASE("simulate_conformer: all-glycine protein is untouched at atom level") {
    const Protein p = build_peptide("GGGG");
    ConformerConfig cfg;
    cfg.torsion_sigma = 2.0;
    Rng rng(2);
    const Protein c = simulate_conformer(p, GraphLevel::atom, cfg, rng);
    for (size_t i = 0; i < p.num_atoms(); ++i) CHECK((p.coords[i] - c.coords[i]).norm() == 0.0);
    CHECK(c.sequence == p.sequence);
}

TEST_CASE("simulate_conformer: residue level adds gaussian displacement, keeps sequence") {
    const Protein p = reduce_to_ca(build_peptide("KVSE"));
    ConformerConfig cfg;
    Rng rng(3);
    const Protein c = simulate_conformer(p, GraphLevel::residue, cfg, rng);
    CHECK(c.sequence == p.sequence);
    CHECK(rmsd(p.coords, c.coords) > 0.0);
    // sigma = 0.3 per coordinate: rmsd should be around sqrt(3)*0.3, loosely.
    CHECK(rmsd(p.coords, c.coords) < 3.0);

    // Residue level on a full-atom protein is a usage error.
    const Protein full = build_peptide("KVSE");
    CHECK_THROWS_AS(simulate_conformer(full, GraphLevel::residue, cfg, rng),
                    InvalidParameterError);
}

TEST_CASE("simulate_conformer: clash rejection reports the closest pair on exhaustion") {
    const Protein p = build_peptide("KVSE");
    ConformerConfig cfg;
    cfg.clash_min_dist = 100.0;  // impossible to satisfy
    cfg.clash_max_retries = 3;
    Rng rng(4);
    CHECK_THROWS_AS(simulate_conformer(p, GraphLevel::atom, cfg, rng), GeometryError);
}

TEST_CASE("simulate_conformer: conformers stay clash-free with defaults") {
    const Protein p = build_peptide("MKREQFY");
    const ClashChecker checker(p);
    ConformerConfig cfg;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const Protein c = simulate_conformer(p, GraphLevel::atom, cfg, rng, checker);
        CHECK(checker.min_nonbonded(c.coords).first >= cfg.clash_min_dist);
    }
}
