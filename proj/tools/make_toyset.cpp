// SPDX-License-Identifier: Apache-2.0
//
// Regenerates the bundled toy dataset (data/toyset). The files are committed;
// this tool exists so they can be rebuilt from scratch.

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "conformer.hpp"
#include "pdb.hpp"
#include "toygen.hpp"

using namespace siamdiff;

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "data/toyset";
    std::filesystem::create_directories(out_dir);

    // Distinct backbone conformations so the toy structures are geometrically
    // distinguishable, not five copies of the same extended chain.
    struct Spec {
        const char* seq;
        double phi, psi;
    };
    const Spec specs[] = {
        {"GASVTLDNK", 180, 180},
        {"MKREQFY", -140, 140},
        {"AVLIGST", -70, -40},
        {"HWCDEKG", -80, 150},
        {"RQNTYSAL", -100, 60},
    };

    std::ofstream manifest(out_dir + "/manifest.txt");
    int idx = 0;
    for (const Spec& spec : specs) {
        const char* seq = spec.seq;
        const Protein p = build_peptide(seq, spec.phi, spec.psi);
        const ClashChecker checker(p);
        const auto [dmin, pair] = checker.min_nonbonded(p.coords);
        char name[32];
        std::snprintf(name, sizeof name, "toy_%02d.pdb", ++idx);
        std::ofstream f(out_dir + "/" + name);
        f << write_pdb_subset(p);
        manifest << name << "\n";
        std::printf("%s  %-10s n_r=%zu n_a=%zu min_nonbonded=%.3f A\n", name, seq,
                    p.num_residues(), p.num_atoms(), dmin);
        if (dmin < 2.0) {
            std::fprintf(stderr, "generated structure is too tight: %s\n", name);
            return 1;
        }
    }
    return 0;
}
