// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "protein.hpp"

namespace siamdiff {

struct PdbOptions {
    bool strip_hydrogens = false;
};

// Parses fixed-column ATOM records (PDB v3.3 subset). HETATM and all other
// record types are skipped; residues come out in file order with multi-chain
// files concatenated. "UNK" is accepted as the MASK sentinel so diffusion
// dumps round-trip. Throws DataError with a line number on malformed input.
Protein parse_pdb_subset(const std::string& text, const PdbOptions& opts = {});

Protein load_pdb_file(const std::string& path, const PdbOptions& opts = {});

// Fixed-column ATOM writer; masked residues are emitted as "UNK".
std::string write_pdb_subset(const Protein& p);

}  // namespace siamdiff
