// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "protein.hpp"

namespace siamdiff {

// Builds a heavy-atom peptide from ideal internal coordinates with uniform
// backbone dihedrals (default: extended). Used to generate the bundled toy
// dataset and test fixtures.
Protein build_peptide(const std::vector<ResidueType>& seq, double phi_deg = 180.0,
                      double psi_deg = 180.0);
Protein build_peptide(const std::string& one_letter, double phi_deg = 180.0,
                      double psi_deg = 180.0);

}  // namespace siamdiff
