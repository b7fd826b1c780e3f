// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geom.hpp"

namespace siamdiff {

// Residue type codes. 0..19 are the standard amino acids, 20 is the MASK
// sentinel used by the absorbing sequence diffusion.
enum class ResidueType : uint8_t {
    ALA = 0, ARG, ASN, ASP, CYS, GLN, GLU, GLY, HIS, ILE,
    LEU, LYS, MET, PHE, PRO, SER, THR, TRP, TYR, VAL,
    MASK = 20,
};

constexpr int kNumResidueTypes = 20;
constexpr int kMaskCode = 20;
constexpr int kResidueAlphabet = 21;  // 20 types + MASK
constexpr int kMaxChi = 4;

// Three-letter PDB name <-> code. Unknown names return nullopt; the MASK
// sentinel round-trips as "UNK".
std::optional<ResidueType> residue_from_name(const std::string& name3);
const char* residue_name(ResidueType t);
char residue_letter(ResidueType t);  // one-letter code, 'X' for MASK

// One rotatable side-chain bond: rotating `angle` about axis_a->axis_b moves
// every atom in `dependents` (indices into the owning protein's atom array).
struct ChiBond {
    uint32_t axis_a = 0;
    uint32_t axis_b = 0;
    std::vector<uint32_t> dependents;
};

struct ResidueChi {
    std::vector<ChiBond> bonds;  // chi1..chi4 order, may be empty
};

struct Protein {
    std::vector<ResidueType> sequence;            // length n_r
    std::vector<Vec3> coords;                     // length n_a
    std::vector<std::string> atom_names;          // length n_a
    std::vector<uint32_t> atom_to_residue;        // length n_a
    std::vector<std::pair<uint32_t, uint32_t>> residue_atom_spans;  // half-open, length n_r
    std::vector<ResidueChi> chi_topology;         // length n_r (may be empty if unbuilt)

    size_t num_residues() const { return sequence.size(); }
    size_t num_atoms() const { return coords.size(); }

    // Index of a named atom within residue r, or nullopt.
    std::optional<uint32_t> find_atom(uint32_t residue, const std::string& name) const;

    // Enforces the domain invariants (span partition, atom ownership, chi
    // nesting/disjointness, finite coordinates). Throws DataError.
    void validate() const;
};

// Standard chi1..chi4 definitions for the 20 residue types, resolved against
// the atoms actually present. Proline gets no rotatable bonds: its side chain
// closes back onto the backbone nitrogen, so a rigid rotation would stretch
// that ring bond.
std::vector<ResidueChi> build_chi_topology(const Protein& p);

enum class ChiOrder { proximal_first, distal_first };

// Rotates each residue's side chain by eps[i*4+k] (radians) about its chi_k
// axis. eps must have num_residues()*4 entries. Backbone atoms and residues
// without the corresponding chi are untouched; the sequence is unchanged.
Protein perturb_torsional(const Protein& p, std::span<const double> eps,
                          ChiOrder order = ChiOrder::proximal_first);

// Drops every atom except the alpha carbons (residue-level representation).
Protein reduce_to_ca(const Protein& p);

// Keeps the first max_residues residues (prefix truncation).
Protein truncate_protein(const Protein& p, size_t max_residues);

// True if the stripped atom name denotes hydrogen/deuterium.
bool is_hydrogen_name(const std::string& atom_name);

// Bonded-pair detection by distance (heavy-atom covalent cutoff). Used by the
// conformer clash check to decide which pairs count as non-bonded.
std::vector<std::pair<uint32_t, uint32_t>> detect_bonds(const Protein& p,
                                                        double cutoff = 1.9);

}  // namespace siamdiff
