// SPDX-License-Identifier: Apache-2.0
#include "toygen.hpp"

#include <cmath>
#include <map>

#include "error.hpp"

namespace siamdiff {

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

struct ZEntry {
    const char* name;
    const char* a;
    const char* b;
    const char* c;
    double bond;
    double theta_deg;
    double phi_deg;
};

// Heavy side-chain atoms from standard internal coordinates; frames reference
// atoms of the same residue. Ring closures come out approximate but within
// covalent range, which is all the fixtures need.
const std::map<ResidueType, std::vector<ZEntry>>& side_chain_table() {
    static const std::map<ResidueType, std::vector<ZEntry>> table = {
        {ResidueType::ALA, {}},
        {ResidueType::ARG,
         {{"CG", "N", "CA", "CB", 1.52, 114.1, 180},
          {"CD", "CA", "CB", "CG", 1.52, 111.3, 180},
          {"NE", "CB", "CG", "CD", 1.46, 112.0, 180},
          {"CZ", "CG", "CD", "NE", 1.33, 124.2, 180},
          {"NH1", "CD", "NE", "CZ", 1.33, 120.0, 0},
          {"NH2", "CD", "NE", "CZ", 1.33, 120.0, 180}}},
        {ResidueType::ASN,
         {{"CG", "N", "CA", "CB", 1.52, 112.6, 180},
          {"OD1", "CA", "CB", "CG", 1.23, 120.8, -90},
          {"ND2", "CA", "CB", "CG", 1.33, 116.4, 90}}},
        {ResidueType::ASP,
         {{"CG", "N", "CA", "CB", 1.52, 112.6, 180},
          {"OD1", "CA", "CB", "CG", 1.25, 118.5, -90},
          {"OD2", "CA", "CB", "CG", 1.25, 118.5, 90}}},
        {ResidueType::CYS, {{"SG", "N", "CA", "CB", 1.81, 113.8, 180}}},
        {ResidueType::GLN,
         {{"CG", "N", "CA", "CB", 1.52, 114.1, 180},
          {"CD", "CA", "CB", "CG", 1.52, 112.6, 180},
          {"OE1", "CB", "CG", "CD", 1.23, 120.8, -90},
          {"NE2", "CB", "CG", "CD", 1.33, 116.4, 90}}},
        {ResidueType::GLU,
         {{"CG", "N", "CA", "CB", 1.52, 114.1, 180},
          {"CD", "CA", "CB", "CG", 1.52, 112.6, 180},
          {"OE1", "CB", "CG", "CD", 1.25, 118.5, -90},
          {"OE2", "CB", "CG", "CD", 1.25, 118.5, 90}}},
        {ResidueType::GLY, {}},
        {ResidueType::HIS,
         {{"CG", "N", "CA", "CB", 1.49, 113.8, 180},
          {"ND1", "CA", "CB", "CG", 1.38, 122.7, -90},
          {"CD2", "CA", "CB", "CG", 1.35, 129.7, 90},
          {"CE1", "CB", "CG", "ND1", 1.32, 109.0, 180},
          {"NE2", "CB", "CG", "CD2", 1.37, 107.0, 180}}},
        {ResidueType::ILE,
         {{"CG1", "N", "CA", "CB", 1.53, 110.4, 180},
          {"CG2", "N", "CA", "CB", 1.53, 110.5, 60},
          {"CD1", "CA", "CB", "CG1", 1.52, 113.8, 180}}},
        {ResidueType::LEU,
         {{"CG", "N", "CA", "CB", 1.53, 116.3, 180},
          {"CD1", "CA", "CB", "CG", 1.52, 110.5, 180},
          {"CD2", "CA", "CB", "CG", 1.52, 110.5, 60}}},
        {ResidueType::LYS,
         {{"CG", "N", "CA", "CB", 1.52, 114.1, 180},
          {"CD", "CA", "CB", "CG", 1.52, 111.3, 180},
          {"CE", "CB", "CG", "CD", 1.52, 111.3, 180},
          {"NZ", "CG", "CD", "CE", 1.47, 112.0, 180}}},
        {ResidueType::MET,
         {{"CG", "N", "CA", "CB", 1.52, 114.1, 180},
          {"SD", "CA", "CB", "CG", 1.81, 112.7, 180},
          {"CE", "CB", "CG", "SD", 1.79, 100.9, 180}}},
        {ResidueType::PHE,
         {{"CG", "N", "CA", "CB", 1.50, 113.8, 180},
          {"CD1", "CA", "CB", "CG", 1.39, 120.8, -90},
          {"CD2", "CA", "CB", "CG", 1.39, 120.8, 90},
          {"CE1", "CB", "CG", "CD1", 1.39, 120.0, 180},
          {"CE2", "CB", "CG", "CD2", 1.39, 120.0, 180},
          {"CZ", "CG", "CD1", "CE1", 1.39, 120.0, 0}}},
        {ResidueType::PRO,
         {{"CG", "N", "CA", "CB", 1.50, 104.5, -30},
          {"CD", "CA", "CB", "CG", 1.51, 106.1, 35}}},
        {ResidueType::SER, {{"OG", "N", "CA", "CB", 1.42, 110.8, 180}}},
        {ResidueType::THR,
         {{"OG1", "N", "CA", "CB", 1.43, 109.6, 180},
          {"CG2", "N", "CA", "CB", 1.53, 110.5, 60}}},
        {ResidueType::TRP,
         {{"CG", "N", "CA", "CB", 1.50, 113.6, 180},
          {"CD1", "CA", "CB", "CG", 1.37, 126.9, -90},
          {"CD2", "CA", "CB", "CG", 1.43, 126.7, 90},
          {"NE1", "CB", "CG", "CD1", 1.38, 110.2, 180},
          {"CE2", "CB", "CG", "CD2", 1.40, 107.2, 180},
          {"CE3", "CB", "CG", "CD2", 1.40, 133.9, 0},
          {"CZ2", "CG", "CD2", "CE2", 1.40, 122.4, 180},
          {"CZ3", "CG", "CD2", "CE3", 1.39, 118.7, 180},
          {"CH2", "CD2", "CE2", "CZ2", 1.37, 117.5, 0}}},
        {ResidueType::TYR,
         {{"CG", "N", "CA", "CB", 1.51, 113.8, 180},
          {"CD1", "CA", "CB", "CG", 1.39, 120.8, -90},
          {"CD2", "CA", "CB", "CG", 1.39, 120.8, 90},
          {"CE1", "CB", "CG", "CD1", 1.39, 120.0, 180},
          {"CE2", "CB", "CG", "CD2", 1.39, 120.0, 180},
          {"CZ", "CG", "CD1", "CE1", 1.39, 120.0, 0},
          {"OH", "CD1", "CE1", "CZ", 1.38, 120.0, 180}}},
        {ResidueType::VAL,
         {{"CG1", "N", "CA", "CB", 1.53, 110.4, 180},
          {"CG2", "N", "CA", "CB", 1.53, 110.5, 60}}},
    };
    return table;
}

}  // namespace

Protein build_peptide(const std::vector<ResidueType>& seq, double phi_deg, double psi_deg) {
    if (seq.empty()) throw InvalidParameterError("build_peptide: empty sequence");
    Protein p;
    p.sequence = seq;

    std::map<std::string, Vec3> prev;  // backbone frame of the previous residue
    for (size_t r = 0; r < seq.size(); ++r) {
        if (seq[r] == ResidueType::MASK)
            throw InvalidParameterError("build_peptide: cannot build MASK residue");
        std::map<std::string, Vec3> atoms;
        if (r == 0) {
            atoms["N"] = {0, 0, 0};
            atoms["CA"] = {1.458, 0, 0};
            atoms["C"] = Vec3{1.458, 0, 0} +
                         Vec3{1.525 * std::cos(69.0 * kDeg), 1.525 * std::sin(69.0 * kDeg), 0};
        } else {
            // Uniform backbone dihedrals; omega stays trans.
            atoms["N"] = place_from_internal(prev["N"], prev["CA"], prev["C"], 1.329, 116.2 * kDeg,
                                             psi_deg * kDeg);
            atoms["CA"] = place_from_internal(prev["CA"], prev["C"], atoms["N"], 1.458,
                                              121.7 * kDeg, 180 * kDeg);
            atoms["C"] = place_from_internal(prev["C"], atoms["N"], atoms["CA"], 1.525,
                                             111.0 * kDeg, phi_deg * kDeg);
        }
        atoms["O"] = place_from_internal(atoms["N"], atoms["CA"], atoms["C"], 1.231, 120.5 * kDeg,
                                         (psi_deg + 180.0) * kDeg);

        std::vector<std::string> order = {"N", "CA", "C", "O"};
        if (seq[r] != ResidueType::GLY) {
            const double theta = seq[r] == ResidueType::PRO ? 103.0 : 110.4;
            atoms["CB"] = place_from_internal(atoms["C"], atoms["N"], atoms["CA"], 1.53,
                                              theta * kDeg, -122.55 * kDeg);
            order.push_back("CB");
        }
        for (const ZEntry& z : side_chain_table().at(seq[r])) {
            atoms[z.name] = place_from_internal(atoms.at(z.a), atoms.at(z.b), atoms.at(z.c),
                                                z.bond, z.theta_deg * kDeg, z.phi_deg * kDeg);
            order.emplace_back(z.name);
        }

        const uint32_t lo = uint32_t(p.coords.size());
        for (const std::string& name : order) {
            p.coords.push_back(atoms.at(name));
            p.atom_names.push_back(name);
            p.atom_to_residue.push_back(uint32_t(r));
        }
        p.residue_atom_spans.emplace_back(lo, uint32_t(p.coords.size()));
        prev = {{"N", atoms["N"]}, {"CA", atoms["CA"]}, {"C", atoms["C"]}};
    }
    p.chi_topology = build_chi_topology(p);
    p.validate();
    return p;
}

Protein build_peptide(const std::string& one_letter, double phi_deg, double psi_deg) {
    std::vector<ResidueType> seq;
    for (char c : one_letter) {
        if (std::isspace(uint8_t(c))) continue;
        bool found = false;
        for (int i = 0; i < kNumResidueTypes; ++i) {
            if (residue_letter(ResidueType(i)) == std::toupper(uint8_t(c))) {
                seq.push_back(ResidueType(i));
                found = true;
                break;
            }
        }
        if (!found)
            throw InvalidParameterError(std::string("build_peptide: unknown residue letter '") +
                                        c + "'");
    }
    return build_peptide(seq, phi_deg, psi_deg);
}

}  // namespace siamdiff
