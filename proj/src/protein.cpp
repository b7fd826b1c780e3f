// SPDX-License-Identifier: Apache-2.0
#include "protein.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "error.hpp"

namespace siamdiff {

namespace {

constexpr const char* kNames3[21] = {"ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU",
                                     "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE",
                                     "PRO", "SER", "THR", "TRP", "TYR", "VAL", "UNK"};
constexpr const char kLetters[22] = "ARNDCQEGHILKMFPSTWYVX";

// chi_k is described by its axis atom pair; the dependent set is every atom
// named at or beyond the distal axis atom in `chain` below.
struct ChiDef {
    const char* axis_a;
    const char* axis_b;
};

struct ResidueChiDefs {
    ResidueType type;
    std::vector<ChiDef> chis;
    // Side-chain atoms ordered proximal to distal; dependents of chi_k are the
    // atoms strictly beyond axis_b in bond topology, listed explicitly here.
    std::vector<std::vector<const char*>> dependents;
};

const std::vector<ResidueChiDefs>& chi_defs() {
    static const std::vector<ResidueChiDefs> defs = {
        {ResidueType::ARG,
         {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "NE"}},
         {{"CG", "CD", "NE", "CZ", "NH1", "NH2"},
          {"CD", "NE", "CZ", "NH1", "NH2"},
          {"NE", "CZ", "NH1", "NH2"},
          {"CZ", "NH1", "NH2"}}},
        {ResidueType::ASN, {{"CA", "CB"}, {"CB", "CG"}}, {{"CG", "OD1", "ND2"}, {"OD1", "ND2"}}},
        {ResidueType::ASP, {{"CA", "CB"}, {"CB", "CG"}}, {{"CG", "OD1", "OD2"}, {"OD1", "OD2"}}},
        {ResidueType::CYS, {{"CA", "CB"}}, {{"SG"}}},
        {ResidueType::GLN,
         {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}},
         {{"CG", "CD", "OE1", "NE2"}, {"CD", "OE1", "NE2"}, {"OE1", "NE2"}}},
        {ResidueType::GLU,
         {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}},
         {{"CG", "CD", "OE1", "OE2"}, {"CD", "OE1", "OE2"}, {"OE1", "OE2"}}},
        {ResidueType::HIS,
         {{"CA", "CB"}, {"CB", "CG"}},
         {{"CG", "ND1", "CD2", "CE1", "NE2"}, {"ND1", "CD2", "CE1", "NE2"}}},
        {ResidueType::ILE, {{"CA", "CB"}, {"CB", "CG1"}}, {{"CG1", "CG2", "CD1"}, {"CD1"}}},
        {ResidueType::LEU, {{"CA", "CB"}, {"CB", "CG"}}, {{"CG", "CD1", "CD2"}, {"CD1", "CD2"}}},
        {ResidueType::LYS,
         {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "CE"}},
         {{"CG", "CD", "CE", "NZ"}, {"CD", "CE", "NZ"}, {"CE", "NZ"}, {"NZ"}}},
        {ResidueType::MET,
         {{"CA", "CB"}, {"CB", "CG"}, {"CG", "SD"}},
         {{"CG", "SD", "CE"}, {"SD", "CE"}, {"CE"}}},
        {ResidueType::PHE,
         {{"CA", "CB"}, {"CB", "CG"}},
         {{"CG", "CD1", "CD2", "CE1", "CE2", "CZ"}, {"CD1", "CD2", "CE1", "CE2", "CZ"}}},
        {ResidueType::SER, {{"CA", "CB"}}, {{"OG"}}},
        {ResidueType::THR, {{"CA", "CB"}}, {{"OG1", "CG2"}}},
        {ResidueType::TRP,
         {{"CA", "CB"}, {"CB", "CG"}},
         {{"CG", "CD1", "CD2", "NE1", "CE2", "CE3", "CZ2", "CZ3", "CH2"},
          {"CD1", "CD2", "NE1", "CE2", "CE3", "CZ2", "CZ3", "CH2"}}},
        {ResidueType::TYR,
         {{"CA", "CB"}, {"CB", "CG"}},
         {{"CG", "CD1", "CD2", "CE1", "CE2", "CZ", "OH"},
          {"CD1", "CD2", "CE1", "CE2", "CZ", "OH"}}},
        {ResidueType::VAL, {{"CA", "CB"}}, {{"CG1", "CG2"}}},
        // ALA, GLY, PRO, MASK: no rotatable side-chain bonds.
    };
    return defs;
}

}  // namespace

std::optional<ResidueType> residue_from_name(const std::string& name3) {
    for (int i = 0; i <= 20; ++i)
        if (name3 == kNames3[i]) return ResidueType(i);
    return std::nullopt;
}

const char* residue_name(ResidueType t) { return kNames3[int(t)]; }

char residue_letter(ResidueType t) { return kLetters[int(t)]; }

std::optional<uint32_t> Protein::find_atom(uint32_t residue, const std::string& name) const {
    const auto [lo, hi] = residue_atom_spans.at(residue);
    for (uint32_t i = lo; i < hi; ++i)
        if (atom_names[i] == name) return i;
    return std::nullopt;
}

void Protein::validate() const {
    const size_t nr = num_residues(), na = num_atoms();
    if (atom_names.size() != na || atom_to_residue.size() != na)
        throw DataError("protein: atom array lengths disagree");
    if (residue_atom_spans.size() != nr) throw DataError("protein: span count != residue count");
    uint32_t cursor = 0;
    for (size_t r = 0; r < nr; ++r) {
        const auto [lo, hi] = residue_atom_spans[r];
        if (lo != cursor || hi < lo) throw DataError("protein: spans do not partition atoms");
        for (uint32_t i = lo; i < hi; ++i)
            if (atom_to_residue[i] != r) throw DataError("protein: atom_to_residue mismatch");
        cursor = hi;
    }
    if (cursor != na) throw DataError("protein: spans do not cover all atoms");
    for (const auto& c : coords)
        if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(c.z))
            throw DataError("protein: non-finite coordinate");
    if (!chi_topology.empty()) {
        if (chi_topology.size() != nr) throw DataError("protein: chi table length mismatch");
        for (size_t r = 0; r < nr; ++r) {
            const auto& bonds = chi_topology[r].bonds;
            for (size_t k = 0; k < bonds.size(); ++k) {
                std::set<uint32_t> deps(bonds[k].dependents.begin(), bonds[k].dependents.end());
                if (deps.count(bonds[k].axis_a) || deps.count(bonds[k].axis_b))
                    throw DataError("protein: chi dependents overlap axis atoms");
                if (k + 1 < bonds.size()) {
                    for (uint32_t d : bonds[k + 1].dependents)
                        if (!deps.count(d))
                            throw DataError("protein: chi dependent sets not nested");
                }
            }
        }
    }
}

std::vector<ResidueChi> build_chi_topology(const Protein& p) {
    std::vector<ResidueChi> table(p.num_residues());
    for (size_t r = 0; r < p.num_residues(); ++r) {
        const ResidueType rt = p.sequence[r];
        const ResidueChiDefs* def = nullptr;
        for (const auto& d : chi_defs())
            if (d.type == rt) {
                def = &d;
                break;
            }
        if (!def) continue;
        for (size_t k = 0; k < def->chis.size(); ++k) {
            const auto a = p.find_atom(uint32_t(r), def->chis[k].axis_a);
            const auto b = p.find_atom(uint32_t(r), def->chis[k].axis_b);
            if (!a || !b) break;  // missing axis atom truncates the chi list
            ChiBond bond;
            bond.axis_a = *a;
            bond.axis_b = *b;
            for (const char* dep : def->dependents[k])
                if (auto idx = p.find_atom(uint32_t(r), dep)) bond.dependents.push_back(*idx);
            if (bond.dependents.empty()) break;
            table[r].bonds.push_back(std::move(bond));
        }
    }
    return table;
}

Protein perturb_torsional(const Protein& p, std::span<const double> eps, ChiOrder order) {
    if (eps.size() != p.num_residues() * kMaxChi)
        throw ShapeError("perturb_torsional: eps must be n_r x 4");
    if (p.chi_topology.size() != p.num_residues())
        throw InvalidParameterError("perturb_torsional: protein lacks chi topology");
    Protein out = p;
    for (size_t r = 0; r < p.num_residues(); ++r) {
        const auto& bonds = p.chi_topology[r].bonds;
        const size_t nk = bonds.size();
        for (size_t step = 0; step < nk; ++step) {
            const size_t k = (order == ChiOrder::proximal_first) ? step : nk - 1 - step;
            const double angle = eps[r * kMaxChi + k];
            if (angle == 0.0) continue;
            const Vec3 origin = out.coords[bonds[k].axis_a];
            const Vec3 axis = (out.coords[bonds[k].axis_b] - origin).normalized();
            for (uint32_t dep : bonds[k].dependents)
                out.coords[dep] = rotate_point_about_axis(out.coords[dep], origin, axis, angle);
        }
    }
    return out;
}

Protein reduce_to_ca(const Protein& p) {
    Protein out;
    out.sequence = p.sequence;
    out.coords.reserve(p.num_residues());
    out.atom_names.reserve(p.num_residues());
    for (size_t r = 0; r < p.num_residues(); ++r) {
        const auto ca = p.find_atom(uint32_t(r), "CA");
        if (!ca) throw DataError("reduce_to_ca: residue " + std::to_string(r) + " lacks CA");
        out.coords.push_back(p.coords[*ca]);
        out.atom_names.emplace_back("CA");
        out.atom_to_residue.push_back(uint32_t(r));
        out.residue_atom_spans.emplace_back(uint32_t(r), uint32_t(r + 1));
    }
    out.chi_topology.assign(out.num_residues(), {});
    return out;
}

Protein truncate_protein(const Protein& p, size_t max_residues) {
    if (max_residues == 0) throw InvalidParameterError("truncate_protein: max_residues == 0");
    if (p.num_residues() <= max_residues) return p;
    Protein out;
    out.sequence.assign(p.sequence.begin(), p.sequence.begin() + max_residues);
    const uint32_t atom_end = p.residue_atom_spans[max_residues - 1].second;
    out.coords.assign(p.coords.begin(), p.coords.begin() + atom_end);
    out.atom_names.assign(p.atom_names.begin(), p.atom_names.begin() + atom_end);
    out.atom_to_residue.assign(p.atom_to_residue.begin(), p.atom_to_residue.begin() + atom_end);
    out.residue_atom_spans.assign(p.residue_atom_spans.begin(),
                                  p.residue_atom_spans.begin() + max_residues);
    out.chi_topology = build_chi_topology(out);
    return out;
}

bool is_hydrogen_name(const std::string& atom_name) {
    for (char c : atom_name) {
        if (c == ' ' || (c >= '0' && c <= '9')) continue;
        return c == 'H' || c == 'D';
    }
    return false;
}

std::vector<std::pair<uint32_t, uint32_t>> detect_bonds(const Protein& p, double cutoff) {
    std::vector<std::pair<uint32_t, uint32_t>> bonds;
    const double c2 = cutoff * cutoff;
    const uint32_t na = uint32_t(p.num_atoms());
    for (uint32_t i = 0; i < na; ++i) {
        for (uint32_t j = i + 1; j < na; ++j) {
            const Vec3 d = p.coords[i] - p.coords[j];
            if (d.dot(d) < c2) bonds.emplace_back(i, j);
        }
    }
    return bonds;
}

}  // namespace siamdiff
