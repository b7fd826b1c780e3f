// SPDX-License-Identifier: Apache-2.0
#include "pdb.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace siamdiff {

namespace {

std::string strip(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(uint8_t(s[a]))) ++a;
    while (b > a && std::isspace(uint8_t(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// 1-based inclusive column slice, tolerant of short lines.
std::string cols(const std::string& line, size_t from, size_t to) {
    if (line.size() < from) return "";
    return line.substr(from - 1, std::min(to, line.size()) - from + 1);
}

double parse_coord(const std::string& field, size_t line_no, const char* what) {
    const std::string t = strip(field);
    if (t.empty())
        throw DataError("pdb line " + std::to_string(line_no) + ": missing " + what + " field");
    double value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw DataError("pdb line " + std::to_string(line_no) + ": malformed " + what +
                        " coordinate '" + t + "'");
    return value;
}

}  // namespace

Protein parse_pdb_subset(const std::string& text, const PdbOptions& opts) {
    Protein p;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;

    // (chain, resSeq, iCode) of the residue currently being filled.
    std::string cur_key;
    for (; std::getline(in, line); ) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string rec = cols(line, 1, 6);
        if (rec.rfind("ATOM", 0) != 0) continue;  // skip HETATM, TER, REMARK, ...

        const std::string altloc = cols(line, 17, 17);
        if (!altloc.empty() && altloc != " " && altloc != "A") continue;

        const std::string atom_name = strip(cols(line, 13, 16));
        if (opts.strip_hydrogens && is_hydrogen_name(atom_name)) continue;

        const std::string res_name = strip(cols(line, 18, 20));
        const auto rtype = residue_from_name(res_name);
        if (!rtype)
            throw DataError("pdb line " + std::to_string(line_no) + ": unknown residue name '" +
                            res_name + "'");

        const std::string key =
            cols(line, 22, 22) + "|" + strip(cols(line, 23, 26)) + "|" + cols(line, 27, 27);
        if (key != cur_key) {
            cur_key = key;
            p.sequence.push_back(*rtype);
            p.residue_atom_spans.emplace_back(uint32_t(p.coords.size()), uint32_t(p.coords.size()));
        }

        Vec3 xyz{parse_coord(cols(line, 31, 38), line_no, "x"),
                 parse_coord(cols(line, 39, 46), line_no, "y"),
                 parse_coord(cols(line, 47, 54), line_no, "z")};
        p.coords.push_back(xyz);
        p.atom_names.push_back(atom_name);
        p.atom_to_residue.push_back(uint32_t(p.sequence.size() - 1));
        p.residue_atom_spans.back().second = uint32_t(p.coords.size());
    }

    if (p.coords.empty()) throw DataError("pdb: no ATOM records found");

    for (size_t r = 0; r < p.num_residues(); ++r) {
        for (const char* bb : {"N", "CA", "C"}) {
            if (!p.find_atom(uint32_t(r), bb))
                throw DataError("pdb: residue " + std::to_string(r + 1) + " (" +
                                residue_name(p.sequence[r]) + ") missing backbone atom " + bb);
        }
    }

    p.chi_topology = build_chi_topology(p);
    p.validate();
    return p;
}

Protein load_pdb_file(const std::string& path, const PdbOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open pdb file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pdb_subset(ss.str(), opts);
}

std::string write_pdb_subset(const Protein& p) {
    std::string out;
    char buf[96];
    for (size_t i = 0; i < p.num_atoms(); ++i) {
        const uint32_t r = p.atom_to_residue[i];
        // Atom names shorter than 4 chars start in column 14 by convention.
        const std::string& an = p.atom_names[i];
        char namefield[5] = "    ";
        if (an.size() >= 4) {
            for (int k = 0; k < 4; ++k) namefield[k] = an[size_t(k)];
        } else {
            for (size_t k = 0; k < an.size(); ++k) namefield[k + 1] = an[k];
        }
        std::snprintf(buf, sizeof buf, "ATOM  %5zu %.4s %3s A%4u    %8.3f%8.3f%8.3f\n", i + 1,
                      namefield, residue_name(p.sequence[r]), r + 1, p.coords[i].x, p.coords[i].y,
                      p.coords[i].z);
        out += buf;
    }
    out += "END\n";
    return out;
}

}  // namespace siamdiff
