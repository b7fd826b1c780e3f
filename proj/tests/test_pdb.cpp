// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstring>

#include "error.hpp"
#include "pdb.hpp"
#include "toygen.hpp"

using namespace siamdiff;

namespace {

// Hand-written 2-residue GLY-ALA fixture, 9 atoms.
const char* kGlyAla =
    "REMARK hand-written fixture\n"
    "ATOM      1  N   GLY A   1       0.000   0.000   0.000\n"
    "ATOM      2  CA  GLY A   1       1.458   0.000   0.000\n"
    "ATOM      3  C   GLY A   1       2.004   1.420   0.000\n"
    "ATOM      4  O   GLY A   1       1.251   2.390   0.000\n"
    "ATOM      5  N   ALA A   2       3.330   1.536   0.000\n"
    "ATOM      6  CA  ALA A   2       3.963   2.848   0.000\n"
    "ATOM      7  C   ALA A   2       5.480   2.704   0.000\n"
    "ATOM      8  O   ALA A   2       6.093   1.637   0.000\n"
    "ATOM      9  CB  ALA A   2       3.520   3.640   1.230\n"
    "END\n";

}  // namespace

TEST_CASE("parse_pdb_subset: hand-counted GLY-ALA fixture") {
    const Protein p = parse_pdb_subset(kGlyAla);
    CHECK(p.num_residues() == 2);
    CHECK(p.num_atoms() == 9);
    CHECK(p.sequence[0] == ResidueType::GLY);
    CHECK(p.sequence[1] == ResidueType::ALA);
    CHECK(p.residue_atom_spans[0] == std::pair<uint32_t, uint32_t>{0, 4});
    CHECK(p.residue_atom_spans[1] == std::pair<uint32_t, uint32_t>{4, 9});
}

TEST_CASE("parse_pdb_subset: fixed-column coordinate read") {
    const std::string line =
        "ATOM      1  N   ALA A   1      11.104  13.207   2.100\n"
        "ATOM      2  CA  ALA A   1      12.560  13.300   2.000\n"
        "ATOM      3  C   ALA A   1      13.000  14.700   2.000\n";
    const Protein p = parse_pdb_subset(line);
    CHECK(p.coords[0].x == doctest::Approx(11.104).epsilon(1e-12));
    CHECK(p.coords[0].y == doctest::Approx(13.207).epsilon(1e-12));
    CHECK(p.coords[0].z == doctest::Approx(2.100).epsilon(1e-12));
}

TEST_CASE("parse_pdb_subset: error paths") {
    CHECK_THROWS_AS(parse_pdb_subset(""), DataError);
    CHECK_THROWS_AS(parse_pdb_subset("REMARK nothing\n"), DataError);

    // Unknown residue name.
    CHECK_THROWS_AS(
        parse_pdb_subset("ATOM      1  CA  ZZZ A   1       0.000   0.000   0.000\n"), DataError);

    // Malformed coordinate with line number in the message.
    try {
        parse_pdb_subset(
            "ATOM      1  N   GLY A   1       0.000   0.000   0.000\n"
            "ATOM      2  CA  GLY A   1       x.xxx   0.000   0.000\n");
        CHECK(false);
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    // Missing backbone atom names the residue.
    try {
        parse_pdb_subset("ATOM      1  CA  GLY A   1       0.000   0.000   0.000\n");
        CHECK(false);
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("GLY") != std::string::npos);
    }
}

TEST_CASE("parse_pdb_subset skips HETATM and concatenates chains in file order") {
    const std::string text = std::string(kGlyAla) +
                             "HETATM   10 FE   HEM B   1       0.000   0.000   9.000\n"
                             "ATOM     11  N   SER B   1       0.000   0.000  20.000\n"
                             "ATOM     12  CA  SER B   1       1.458   0.000  20.000\n"
                             "ATOM     13  C   SER B   1       2.004   1.420  20.000\n";
    // Remove the trailing END line from the fixture for concatenation.
    std::string merged;
    for (const char* row = text.c_str(); *row;) {
        const char* nl = std::strchr(row, '\n');
        const std::string line(row, nl ? size_t(nl - row) : std::strlen(row));
        if (line.rfind("END", 0) != 0) merged += line + "\n";
        if (!nl) break;
        row = nl + 1;
    }
    const Protein p = parse_pdb_subset(merged);
    CHECK(p.num_residues() == 3);
    CHECK(p.sequence[2] == ResidueType::SER);
    CHECK(p.num_atoms() == 12);
}

TEST_CASE("strip-hydrogens flag removes H atoms") {
    const std::string text =
        "ATOM      1  N   GLY A   1       0.000   0.000   0.000\n"
        "ATOM      2  CA  GLY A   1       1.458   0.000   0.000\n"
        "ATOM      3  C   GLY A   1       2.004   1.420   0.000\n"
        "ATOM      4  H   GLY A   1       0.300   0.900   0.000\n"
        "ATOM      5 1HA  GLY A   1       1.500   0.700   0.900\n";
    CHECK(parse_pdb_subset(text).num_atoms() == 5);
    CHECK(parse_pdb_subset(text, {.strip_hydrogens = true}).num_atoms() == 3);
}

TEST_CASE("write_pdb_subset round-trips through the parser, MASK as UNK") {
    Protein p = build_peptide("KVS");
    p.sequence[1] = ResidueType::MASK;
    const std::string text = write_pdb_subset(p);
    CHECK(text.find("UNK") != std::string::npos);
    const Protein q = parse_pdb_subset(text);
    CHECK(q.num_residues() == p.num_residues());
    CHECK(q.num_atoms() == p.num_atoms());
    CHECK(q.sequence[1] == ResidueType::MASK);
    for (size_t i = 0; i < p.num_atoms(); ++i) {
        CHECK((p.coords[i] - q.coords[i]).norm() < 1.8e-3);  // columns carry 3 decimals
        CHECK(p.atom_names[i] == q.atom_names[i]);
    }
}
