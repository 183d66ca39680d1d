#pragma once

#include <string>

#include "tvvqe/pauli.hpp"

namespace tvvqe {

/// Open 1D chain of spatial sites with spin: qubit count = 2 * sites,
/// mode 2i = site-i spin up, 2i+1 = site-i spin down.
struct HubbardSpec {
    int sites = 3;
    double hopping_t = 0.13;    // eV
    double coulomb_u = 1.04;    // eV (8t in the benchmark lattice)
};

/// H = -t sum_{<i,j>,s} (a^†_{is} a_{js} + h.c.) + U sum_i n_{i,up} n_{i,down},
/// Jordan-Wigner mapped. Hermitian by construction; open-chain bonds only.
PauliSum build_hubbard(const HubbardSpec& spec);

/// Qubit Hamiltonian ingested from a data file, with its metadata header.
struct MolecularSystem {
    std::string label;
    double bond_length = 0.0;   // Angstrom
    int electron_count = 0;
    int qubit_count = 0;
    std::string units = "hartree";
    PauliSum hamiltonian;       // includes the identity constant offset
};

/// Reads the PauliSum text format with metadata header comments like
///   # label=H2 r=0.70 electrons=2 units=hartree
/// Validates Hermiticity and uniform term length. Errors carry the path
/// and, for parse errors, a line number.
MolecularSystem load_molecular(const std::string& path);

/// Writes a system back in the same format (round-trips bit-exactly).
void save_molecular(const MolecularSystem& system, const std::string& path);

}  // namespace tvvqe
