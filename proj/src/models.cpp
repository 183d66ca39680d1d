#include "tvvqe/models.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tvvqe/fermion.hpp"

namespace tvvqe {

PauliSum build_hubbard(const HubbardSpec& spec) {
    if (spec.sites < 2) {
        throw std::invalid_argument("build_hubbard: need at least 2 sites");
    }
    const int modes = 2 * spec.sites;
    FermionicOperator h;
    for (int i = 0; i + 1 < spec.sites; ++i) {
        for (int s = 0; s < 2; ++s) {
            const int p = 2 * i + s;
            const int q = 2 * (i + 1) + s;
            h.add(-spec.hopping_t, {{p, true}, {q, false}});
            h.add(-spec.hopping_t, {{q, true}, {p, false}});
        }
    }
    for (int i = 0; i < spec.sites; ++i) {
        const int up = 2 * i;
        const int dn = 2 * i + 1;
        h.add(spec.coulomb_u, {{up, true}, {up, false}, {dn, true}, {dn, false}});
    }
    return jordan_wigner(h, modes);
}

namespace {

// "# key=value key=value ..." -> fills the metadata fields it recognizes.
void parse_header(const std::string& comment, MolecularSystem& sys) {
    std::istringstream ss(comment.substr(1));
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "label") {
            sys.label = value;
        } else if (key == "r") {
            sys.bond_length = std::stod(value);
        } else if (key == "electrons") {
            sys.electron_count = std::stoi(value);
        } else if (key == "units") {
            sys.units = value;
        }
    }
}

}  // namespace

MolecularSystem load_molecular(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_molecular: cannot open '" + path + "'");
    }
    MolecularSystem sys;
    std::vector<std::string> comments;
    try {
        sys.hamiltonian = PauliSum::from_text(in, &comments);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(e.what()) + " in '" + path + "'");
    }
    for (const auto& c : comments) parse_header(c, sys);
    sys.qubit_count = sys.hamiltonian.qubit_count();
    if (!sys.hamiltonian.is_hermitian()) {
        throw std::runtime_error("load_molecular: non-Hermitian Hamiltonian in '" + path + "'");
    }
    return sys;
}

void save_molecular(const MolecularSystem& system, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_molecular: cannot open '" + path + "' for writing");
    }
    char header[160];
    std::snprintf(header, sizeof(header), "# label=%s r=%.4f electrons=%d units=%s\n",
                  system.label.c_str(), system.bond_length, system.electron_count,
                  system.units.c_str());
    out << header;
    system.hamiltonian.write(out);
}

}  // namespace tvvqe
