#include "tvvqe/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tvvqe/fermion.hpp"

namespace tvvqe {

UccAnsatz::UccAnsatz(int qubit_count, std::vector<VariableBlock> blocks, int trotter_depth)
    : qubit_count_(qubit_count), depth_(trotter_depth), blocks_(std::move(blocks)) {
    if (trotter_depth < 1) {
        throw std::invalid_argument("UccAnsatz: trotter depth must be >= 1");
    }
    for (const auto& b : blocks_) {
        for (const auto& w : b.words) {
            if (w.qubit_count() != qubit_count_) {
                throw std::invalid_argument("UccAnsatz: word length != qubit count in block " +
                                            b.label);
            }
            if (std::abs(w.coefficient.imag()) > 1e-14) {
                throw std::invalid_argument("UccAnsatz: non-real word coefficient in block " +
                                            b.label);
            }
        }
    }
}

namespace {

// JW image of tau - tau^†; anti-Hermitian, so every word comes out as
// i * (real). Folded to real coefficients c_k with the factor convention
// exp(theta (tau - tau^†)) = prod_k exp(-i theta c_k P_k).
VariableBlock make_block(const std::vector<int>& occ, const std::vector<int>& virt,
                         int qubit_count, const std::string& label) {
    FermionicOperator gen;
    std::vector<LadderOp> fwd;
    for (int v : virt) fwd.push_back({v, true});
    for (int o : occ) fwd.push_back({o, false});
    std::vector<LadderOp> rev(fwd.rbegin(), fwd.rend());
    for (auto& l : rev) l.dagger = !l.dagger;
    gen.add(1.0, fwd);
    gen.add(-1.0, rev);
    PauliSum image = jordan_wigner(gen, qubit_count);

    VariableBlock block;
    block.label = label;
    for (const auto& t : image.terms()) {
        if (std::abs(t.coefficient.real()) > 1e-14) {
            throw std::logic_error("cluster generator is not anti-Hermitian: " + label);
        }
        block.words.emplace_back(std::complex<double>(-t.coefficient.imag(), 0.0), t.axes);
    }
    std::sort(block.words.begin(), block.words.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.axes < b.axes; });
    return block;
}

}  // namespace

UccAnsatz build_uccsd(int qubit_count, const std::string& reference_occupation,
                      int trotter_depth) {
    if (static_cast<int>(reference_occupation.size()) != qubit_count) {
        throw std::invalid_argument("build_uccsd: reference length != qubit count");
    }
    std::vector<int> occ, virt;
    for (int m = 0; m < qubit_count; ++m) {
        switch (reference_occupation[m]) {
            case '1': occ.push_back(m); break;
            case '0': virt.push_back(m); break;
            default:
                throw std::invalid_argument("build_uccsd: reference must be a 0/1 string");
        }
    }
    if (occ.empty() || virt.empty()) {
        throw std::invalid_argument("build_uccsd: reference has no occupied or no virtual modes");
    }
    const auto spin = [](int m) { return m % 2; };

    std::vector<VariableBlock> blocks;
    for (int o : occ) {
        for (int v : virt) {
            if (spin(o) == spin(v)) {
                blocks.push_back(make_block({o}, {v}, qubit_count,
                                            "s" + std::to_string(o) + ">" + std::to_string(v)));
            }
        }
    }
    for (std::size_t i = 0; i < occ.size(); ++i) {
        for (std::size_t j = i + 1; j < occ.size(); ++j) {
            for (std::size_t a = 0; a < virt.size(); ++a) {
                for (std::size_t b = a + 1; b < virt.size(); ++b) {
                    const int o1 = occ[i], o2 = occ[j];
                    const int v1 = virt[a], v2 = virt[b];
                    if (spin(o1) + spin(o2) == spin(v1) + spin(v2)) {
                        blocks.push_back(make_block(
                            {o1, o2}, {v1, v2}, qubit_count,
                            "d" + std::to_string(o1) + "," + std::to_string(o2) + ">" +
                                std::to_string(v1) + "," + std::to_string(v2)));
                    }
                }
            }
        }
    }
    return UccAnsatz(qubit_count, std::move(blocks), trotter_depth);
}

StateVector prepare_state(const UccAnsatz& ansatz, std::span<const double> theta,
                          const StateVector& initial) {
    if (static_cast<int>(theta.size()) != ansatz.parameter_count()) {
        throw std::invalid_argument("prepare_state: theta length != parameter count");
    }
    if (initial.qubit_count() != ansatz.qubit_count()) {
        throw std::invalid_argument("prepare_state: initial state qubit count mismatch");
    }
    StateVector s = initial;
    const int depth = ansatz.trotter_depth();
    for (int rep = 0; rep < depth; ++rep) {
        for (int l = 0; l < ansatz.parameter_count(); ++l) {
            const double angle = theta[l] / depth;
            for (const auto& w : ansatz.blocks()[l].words) {
                apply_pauli_exponential_in_place(s, w, angle);
            }
        }
    }
    return s;
}

std::vector<DerivativeSlot> derivative_slots(const UccAnsatz& ansatz, int variable_index) {
    if (variable_index < 0 || variable_index >= ansatz.parameter_count()) {
        throw std::out_of_range("derivative_slots: variable index out of range");
    }
    std::vector<DerivativeSlot> slots;
    const auto& words = ansatz.blocks()[variable_index].words;
    const int depth = ansatz.trotter_depth();
    slots.reserve(static_cast<std::size_t>(depth) * words.size());
    for (int rep = 0; rep < depth; ++rep) {
        for (int k = 0; k < static_cast<int>(words.size()); ++k) {
            slots.push_back({variable_index, rep, k, words[k].coefficient.real() / depth});
        }
    }
    return slots;
}

StateVector apply_derivative_operator(const UccAnsatz& ansatz, std::span<const double> theta,
                                      const DerivativeSlot& slot, const StateVector& initial) {
    if (static_cast<int>(theta.size()) != ansatz.parameter_count()) {
        throw std::invalid_argument("apply_derivative_operator: theta length mismatch");
    }
    StateVector s = initial;
    const int depth = ansatz.trotter_depth();
    for (int rep = 0; rep < depth; ++rep) {
        for (int l = 0; l < ansatz.parameter_count(); ++l) {
            const double angle = theta[l] / depth;
            const auto& words = ansatz.blocks()[l].words;
            for (int k = 0; k < static_cast<int>(words.size()); ++k) {
                if (rep == slot.repetition && l == slot.variable_index && k == slot.term_index) {
                    PauliTerm bare(slot.coefficient, words[k].axes);
                    apply_pauli_in_place(s, bare);
                }
                apply_pauli_exponential_in_place(s, words[k], angle);
            }
        }
    }
    return s;
}

}  // namespace tvvqe
