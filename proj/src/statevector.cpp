#include "tvvqe/statevector.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tvvqe {

namespace {

struct WordMasks {
    std::uint64_t flip = 0;   // X and Y axes
    std::uint64_t ybits = 0;  // Y axes
    std::uint64_t zbits = 0;  // Z axes
};

WordMasks masks_for(const PauliTerm& term, int qubit_count) {
    if (term.qubit_count() != qubit_count) {
        throw std::invalid_argument("Pauli term axes length != state qubit count");
    }
    WordMasks m;
    for (int q = 0; q < qubit_count; ++q) {
        std::uint64_t bit = std::uint64_t{1} << (qubit_count - 1 - q);
        switch (term.axes[q]) {
            case 'I': break;
            case 'X': m.flip |= bit; break;
            case 'Y': m.flip |= bit; m.ybits |= bit; break;
            case 'Z': m.zbits |= bit; break;
            default: throw std::invalid_argument("invalid Pauli axis");
        }
    }
    return m;
}

// Phase of P|i>: each Y contributes i on bit 0 and -i on bit 1; each Z
// contributes (-1)^bit. With y = popcount(ybits), the product over Y axes
// is i^y * (-1)^(set Y bits of i); Z gives (-1)^(set Z bits of i).
inline std::complex<double> basis_phase(std::uint64_t i, const WordMasks& m, int y_count) {
    int minus = __builtin_popcountll(i & m.ybits) + __builtin_popcountll(i & m.zbits);
    std::complex<double> ph = (minus & 1) ? -1.0 : 1.0;
    switch (y_count & 3) {
        case 1: ph *= std::complex<double>(0.0, 1.0); break;
        case 2: ph *= -1.0; break;
        case 3: ph *= std::complex<double>(0.0, -1.0); break;
        default: break;
    }
    return ph;
}

}  // namespace

StateVector StateVector::basis_state(const std::string& bits) {
    StateVector s(static_cast<int>(bits.size()));
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("basis_state: bit string must be 0/1");
        }
        index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    s.amplitudes_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double n2 = 0.0;
    for (const auto& a : amplitudes_) n2 += std::norm(a);
    return std::sqrt(n2);
}

void apply_pauli_in_place(StateVector& state, const PauliTerm& term) {
    const WordMasks m = masks_for(term, state.qubit_count());
    const int y_count = __builtin_popcountll(m.ybits);
    auto& amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    const std::complex<double> c = term.coefficient;
    if (m.flip == 0) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            amps[i] *= c * basis_phase(i, m, y_count);
        }
        return;
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t j = i ^ m.flip;
        if (j < i) continue;
        std::complex<double> ai = amps[i];
        std::complex<double> aj = amps[j];
        amps[j] = c * basis_phase(i, m, y_count) * ai;
        amps[i] = c * basis_phase(j, m, y_count) * aj;
    }
}

StateVector apply_pauli(const StateVector& state, const PauliTerm& term) {
    StateVector out = state;
    apply_pauli_in_place(out, term);
    return out;
}

void apply_pauli_exponential_in_place(StateVector& state, const PauliTerm& term, double angle) {
    if (std::abs(term.coefficient.imag()) > 1e-14) {
        throw std::invalid_argument("apply_pauli_exponential: coefficient must be real");
    }
    const double a = angle * term.coefficient.real();
    const double ca = std::cos(a);
    const std::complex<double> misa(0.0, -std::sin(a));
    const WordMasks m = masks_for(term, state.qubit_count());
    const int y_count = __builtin_popcountll(m.ybits);
    auto& amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    if (m.flip == 0) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            // phase is +-1 here (diagonal word)
            amps[i] *= ca + misa * basis_phase(i, m, y_count);
        }
        return;
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t j = i ^ m.flip;
        if (j < i) continue;
        std::complex<double> ai = amps[i];
        std::complex<double> aj = amps[j];
        amps[i] = ca * ai + misa * basis_phase(j, m, y_count) * aj;
        amps[j] = ca * aj + misa * basis_phase(i, m, y_count) * ai;
    }
}

StateVector apply_pauli_exponential(const StateVector& state, const PauliTerm& term, double angle) {
    StateVector out = state;
    apply_pauli_exponential_in_place(out, term, angle);
    return out;
}

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
    if (a.qubit_count() != b.qubit_count()) {
        throw std::invalid_argument("inner_product: qubit count mismatch");
    }
    std::complex<double> acc = 0.0;
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    for (std::size_t i = 0; i < va.size(); ++i) {
        acc += std::conj(va[i]) * vb[i];
    }
    return acc;
}

std::complex<double> cross_expectation(const StateVector& bra, const PauliSum& h,
                                       const StateVector& ket) {
    if (bra.qubit_count() != ket.qubit_count() || h.qubit_count() != ket.qubit_count()) {
        throw std::invalid_argument("cross_expectation: dimension mismatch");
    }
    // Accumulate per term in the fixed stored order so parallel callers
    // get bit-identical sums.
    std::complex<double> acc = 0.0;
    StateVector scratch(ket.qubit_count());
    for (const auto& term : h.terms()) {
        scratch = ket;
        apply_pauli_in_place(scratch, term);
        acc += inner_product(bra, scratch);
    }
    return acc;
}

double expectation(const StateVector& state, const PauliSum& h) {
    if (!h.is_hermitian()) {
        throw std::invalid_argument("expectation: Hamiltonian is not Hermitian");
    }
    std::complex<double> v = cross_expectation(state, h, state);
    if (std::abs(v.imag()) > 1e-10) {
        throw std::runtime_error("expectation: imaginary residue " +
                                 std::to_string(v.imag()) + " exceeds 1e-10");
    }
    return v.real();
}

double imag_cross_expectation(const StateVector& bra, const PauliSum& h,
                              const StateVector& ket) {
    return cross_expectation(bra, h, ket).imag();
}

double overlap_squared(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

}  // namespace tvvqe
