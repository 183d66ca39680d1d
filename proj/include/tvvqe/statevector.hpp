#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tvvqe/pauli.hpp"

namespace tvvqe {

/// Dense complex amplitude vector over n qubits. Qubit 0 is the most
/// significant index bit, so basis_state("1000") puts amplitude 1 at
/// index 8 of 16.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int qubit_count)
        : qubit_count_(qubit_count),
          amplitudes_(std::size_t{1} << qubit_count, {0.0, 0.0}) {}

    static StateVector basis_state(const std::string& bits);

    int qubit_count() const { return qubit_count_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }
    std::vector<std::complex<double>>& amplitudes() { return amplitudes_; }
    std::complex<double> amplitude(std::size_t index) const { return amplitudes_[index]; }

    double norm() const;

private:
    int qubit_count_ = 0;
    std::vector<std::complex<double>> amplitudes_;
};

/// result = coefficient * (P applied to state). Not norm-preserving for
/// |coefficient| != 1. The coefficient may be complex.
StateVector apply_pauli(const StateVector& state, const PauliTerm& term);
void apply_pauli_in_place(StateVector& state, const PauliTerm& term);

/// Applies exp(-i * angle * coeff * P); since P^2 = I this is
/// cos(a) I - i sin(a) P with a = angle * coeff. Requires a real
/// coefficient; norm preserving.
StateVector apply_pauli_exponential(const StateVector& state, const PauliTerm& term, double angle);
void apply_pauli_exponential_in_place(StateVector& state, const PauliTerm& term, double angle);

/// <state|H|state> for Hermitian H. Throws when H is not Hermitian or the
/// imaginary residue exceeds 1e-10 (arithmetic noise below is discarded).
double expectation(const StateVector& state, const PauliSum& h);

/// <bra|H|ket> evaluated exactly on the statevector.
std::complex<double> cross_expectation(const StateVector& bra, const PauliSum& h,
                                       const StateVector& ket);

/// Im(<bra|H|ket>): the exact statevector value of the Hadamard-test-like
/// derivative measurement.
double imag_cross_expectation(const StateVector& bra, const PauliSum& h,
                              const StateVector& ket);

std::complex<double> inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 in [0, 1]: the infinite-shot limit of the SWAP test.
double overlap_squared(const StateVector& a, const StateVector& b);

}  // namespace tvvqe
