#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "tvvqe/pauli.hpp"
#include "tvvqe/statevector.hpp"

namespace tvvqe {

/// Row-major dense complex matrix.
struct ComplexDense {
    int dim = 0;
    std::vector<std::complex<double>> a;

    ComplexDense() = default;
    explicit ComplexDense(int d) : dim(d), a(static_cast<std::size_t>(d) * d, {0.0, 0.0}) {}

    std::complex<double>& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    const std::complex<double>& at(int i, int j) const {
        return a[static_cast<std::size_t>(i) * dim + j];
    }
};

/// (particle number, spin projection) measured on an eigenvector.
struct SectorLabel {
    double particle_number = 0.0;
    double sz = 0.0;
};

struct Spectrum {
    std::vector<double> eigenvalues;            // ascending
    ComplexDense eigenvectors;                  // columns, orthonormal
    std::optional<std::vector<SectorLabel>> sectors;

    StateVector eigenvector_state(int k) const;
};

/// 2^n x 2^n matrix of the Pauli sum. Capped at 10 qubits.
ComplexDense dense_matrix(const PauliSum& h);

/// Cyclic-Jacobi eigen-decomposition of a Hermitian matrix. Returns
/// eigenvalues ascending with matching eigenvector columns. Converges when
/// the off-diagonal Frobenius norm drops below `off_tolerance`.
void jacobi_hermitian(ComplexDense matrix, std::vector<double>& eigenvalues,
                      ComplexDense& eigenvectors, double off_tolerance = 1e-12,
                      int max_sweeps = 100);

/// Full-CI reference: dense Jacobi diagonalization of the Pauli sum with a
/// residual check ||Hv - lambda v|| < 1e-9 per pair. When `with_sectors` is
/// set, degenerate groups are rotated to simultaneously diagonalize the
/// particle-number and Sz operators so each eigenvector carries a clean
/// (N, Sz) label.
Spectrum diagonalize(const PauliSum& h, bool with_sectors = false);

/// log10 |e_calc - e_exact|; exactly equal values return the -16 floor.
double log_error(double e_calc, double e_exact);

/// Distinct eigenvalues (grouping tolerance `level_tolerance`), optionally
/// restricted to eigenvectors whose sector labels match (N, Sz) within
/// `sector_tolerance`. Requires sectors when a filter is given.
std::vector<double> distinct_levels(const Spectrum& spectrum,
                                    std::optional<SectorLabel> filter = std::nullopt,
                                    double level_tolerance = 1e-8,
                                    double sector_tolerance = 1e-6);

}  // namespace tvvqe
