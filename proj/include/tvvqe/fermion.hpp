#pragma once

#include <complex>
#include <vector>

#include "tvvqe/pauli.hpp"

namespace tvvqe {

/// Single creation (dagger = true) or annihilation operator on a mode.
struct LadderOp {
    int mode = 0;
    bool dagger = false;
};

/// One product of ladder operators with a scalar weight, e.g. t * a_p^† a_q.
struct FermionicTerm {
    std::complex<double> coefficient{1.0, 0.0};
    std::vector<LadderOp> ops;  // applied right to left, as written
};

/// Polynomial in creation/annihilation operators on indexed modes.
class FermionicOperator {
public:
    FermionicOperator() = default;

    void add(std::complex<double> coefficient, std::vector<LadderOp> ops);
    const std::vector<FermionicTerm>& terms() const { return terms_; }

    /// op + op^† convenience for building Hermitian pieces.
    void add_with_conjugate(std::complex<double> coefficient, std::vector<LadderOp> ops);

private:
    std::vector<FermionicTerm> terms_;
};

/// Jordan-Wigner image: a_p^† -> (X_p - iY_p)/2 tensor Z on modes < p.
/// Mode index must be < mode_count; throws std::out_of_range otherwise.
PauliSum jordan_wigner(const FermionicOperator& op, int mode_count);

}  // namespace tvvqe
