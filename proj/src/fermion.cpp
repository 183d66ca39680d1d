#include "tvvqe/fermion.hpp"

#include <stdexcept>
#include <string>

namespace tvvqe {

void FermionicOperator::add(std::complex<double> coefficient, std::vector<LadderOp> ops) {
    terms_.push_back({coefficient, std::move(ops)});
}

void FermionicOperator::add_with_conjugate(std::complex<double> coefficient,
                                           std::vector<LadderOp> ops) {
    std::vector<LadderOp> conj(ops.rbegin(), ops.rend());
    for (auto& l : conj) l.dagger = !l.dagger;
    terms_.push_back({coefficient, std::move(ops)});
    terms_.push_back({std::conj(coefficient), std::move(conj)});
}

namespace {

// (X_p -+ iY_p)/2 with the parity Z string on lower modes.
PauliSum ladder_image(const LadderOp& l, int mode_count) {
    if (l.mode < 0 || l.mode >= mode_count) {
        throw std::out_of_range("jordan_wigner: mode index " + std::to_string(l.mode) +
                                " out of range for " + std::to_string(mode_count) + " modes");
    }
    std::string base(mode_count, 'I');
    for (int q = 0; q < l.mode; ++q) base[q] = 'Z';
    std::string ax = base, ay = base;
    ax[l.mode] = 'X';
    ay[l.mode] = 'Y';
    PauliSum s(mode_count);
    s.add(0.5, ax);
    s.add(std::complex<double>(0.0, l.dagger ? -0.5 : 0.5), ay);
    return s;
}

}  // namespace

PauliSum jordan_wigner(const FermionicOperator& op, int mode_count) {
    PauliSum result(mode_count);
    for (const auto& term : op.terms()) {
        std::vector<PauliTerm> product{PauliTerm(term.coefficient, std::string(mode_count, 'I'))};
        for (const auto& l : term.ops) {
            PauliSum image = ladder_image(l, mode_count);
            std::vector<PauliTerm> next;
            next.reserve(product.size() * image.size());
            for (const auto& a : product) {
                for (const auto& b : image.terms()) {
                    next.push_back(multiply(a, b));
                }
            }
            product = std::move(next);
        }
        for (const auto& t : product) result.add(t);
    }
    return result.simplified();
}

}  // namespace tvvqe
