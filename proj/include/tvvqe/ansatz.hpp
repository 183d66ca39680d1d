#pragma once

#include <span>
#include <string>
#include <vector>

#include "tvvqe/pauli.hpp"
#include "tvvqe/statevector.hpp"

namespace tvvqe {

/// The Pauli-word expansion of one anti-Hermitian cluster generator,
/// sharing a single variable. Stored words have real coefficients c_k so
/// the block factor is prod_k exp(-i theta c_k P_k).
struct VariableBlock {
    std::string label;
    std::vector<PauliTerm> words;  // fixed lexicographic order by axes
};

/// One appearance of variable m in the factorized circuit: repetition r,
/// word k of block m, with the chain-rule coefficient c_k / depth.
struct DerivativeSlot {
    int variable_index = 0;
    int repetition = 0;
    int term_index = 0;
    double coefficient = 0.0;
};

/// Ordered product of Pauli exponentials grouped by variable, repeated
/// `trotter_depth` times with theta/depth per factor. Depth repetitions
/// share parameters, so parameter count equals the block count.
class UccAnsatz {
public:
    UccAnsatz() = default;
    UccAnsatz(int qubit_count, std::vector<VariableBlock> blocks, int trotter_depth = 2);

    int qubit_count() const { return qubit_count_; }
    int trotter_depth() const { return depth_; }
    int parameter_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<VariableBlock>& blocks() const { return blocks_; }

private:
    int qubit_count_ = 0;
    int depth_ = 2;
    std::vector<VariableBlock> blocks_;
};

/// One block per spin-preserving single and double excitation from the
/// occupied to the virtual modes of `reference_occupation` (interleaved
/// spin convention). Generators tau - tau^† are Jordan-Wigner mapped.
/// Throws when the reference has no occupied or no virtual modes.
UccAnsatz build_uccsd(int qubit_count, const std::string& reference_occupation,
                      int trotter_depth = 2);

/// Applies the factors in fixed block order then fixed word order, for each
/// depth repetition, each as exp(-i (theta_l / depth) c_k P_k).
StateVector prepare_state(const UccAnsatz& ansatz, std::span<const double> theta,
                          const StateVector& initial);

/// Every appearance of variable m across depth repetitions and block words.
std::vector<DerivativeSlot> derivative_slots(const UccAnsatz& ansatz, int variable_index);

/// V_slot(theta)|initial>: the prepare_state factor sequence with the bare
/// slot word (times its chain-rule coefficient) inserted before the slot's
/// own exponential factor. Not normalized.
StateVector apply_derivative_operator(const UccAnsatz& ansatz, std::span<const double> theta,
                                      const DerivativeSlot& slot, const StateVector& initial);

}  // namespace tvvqe
