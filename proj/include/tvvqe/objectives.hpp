#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tvvqe/ansatz.hpp"
#include "tvvqe/pauli.hpp"
#include "tvvqe/statevector.hpp"

namespace tvvqe {

/// Quadratic symmetry-sector penalties on particle number and Sz.
struct ConstraintParams {
    double electron_target = 0.0;
    double sz_target = 0.0;
    double number_weight = 1.0;  // energy units per unit^2
    double sz_weight = 1.0;

    void validate() const;
};

/// Fermi-Dirac weighted overlap penalty separating a state from frozen
/// lower states. `molecular` uses the bond-length machinery; `overlap`
/// is the plain beta * sum |<phi_j|phi_i>|^2 form used when no bond
/// length exists (lattice models).
struct DeflationParams {
    enum class Mode { molecular, overlap };

    Mode mode = Mode::molecular;
    double a = 1.0;
    double b = 1.0;
    double alpha = 100.0;
    double r = 0.7414;       // current bond length, Angstrom
    double r_d = 0.7414;     // reference bond length, Angstrom
    double beta = 1.0;       // overlap-mode weight
    // |E_p(r)| scale per lower state; the harness fills these with the
    // exact ground energy at r, else the frozen lower state's energy.
    std::vector<double> lower_energies;

    void validate() const;
};

/// One eigenstate's optimization setup: Hamiltonian, ansatz, initial
/// state, frozen lower states, penalties and an optional exact reference
/// energy for scoring.
struct StateProblem {
    PauliSum hamiltonian;
    UccAnsatz ansatz;
    StateVector initial_state;
    std::vector<StateVector> lower_states;
    DeflationParams deflation;
    ConstraintParams constraint;
    std::optional<double> exact_energy;

    // Cached symmetry operators; built by finalize().
    PauliSum number_op;
    PauliSum sz_op;

    /// Validates parameters and builds the cached operators.
    void finalize();
};

struct ObjectiveParts {
    double energy = 0.0;
    double constraint = 0.0;
    double deflation = 0.0;
    double total() const { return energy + constraint + deflation; }
};

/// E_j(theta) = <prepared|H|prepared>.
double trial_energy(const StateProblem& p, std::span<const double> theta);

/// d E / d theta_m = 2 sum_slots Im(<U psi|H|V_slot psi>), slot
/// coefficients folded in. `threads` > 1 evaluates components in
/// parallel; per-component accumulation order is fixed either way.
std::vector<double> analytic_gradient(const StateProblem& p, std::span<const double> theta,
                                      int threads = 1);

double constraint_term(const StateProblem& p, std::span<const double> theta);
double deflation_term(const StateProblem& p, std::span<const double> theta);

/// F = E + E_const + E_def, parts exposed individually.
ObjectiveParts objective_f_parts(const StateProblem& p, std::span<const double> theta);
double objective_f(const StateProblem& p, std::span<const double> theta);

/// F_tv = sum_m |dE/dtheta_m| + E_const + E_def.
double objective_ftv(const StateProblem& p, std::span<const double> theta, int threads = 1);

/// L1 norm of the analytic gradient (the tangent norm of the trace).
double tangent_norm(const StateProblem& p, std::span<const double> theta, int threads = 1);

/// Central finite differences of an arbitrary functional.
std::vector<double> fdm_gradient(const std::function<double(std::span<const double>)>& objective,
                                 std::span<const double> theta, double step);

/// Internal pieces reused by tests.
double deflation_penalty_molecular(const DeflationParams& d, std::span<const double> overlaps);

}  // namespace tvvqe
