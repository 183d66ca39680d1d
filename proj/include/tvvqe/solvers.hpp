#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvvqe/bfgs.hpp"
#include "tvvqe/objectives.hpp"

namespace tvvqe {

enum class Method { vqd, tvvqe, ssvqe, mcvqe };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

enum class TracePhase { energy, tangent };

/// One recorded optimizer iteration of one state.
struct TracePoint {
    int iteration = 0;            // global index across both phases
    TracePhase phase = TracePhase::energy;
    double energy = 0.0;          // trial energy, not the penalized objective
    double tangent_norm = 0.0;    // L1 norm of the analytic gradient
    double log_error = 0.0;       // vs. the state's exact level (nan without one)
};

struct StateSpec {
    std::string label;
    std::string initial_occupation;
    std::optional<double> exact_energy;
};

/// Deterministic seeded stream for restart draws (splitmix64 under a
/// fixed uniform mapping, identical across platforms).
class RestartStream {
public:
    explicit RestartStream(std::uint64_t seed) : state_(seed) {}
    double uniform(double lo, double hi);

private:
    std::uint64_t state_;
};

struct SolverOptions {
    std::vector<int> phase1_iterations;      // per state; last entry repeats
    std::vector<int> phase2_iterations;      // TVVQE only, per state
    int restarts = 10;                       // phase-1 starts incl. theta0 = 0
    double restart_range = 3.141592653589793;
    std::uint64_t seed = 1;
    OptimizerConfig optimizer;               // tolerances and line search
    IterationUnit iteration_unit = IterationUnit::steps;
    double fdm_step = 1e-5;                  // objective-gradient step for BFGS
    int gradient_threads = 1;

    int phase1_for(int state) const;
    int phase2_for(int state) const;
};

struct StateResult {
    std::string label;
    std::vector<TracePoint> trace;
    double final_energy = 0.0;
    std::vector<double> final_theta;
    StateVector final_state;
    int tv_start_iteration = -1;             // -1 when no tangent phase ran
    TerminationReason phase1_reason = TerminationReason::max_iter;
    std::optional<TerminationReason> phase2_reason;
    std::optional<double> exact_energy;
};

struct SuiteResult {
    Method method;
    std::vector<StateResult> states;
};

/// Sequential deflation driver: minimizes F per state with previously
/// converged states frozen as lower states.
SuiteResult solve_vqd(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                      const std::vector<StateSpec>& states, const DeflationParams& deflation,
                      const ConstraintParams& constraint, const SolverOptions& options);

/// VQD phase plus, per state, a tangent phase minimizing F_tv from the
/// phase-1 parameters. Final energies are trial energies at the final
/// parameters.
SuiteResult solve_tvvqe(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                        const std::vector<StateSpec>& states, const DeflationParams& deflation,
                        const ConstraintParams& constraint, const SolverOptions& options);

/// lambda_i = 2(N - i)/(N^2 - N); the single-state fallback weight is 1.
std::vector<double> ssvqe_weights(int state_count);

/// One shared parameter vector minimizing sum_i lambda_i E_i plus pairwise
/// overlap penalties weighted (lambda_i + lambda_j). Initial states must
/// be mutually orthogonal.
SuiteResult solve_ssvqe(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                        const std::vector<StateSpec>& states, const ConstraintParams& constraint,
                        const SolverOptions& options);

/// SSVQE followed by diagonalization of M_ij = <phi_i|H|phi_j> over the
/// optimized states; the subspace eigenvalues become the method energies.
SuiteResult solve_mcvqe(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                        const std::vector<StateSpec>& states, const ConstraintParams& constraint,
                        const SolverOptions& options);

}  // namespace tvvqe
