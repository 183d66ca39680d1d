#include "tvvqe/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvvqe/oracle.hpp"

namespace tvvqe {

std::string to_string(Method m) {
    switch (m) {
        case Method::vqd: return "vqd";
        case Method::tvvqe: return "tvvqe";
        case Method::ssvqe: return "ssvqe";
        case Method::mcvqe: return "mcvqe";
    }
    return "unknown";
}

Method method_from_string(const std::string& name) {
    if (name == "vqd") return Method::vqd;
    if (name == "tvvqe") return Method::tvvqe;
    if (name == "ssvqe") return Method::ssvqe;
    if (name == "mcvqe") return Method::mcvqe;
    throw std::invalid_argument("unknown method '" + name + "'");
}

double RestartStream::uniform(double lo, double hi) {
    // splitmix64; top 53 bits mapped to [0, 1)
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

int SolverOptions::phase1_for(int state) const {
    if (phase1_iterations.empty()) return 25;
    if (state < static_cast<int>(phase1_iterations.size())) return phase1_iterations[state];
    return phase1_iterations.back();
}

int SolverOptions::phase2_for(int state) const {
    if (phase2_iterations.empty()) return 0;
    if (state < static_cast<int>(phase2_iterations.size())) return phase2_iterations[state];
    return phase2_iterations.back();
}

std::vector<double> ssvqe_weights(int state_count) {
    if (state_count < 1) throw std::invalid_argument("ssvqe_weights: need >= 1 state");
    if (state_count == 1) return {1.0};  // formula divides by zero at N=1
    std::vector<double> w(state_count);
    const double denom = static_cast<double>(state_count) * state_count - state_count;
    for (int i = 0; i < state_count; ++i) {
        w[i] = 2.0 * (state_count - i) / denom;
    }
    return w;
}

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Constraint targets follow the state's own initial occupation.
ConstraintParams constraint_with_targets(const ConstraintParams& weights,
                                         const std::string& occupation) {
    ConstraintParams c = weights;
    c.electron_target = 0.0;
    c.sz_target = 0.0;
    for (std::size_t q = 0; q < occupation.size(); ++q) {
        if (occupation[q] == '1') {
            c.electron_target += 1.0;
            c.sz_target += (q % 2 == 0) ? 0.5 : -0.5;
        }
    }
    return c;
}

TracePoint make_point(const StateProblem& problem, std::span<const double> theta, int iteration,
                      TracePhase phase, int threads) {
    TracePoint pt;
    pt.iteration = iteration;
    pt.phase = phase;
    pt.energy = trial_energy(problem, theta);
    pt.tangent_norm = tangent_norm(problem, theta, threads);
    pt.log_error = problem.exact_energy ? log_error(pt.energy, *problem.exact_energy)
                                        : nan_value();
    return pt;
}

OptimizerConfig phase_config(const SolverOptions& options, int budget) {
    OptimizerConfig cfg = options.optimizer;
    cfg.max_iterations = budget;
    cfg.iteration_unit = options.iteration_unit;
    return cfg;
}

/// Best-of-N phase-1 minimization of F. The first start is theta = 0 (the
/// reference state); the rest are seeded uniform draws.
OptimizerResult multistart_minimize(const Objective& objective, const Gradient& gradient,
                                    int dim, const SolverOptions& options, int budget,
                                    RestartStream& stream) {
    OptimizerResult best;
    bool have = false;
    const int starts = std::max(1, options.restarts);
    for (int s = 0; s < starts; ++s) {
        std::vector<double> theta0(dim, 0.0);
        if (s > 0) {
            for (double& t : theta0) {
                t = stream.uniform(-options.restart_range, options.restart_range);
            }
        }
        OptimizerResult r = minimize(objective, gradient, theta0, phase_config(options, budget));
        if (!have || r.objective_final < best.objective_final) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

Objective make_f_objective(const StateProblem& problem) {
    return [&problem](std::span<const double> theta) { return objective_f(problem, theta); };
}

Objective make_ftv_objective(const StateProblem& problem, int threads) {
    return [&problem, threads](std::span<const double> theta) {
        return objective_ftv(problem, theta, threads);
    };
}

Gradient make_fdm_gradient(const Objective& objective, double step) {
    return [objective, step](std::span<const double> theta) {
        return fdm_gradient(objective, theta, step);
    };
}

SuiteResult solve_deflation_chain(Method method, const PauliSum& hamiltonian,
                                  const UccAnsatz& ansatz, const std::vector<StateSpec>& states,
                                  const DeflationParams& deflation,
                                  const ConstraintParams& constraint,
                                  const SolverOptions& options) {
    SuiteResult suite;
    suite.method = method;
    std::vector<StateVector> lower;
    std::vector<double> lower_energies;
    RestartStream stream(options.seed);

    for (int i = 0; i < static_cast<int>(states.size()); ++i) {
        StateProblem problem;
        problem.hamiltonian = hamiltonian;
        problem.ansatz = ansatz;
        problem.initial_state = StateVector::basis_state(states[i].initial_occupation);
        problem.lower_states = lower;
        problem.deflation = deflation;
        problem.deflation.lower_energies = lower_energies;
        problem.constraint = constraint_with_targets(constraint, states[i].initial_occupation);
        problem.exact_energy = states[i].exact_energy;
        problem.finalize();

        StateResult sr;
        sr.label = states[i].label;
        sr.exact_energy = states[i].exact_energy;

        const Objective f = make_f_objective(problem);
        const Gradient gf = make_fdm_gradient(f, options.fdm_step);
        OptimizerResult p1 =
            multistart_minimize(f, gf, ansatz.parameter_count(), options, options.phase1_for(i),
                                stream);
        sr.phase1_reason = p1.termination_reason;
        int iteration = 0;
        for (const auto& rec : p1.trace) {
            sr.trace.push_back(make_point(problem, rec.theta, iteration++, TracePhase::energy,
                                          options.gradient_threads));
        }
        std::vector<double> theta = p1.theta_final;

        if (method == Method::tvvqe) {
            sr.tv_start_iteration = iteration - 1;
            const Objective ftv = make_ftv_objective(problem, options.gradient_threads);
            const Gradient gftv = make_fdm_gradient(ftv, options.fdm_step);
            OptimizerResult p2 =
                minimize(ftv, gftv, theta, phase_config(options, options.phase2_for(i)));
            sr.phase2_reason = p2.termination_reason;
            for (std::size_t k = 1; k < p2.trace.size(); ++k) {
                sr.trace.push_back(make_point(problem, p2.trace[k].theta, iteration++,
                                              TracePhase::tangent, options.gradient_threads));
            }
            theta = p2.theta_final;
        }

        sr.final_theta = theta;
        sr.final_state = prepare_state(ansatz, theta, problem.initial_state);
        sr.final_energy = expectation(sr.final_state, hamiltonian);

        // Every frozen state contributes the quartic at the lowest level's
        // energy scale; per-level scales collapse when a level sits near 0.
        if (i == 0) {
            const double scale =
                states[0].exact_energy ? *states[0].exact_energy : sr.final_energy;
            lower_energies.assign(1, scale);
        } else {
            lower_energies.push_back(lower_energies.front());
        }
        lower.push_back(sr.final_state);
        suite.states.push_back(std::move(sr));
    }
    return suite;
}

}  // namespace

SuiteResult solve_vqd(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                      const std::vector<StateSpec>& states, const DeflationParams& deflation,
                      const ConstraintParams& constraint, const SolverOptions& options) {
    return solve_deflation_chain(Method::vqd, hamiltonian, ansatz, states, deflation, constraint,
                                 options);
}

SuiteResult solve_tvvqe(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                        const std::vector<StateSpec>& states, const DeflationParams& deflation,
                        const ConstraintParams& constraint, const SolverOptions& options) {
    return solve_deflation_chain(Method::tvvqe, hamiltonian, ansatz, states, deflation,
                                 constraint, options);
}

namespace {

struct SsvqeContext {
    std::vector<StateProblem> problems;  // one per state, no lower states
    std::vector<double> weights;

    double objective(std::span<const double> theta) const {
        double value = 0.0;
        std::vector<StateVector> prepared;
        prepared.reserve(problems.size());
        for (std::size_t i = 0; i < problems.size(); ++i) {
            prepared.push_back(prepare_state(problems[i].ansatz, theta,
                                             problems[i].initial_state));
            value += weights[i] * expectation(prepared.back(), problems[i].hamiltonian);
            value += constraint_term(problems[i], theta);
        }
        // Pairwise overlap penalty weighted (lambda_i + lambda_j). A shared
        // unitary keeps orthogonal inputs orthogonal, so this vanishes
        // identically; it is retained as part of the objective contract.
        for (std::size_t i = 0; i < prepared.size(); ++i) {
            for (std::size_t j = i + 1; j < prepared.size(); ++j) {
                value += (weights[i] + weights[j]) * overlap_squared(prepared[i], prepared[j]);
            }
        }
        return value;
    }
};

}  // namespace

SuiteResult solve_ssvqe(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                        const std::vector<StateSpec>& states, const ConstraintParams& constraint,
                        const SolverOptions& options) {
    if (states.empty()) return {Method::ssvqe, {}};
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (states[i].initial_occupation == states[j].initial_occupation) {
                throw std::invalid_argument("solve_ssvqe: initial states must be orthogonal");
            }
        }
    }
    SsvqeContext ctx;
    ctx.weights = ssvqe_weights(static_cast<int>(states.size()));
    for (const auto& spec : states) {
        StateProblem p;
        p.hamiltonian = hamiltonian;
        p.ansatz = ansatz;
        p.initial_state = StateVector::basis_state(spec.initial_occupation);
        p.constraint = constraint_with_targets(constraint, spec.initial_occupation);
        p.exact_energy = spec.exact_energy;
        p.finalize();
        ctx.problems.push_back(std::move(p));
    }

    const Objective f = [&ctx](std::span<const double> theta) { return ctx.objective(theta); };
    const Gradient gf = make_fdm_gradient(f, options.fdm_step);
    RestartStream stream(options.seed);
    OptimizerResult res = multistart_minimize(f, gf, ansatz.parameter_count(), options,
                                              options.phase1_for(0), stream);

    SuiteResult suite;
    suite.method = Method::ssvqe;
    for (std::size_t i = 0; i < states.size(); ++i) {
        StateResult sr;
        sr.label = states[i].label;
        sr.exact_energy = states[i].exact_energy;
        sr.phase1_reason = res.termination_reason;
        int iteration = 0;
        for (const auto& rec : res.trace) {
            sr.trace.push_back(make_point(ctx.problems[i], rec.theta, iteration++,
                                          TracePhase::energy, options.gradient_threads));
        }
        sr.final_theta = res.theta_final;
        sr.final_state = prepare_state(ansatz, res.theta_final, ctx.problems[i].initial_state);
        sr.final_energy = expectation(sr.final_state, hamiltonian);
        suite.states.push_back(std::move(sr));
    }
    return suite;
}

SuiteResult solve_mcvqe(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                        const std::vector<StateSpec>& states, const ConstraintParams& constraint,
                        const SolverOptions& options) {
    SuiteResult suite = solve_ssvqe(hamiltonian, ansatz, states, constraint, options);
    suite.method = Method::mcvqe;
    const int n = static_cast<int>(suite.states.size());
    if (n == 0) return suite;

    // Subspace matrix over the optimized states, then its spectrum.
    ComplexDense m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m.at(i, j) = cross_expectation(suite.states[i].final_state, hamiltonian,
                                           suite.states[j].final_state);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const std::complex<double> avg = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            if (std::abs(m.at(i, j) - avg) > 1e-10) {
                throw std::runtime_error("solve_mcvqe: subspace matrix is not Hermitian");
            }
            m.at(i, j) = avg;
            m.at(j, i) = std::conj(avg);
        }
    }
    std::vector<double> contracted;
    ComplexDense vecs;
    jacobi_hermitian(m, contracted, vecs);
    for (int i = 0; i < n; ++i) {
        suite.states[i].final_energy = contracted[i];
        if (!suite.states[i].trace.empty()) {
            TracePoint pt = suite.states[i].trace.back();
            pt.iteration += 1;
            pt.energy = contracted[i];
            pt.log_error = suite.states[i].exact_energy
                               ? log_error(contracted[i], *suite.states[i].exact_energy)
                               : nan_value();
            suite.states[i].trace.push_back(pt);
        }
    }
    return suite;
}

}  // namespace tvvqe
