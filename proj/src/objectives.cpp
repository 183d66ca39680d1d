#include "tvvqe/objectives.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace tvvqe {

void ConstraintParams::validate() const {
    if (number_weight < 0.0 || sz_weight < 0.0) {
        throw std::invalid_argument("ConstraintParams: weights must be >= 0");
    }
}

void DeflationParams::validate() const {
    if (a <= 0.0 || alpha <= 0.0) {
        throw std::invalid_argument("DeflationParams: a and alpha must be > 0");
    }
    if (b < 0.0) {
        throw std::invalid_argument("DeflationParams: b must be >= 0");
    }
    if (mode == Mode::overlap && beta < 0.0) {
        throw std::invalid_argument("DeflationParams: beta must be >= 0");
    }
    if (mode == Mode::molecular && (r <= 0.0 || r_d <= 0.0)) {
        throw std::invalid_argument("DeflationParams: bond lengths must be > 0");
    }
}

void StateProblem::finalize() {
    constraint.validate();
    deflation.validate();
    if (deflation.mode == DeflationParams::Mode::molecular &&
        deflation.lower_energies.size() < lower_states.size()) {
        throw std::invalid_argument(
            "StateProblem: molecular deflation needs a lower energy per lower state");
    }
    for (const auto& s : lower_states) {
        if (std::abs(s.norm() - 1.0) > 1e-8) {
            throw std::invalid_argument("StateProblem: lower states must be normalized");
        }
    }
    number_op = number_operator(ansatz.qubit_count());
    sz_op = sz_operator(ansatz.qubit_count());
}

double trial_energy(const StateProblem& p, std::span<const double> theta) {
    return expectation(prepare_state(p.ansatz, theta, p.initial_state), p.hamiltonian);
}

namespace {

double gradient_component(const StateProblem& p, std::span<const double> theta,
                          const StateVector& bra, int m) {
    double acc = 0.0;  // fixed slot order keeps the sum deterministic
    for (const auto& slot : derivative_slots(p.ansatz, m)) {
        StateVector ket = apply_derivative_operator(p.ansatz, theta, slot, p.initial_state);
        acc += 2.0 * imag_cross_expectation(bra, p.hamiltonian, ket);
    }
    return acc;
}

}  // namespace

std::vector<double> analytic_gradient(const StateProblem& p, std::span<const double> theta,
                                      int threads) {
    const StateVector bra = prepare_state(p.ansatz, theta, p.initial_state);
    const int d = p.ansatz.parameter_count();
    std::vector<double> grad(d, 0.0);
    if (threads <= 1 || d <= 1) {
        for (int m = 0; m < d; ++m) grad[m] = gradient_component(p, theta, bra, m);
        return grad;
    }
    std::vector<std::thread> pool;
    std::atomic_int next{0};
    const int workers = std::min(threads, d);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int m = next.fetch_add(1); m < d; m = next.fetch_add(1)) {
                grad[m] = gradient_component(p, theta, bra, m);
            }
        });
    }
    for (auto& t : pool) t.join();
    return grad;
}

double constraint_term(const StateProblem& p, std::span<const double> theta) {
    if (p.constraint.number_weight == 0.0 && p.constraint.sz_weight == 0.0) return 0.0;
    const StateVector s = prepare_state(p.ansatz, theta, p.initial_state);
    double value = 0.0;
    if (p.constraint.number_weight > 0.0) {
        const double n = expectation(s, p.number_op);
        value += p.constraint.number_weight * (n - p.constraint.electron_target) *
                 (n - p.constraint.electron_target);
    }
    if (p.constraint.sz_weight > 0.0) {
        const double sz = expectation(s, p.sz_op);
        value += p.constraint.sz_weight * (sz - p.constraint.sz_target) *
                 (sz - p.constraint.sz_target);
    }
    return value;
}

double deflation_penalty_molecular(const DeflationParams& d, std::span<const double> overlaps) {
    // f and g are Fermi-Dirac factors in the bond length; the quartic in
    // the overlap uses |E_p(r)| so the penalty stays non-negative.
    const double fd_arg = d.alpha * (d.r - d.r_d);
    const double f = 1.0 / (std::exp(std::min(fd_arg, 700.0)) + 1.0);
    const double g = 1.0 / (std::exp(std::min(d.r - 0.25 * d.r_d, 700.0)) + 1.0);
    const double prefactor = d.a * f + d.b * (1.0 - f);
    const double golden = std::sqrt(5.0) + 1.0;
    const double rr = (d.r / d.r_d) * (d.r / d.r_d) * (d.r / d.r_d) * (d.r / d.r_d);
    double sum = 0.0;
    for (std::size_t j = 0; j < overlaps.size(); ++j) {
        const double s = overlaps[j];
        const double ep = std::abs(d.lower_energies[j]) / 4.0;
        const double q1 = (1.0 + 2.0 * golden) * rr * ep;
        const double q2 = 2.0 * golden * rr * ep;
        sum += g * s + (1.0 - g) * (q1 * s * s + q2 * s);
    }
    return prefactor * sum;
}

double deflation_term(const StateProblem& p, std::span<const double> theta) {
    if (p.lower_states.empty()) return 0.0;
    const StateVector s = prepare_state(p.ansatz, theta, p.initial_state);
    std::vector<double> overlaps;
    overlaps.reserve(p.lower_states.size());
    for (const auto& lower : p.lower_states) {
        overlaps.push_back(overlap_squared(lower, s));
    }
    if (p.deflation.mode == DeflationParams::Mode::overlap) {
        double acc = 0.0;
        for (double o : overlaps) acc += o;
        return p.deflation.beta * acc;
    }
    return deflation_penalty_molecular(p.deflation, overlaps);
}

ObjectiveParts objective_f_parts(const StateProblem& p, std::span<const double> theta) {
    ObjectiveParts parts;
    parts.energy = trial_energy(p, theta);
    parts.constraint = constraint_term(p, theta);
    parts.deflation = deflation_term(p, theta);
    return parts;
}

double objective_f(const StateProblem& p, std::span<const double> theta) {
    return objective_f_parts(p, theta).total();
}

double tangent_norm(const StateProblem& p, std::span<const double> theta, int threads) {
    double l1 = 0.0;
    for (double gm : analytic_gradient(p, theta, threads)) l1 += std::abs(gm);
    return l1;
}

double objective_ftv(const StateProblem& p, std::span<const double> theta, int threads) {
    return tangent_norm(p, theta, threads) + constraint_term(p, theta) +
           deflation_term(p, theta);
}

std::vector<double> fdm_gradient(const std::function<double(std::span<const double>)>& objective,
                                 std::span<const double> theta, double step) {
    if (step <= 0.0) {
        throw std::invalid_argument("fdm_gradient: step must be > 0");
    }
    std::vector<double> work(theta.begin(), theta.end());
    std::vector<double> grad(theta.size(), 0.0);
    for (std::size_t m = 0; m < theta.size(); ++m) {
        const double saved = work[m];
        work[m] = saved + step;
        const double fp = objective(work);
        work[m] = saved - step;
        const double fm = objective(work);
        work[m] = saved;
        grad[m] = (fp - fm) / (2.0 * step);
    }
    return grad;
}

}  // namespace tvvqe
