#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tvvqe {

enum class TerminationReason { gradient_tol, step_tol, max_iter, line_search_failure };

std::string to_string(TerminationReason reason);

/// What `max_iterations` counts: quasi-Newton steps (default) or objective
/// evaluations.
enum class IterationUnit { steps, evaluations };

struct OptimizerConfig {
    int max_iterations = 100;
    IterationUnit iteration_unit = IterationUnit::steps;
    double gradient_tolerance = 1e-10;   // infinity norm
    double step_tolerance = 1e-12;
    double armijo_c1 = 1e-4;
    double backtrack_factor = 0.5;
    int max_backtracks = 40;

    void validate() const;
};

struct IterationRecord {
    std::vector<double> theta;
    double objective = 0.0;
    double gradient_norm = 0.0;  // infinity norm
};

struct OptimizerResult {
    std::vector<double> theta_final;
    double objective_final = 0.0;
    int iterations_used = 0;
    int evaluations_used = 0;
    std::vector<IterationRecord> trace;  // length = iterations_used + 1
    TerminationReason termination_reason = TerminationReason::max_iter;
};

using Objective = std::function<double(std::span<const double>)>;
using Gradient = std::function<std::vector<double>(std::span<const double>)>;

/// BFGS with the inverse-Hessian update, a curvature guard (updates are
/// skipped when y.s <= 1e-10) and Armijo backtracking. The initial inverse
/// Hessian is the identity scaled by 1/|g0| clamped to [1e-3, 1e3]. A
/// failed line search retries once along steepest descent with a fresh
/// Hessian before reporting line_search_failure (reported, not thrown).
/// Objective values along the trace never increase.
OptimizerResult minimize(const Objective& objective, const Gradient& gradient,
                         std::span<const double> theta0, const OptimizerConfig& config);

}  // namespace tvvqe
