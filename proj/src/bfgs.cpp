#include "tvvqe/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvvqe {

std::string to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::gradient_tol: return "gradient_tol";
        case TerminationReason::step_tol: return "step_tol";
        case TerminationReason::max_iter: return "max_iter";
        case TerminationReason::line_search_failure: return "line_search_failure";
    }
    return "unknown";
}

void OptimizerConfig::validate() const {
    if (max_iterations < 0) throw std::invalid_argument("OptimizerConfig: max_iterations < 0");
    if (gradient_tolerance <= 0.0 || step_tolerance <= 0.0) {
        throw std::invalid_argument("OptimizerConfig: tolerances must be > 0");
    }
    if (armijo_c1 <= 0.0 || armijo_c1 >= 1.0) {
        throw std::invalid_argument("OptimizerConfig: armijo_c1 must lie in (0, 1)");
    }
    if (backtrack_factor <= 0.0 || backtrack_factor >= 1.0 || max_backtracks < 1) {
        throw std::invalid_argument("OptimizerConfig: invalid line search parameters");
    }
}

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double two_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Row-major dense inverse-Hessian approximation.
struct Dense {
    int n;
    std::vector<double> a;
    explicit Dense(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

Dense scaled_identity(int n, const std::vector<double>& g0) {
    const double gn = two_norm(g0);
    double scale = 1.0;
    if (gn > 0.0) scale = std::clamp(1.0 / gn, 1e-3, 1e3);
    Dense h(n);
    for (int i = 0; i < n; ++i) h.at(i, i) = scale;
    return h;
}

std::vector<double> mat_vec(const Dense& h, const std::vector<double>& v) {
    std::vector<double> out(v.size(), 0.0);
    for (int i = 0; i < h.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < h.n; ++j) s += h.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

// H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
void bfgs_update(Dense& h, const std::vector<double>& s, const std::vector<double>& y,
                 double rho) {
    const int n = h.n;
    std::vector<double> hy = mat_vec(h, y);
    const double yhy = dot(y, hy);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h.at(i, j) += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                          rho * (1.0 + rho * yhy) * s[i] * s[j];
        }
    }
}

}  // namespace

OptimizerResult minimize(const Objective& objective, const Gradient& gradient,
                         std::span<const double> theta0, const OptimizerConfig& config) {
    config.validate();
    const int n = static_cast<int>(theta0.size());

    OptimizerResult result;
    std::vector<double> x(theta0.begin(), theta0.end());
    int evals = 0;
    auto eval = [&](std::span<const double> t) {
        ++evals;
        return objective(t);
    };
    auto budget_left = [&]() {
        return config.iteration_unit == IterationUnit::steps
                   ? result.iterations_used < config.max_iterations
                   : evals < config.max_iterations;
    };

    double fx = eval(x);
    std::vector<double> g = gradient(x);
    Dense h = scaled_identity(n, g);
    result.trace.push_back({x, fx, inf_norm(g)});
    result.termination_reason = TerminationReason::max_iter;

    while (budget_left()) {
        if (inf_norm(g) <= config.gradient_tolerance) {
            result.termination_reason = TerminationReason::gradient_tol;
            break;
        }
        std::vector<double> d = mat_vec(h, g);
        for (double& v : d) v = -v;
        double gd = dot(g, d);
        if (gd >= 0.0) {
            // stale curvature; fall back to steepest descent
            h = scaled_identity(n, g);
            d = mat_vec(h, g);
            for (double& v : d) v = -v;
            gd = dot(g, d);
        }

        auto backtrack = [&](const std::vector<double>& dir, double slope,
                             std::vector<double>& x_out, double& f_out) {
            double alpha = 1.0;
            for (int b = 0; b < config.max_backtracks; ++b) {
                std::vector<double> cand(x);
                for (int i = 0; i < n; ++i) cand[i] += alpha * dir[i];
                const double fc = eval(cand);
                if (fc <= fx + config.armijo_c1 * alpha * slope) {
                    x_out = std::move(cand);
                    f_out = fc;
                    return true;
                }
                alpha *= config.backtrack_factor;
            }
            return false;
        };

        std::vector<double> xn;
        double fn = 0.0;
        bool ok = backtrack(d, gd, xn, fn);
        if (!ok) {
            // one retry along steepest descent with a reset Hessian
            h = scaled_identity(n, g);
            d = mat_vec(h, g);
            for (double& v : d) v = -v;
            gd = dot(g, d);
            ok = backtrack(d, gd, xn, fn);
        }
        if (!ok) {
            result.termination_reason = TerminationReason::line_search_failure;
            break;
        }

        std::vector<double> gn = gradient(xn);
        std::vector<double> s(n), y(n);
        for (int i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        const double ys = dot(y, s);
        if (ys > 1e-10) {
            bfgs_update(h, s, y, 1.0 / ys);
        }
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
        ++result.iterations_used;
        result.trace.push_back({x, fx, inf_norm(g)});
        if (two_norm(s) <= config.step_tolerance) {
            result.termination_reason = TerminationReason::step_tol;
            break;
        }
    }

    result.theta_final = x;
    result.objective_final = fx;
    result.evaluations_used = evals;
    return result;
}

}  // namespace tvvqe
