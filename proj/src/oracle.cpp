#include "tvvqe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tvvqe {

namespace {

constexpr int kMaxQubits = 10;

double offdiag_frobenius(const ComplexDense& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim; ++i) {
        for (int j = i + 1; j < m.dim; ++j) {
            s += 2.0 * std::norm(m.at(i, j));
        }
    }
    return std::sqrt(s);
}

// One Jacobi rotation annihilating the (p, q) element of a Hermitian
// matrix, accumulated into the eigenvector columns.
void rotate(ComplexDense& m, ComplexDense& v, int p, int q) {
    const std::complex<double> apq = m.at(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const std::complex<double> phase = apq / r;  // e^{i phi}
    const double app = m.at(p, p).real();
    const double aqq = m.at(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = m.dim;
    for (int k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const std::complex<double> akp = m.at(k, p);
        const std::complex<double> akq = m.at(k, q);
        m.at(k, p) = c * akp + s * std::conj(phase) * akq;
        m.at(k, q) = -s * phase * akp + c * akq;
        m.at(p, k) = std::conj(m.at(k, p));
        m.at(q, k) = std::conj(m.at(k, q));
    }
    m.at(p, p) = app * c * c + 2.0 * r * s * c + aqq * s * s;
    m.at(q, q) = app * s * s - 2.0 * r * s * c + aqq * c * c;
    m.at(p, q) = 0.0;
    m.at(q, p) = 0.0;

    for (int k = 0; k < n; ++k) {
        const std::complex<double> vkp = v.at(k, p);
        const std::complex<double> vkq = v.at(k, q);
        v.at(k, p) = c * vkp + s * std::conj(phase) * vkq;
        v.at(k, q) = -s * phase * vkp + c * vkq;
    }
}

void check_hermitian(const ComplexDense& m, double tol) {
    for (int i = 0; i < m.dim; ++i) {
        for (int j = i; j < m.dim; ++j) {
            if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol) {
                throw std::invalid_argument("jacobi_hermitian: matrix is not Hermitian");
            }
        }
    }
}

// Simultaneously diagonalizes a diagonal observable (given per basis index)
// within each degenerate eigenvalue group so sector labels come out clean.
void split_degenerate_groups(Spectrum& spec, const std::vector<double>& diag_obs,
                             std::vector<double>& labels, double group_tol) {
    const int n = spec.eigenvectors.dim;
    labels.assign(n, 0.0);
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && std::abs(spec.eigenvalues[end] - spec.eigenvalues[start]) <= group_tol) {
            ++end;
        }
        const int g = end - start;
        if (g == 1) {
            double val = 0.0;
            for (int k = 0; k < n; ++k) {
                val += std::norm(spec.eigenvectors.at(k, start)) * diag_obs[k];
            }
            labels[start] = val;
        } else {
            ComplexDense block(g);
            for (int i = 0; i < g; ++i) {
                for (int j = 0; j < g; ++j) {
                    std::complex<double> acc = 0.0;
                    for (int k = 0; k < n; ++k) {
                        acc += std::conj(spec.eigenvectors.at(k, start + i)) * diag_obs[k] *
                               spec.eigenvectors.at(k, start + j);
                    }
                    block.at(i, j) = acc;
                }
            }
            std::vector<double> bvals;
            ComplexDense bvecs;
            jacobi_hermitian(block, bvals, bvecs);
            // rotate the eigenvector columns of the group
            std::vector<std::complex<double>> row(g);
            for (int k = 0; k < n; ++k) {
                for (int j = 0; j < g; ++j) {
                    std::complex<double> acc = 0.0;
                    for (int i = 0; i < g; ++i) {
                        acc += spec.eigenvectors.at(k, start + i) * bvecs.at(i, j);
                    }
                    row[j] = acc;
                }
                for (int j = 0; j < g; ++j) spec.eigenvectors.at(k, start + j) = row[j];
            }
            for (int j = 0; j < g; ++j) labels[start + j] = bvals[j];
        }
        start = end;
    }
}

}  // namespace

StateVector Spectrum::eigenvector_state(int k) const {
    int n = 0;
    while ((1 << n) < eigenvectors.dim) ++n;
    StateVector s(n);
    for (int i = 0; i < eigenvectors.dim; ++i) {
        s.amplitudes()[static_cast<std::size_t>(i)] = eigenvectors.at(i, k);
    }
    return s;
}

ComplexDense dense_matrix(const PauliSum& h) {
    if (h.qubit_count() > kMaxQubits) {
        throw std::invalid_argument("dense_matrix: qubit count " +
                                    std::to_string(h.qubit_count()) + " exceeds cap of " +
                                    std::to_string(kMaxQubits));
    }
    const int n = h.qubit_count();
    const std::uint64_t dim = std::uint64_t{1} << n;
    ComplexDense m(static_cast<int>(dim));
    for (const auto& term : h.terms()) {
        std::uint64_t flip = 0, ybits = 0, zbits = 0;
        for (int q = 0; q < n; ++q) {
            std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
            switch (term.axes[q]) {
                case 'X': flip |= bit; break;
                case 'Y': flip |= bit; ybits |= bit; break;
                case 'Z': zbits |= bit; break;
                default: break;
            }
        }
        const int y_count = __builtin_popcountll(ybits);
        for (std::uint64_t i = 0; i < dim; ++i) {
            int minus = __builtin_popcountll(i & ybits) + __builtin_popcountll(i & zbits);
            std::complex<double> ph = (minus & 1) ? -1.0 : 1.0;
            switch (y_count & 3) {
                case 1: ph *= std::complex<double>(0.0, 1.0); break;
                case 2: ph *= -1.0; break;
                case 3: ph *= std::complex<double>(0.0, -1.0); break;
                default: break;
            }
            m.at(static_cast<int>(i ^ flip), static_cast<int>(i)) += term.coefficient * ph;
        }
    }
    return m;
}

void jacobi_hermitian(ComplexDense matrix, std::vector<double>& eigenvalues,
                      ComplexDense& eigenvectors, double off_tolerance, int max_sweeps) {
    check_hermitian(matrix, 1e-10);
    const int n = matrix.dim;
    ComplexDense v(n);
    for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

    int sweep = 0;
    while (offdiag_frobenius(matrix) > off_tolerance) {
        if (++sweep > max_sweeps) {
            throw std::runtime_error("jacobi_hermitian: no convergence after " +
                                     std::to_string(max_sweeps) + " sweeps");
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(matrix.at(p, q)) > 0.0) rotate(matrix, v, p, q);
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return matrix.at(a, a).real() < matrix.at(b, b).real();
    });
    eigenvalues.resize(n);
    eigenvectors = ComplexDense(n);
    for (int j = 0; j < n; ++j) {
        eigenvalues[j] = matrix.at(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) eigenvectors.at(i, j) = v.at(i, order[j]);
    }
}

Spectrum diagonalize(const PauliSum& h, bool with_sectors) {
    if (!h.is_hermitian()) {
        throw std::invalid_argument("diagonalize: Hamiltonian is not Hermitian");
    }
    ComplexDense m = dense_matrix(h);
    Spectrum spec;
    jacobi_hermitian(m, spec.eigenvalues, spec.eigenvectors);

    // residual check against the untouched dense matrix
    const ComplexDense href = dense_matrix(h);
    const int n = href.dim;
    for (int k = 0; k < n; ++k) {
        double res2 = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> hv = 0.0;
            for (int j = 0; j < n; ++j) hv += href.at(i, j) * spec.eigenvectors.at(j, k);
            res2 += std::norm(hv - spec.eigenvalues[k] * spec.eigenvectors.at(i, k));
        }
        if (std::sqrt(res2) > 1e-9) {
            throw std::runtime_error("diagonalize: eigenpair residual " +
                                     std::to_string(std::sqrt(res2)) + " exceeds 1e-9");
        }
    }

    if (with_sectors) {
        int nq = 0;
        while ((1 << nq) < n) ++nq;
        std::vector<double> ndiag(n), szdiag(n);
        for (int i = 0; i < n; ++i) {
            int pop = __builtin_popcount(static_cast<unsigned>(i));
            ndiag[i] = pop;
            double sz = 0.0;
            for (int q = 0; q < nq; ++q) {
                int bit = (i >> (nq - 1 - q)) & 1;
                sz += bit * (q % 2 == 0 ? 0.5 : -0.5);
            }
            szdiag[i] = sz;
        }
        std::vector<double> nlabel, szlabel;
        split_degenerate_groups(spec, ndiag, nlabel, 1e-8);
        // Sz is resolved inside (energy, N) groups: reuse the machinery with a
        // combined key so only same-N degenerate partners are mixed.
        {
            const double kShift = 1e3;  // separates N groups in the grouping key
            std::vector<double> saved = spec.eigenvalues;
            for (int k = 0; k < n; ++k) {
                spec.eigenvalues[k] = saved[k] + kShift * std::round(nlabel[k]);
            }
            // grouping is keyed on the shifted values but eigenvectors stay put
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return spec.eigenvalues[a] < spec.eigenvalues[b];
            });
            ComplexDense sorted(n);
            std::vector<double> skey(n), snl(n), sval(n);
            for (int j = 0; j < n; ++j) {
                skey[j] = spec.eigenvalues[order[j]];
                snl[j] = nlabel[order[j]];
                sval[j] = saved[order[j]];
                for (int i = 0; i < n; ++i) sorted.at(i, j) = spec.eigenvectors.at(i, order[j]);
            }
            spec.eigenvalues = skey;
            spec.eigenvectors = sorted;
            split_degenerate_groups(spec, szdiag, szlabel, 1e-8);
            // restore eigenvalue ordering (ascending energy)
            std::vector<int> back(n);
            std::iota(back.begin(), back.end(), 0);
            std::stable_sort(back.begin(), back.end(), [&](int a, int b) {
                return sval[a] < sval[b];
            });
            ComplexDense finalv(n);
            std::vector<double> fe(n), fn(n), fs(n);
            for (int j = 0; j < n; ++j) {
                fe[j] = sval[back[j]];
                fn[j] = snl[back[j]];
                fs[j] = szlabel[back[j]];
                for (int i = 0; i < n; ++i) finalv.at(i, j) = sorted.at(i, back[j]);
            }
            spec.eigenvalues = fe;
            spec.eigenvectors = finalv;
            nlabel = fn;
            szlabel = fs;
        }
        std::vector<SectorLabel> labels(n);
        for (int k = 0; k < n; ++k) labels[k] = {nlabel[k], szlabel[k]};
        spec.sectors = std::move(labels);
    }
    return spec;
}

double log_error(double e_calc, double e_exact) {
    const double diff = std::abs(e_calc - e_exact);
    if (diff == 0.0) return -16.0;
    return std::log10(diff);
}

std::vector<double> distinct_levels(const Spectrum& spectrum,
                                    std::optional<SectorLabel> filter,
                                    double level_tolerance, double sector_tolerance) {
    if (filter && !spectrum.sectors) {
        throw std::invalid_argument("distinct_levels: sector filter requires sector labels");
    }
    std::vector<double> values;
    for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
        if (filter) {
            const SectorLabel& s = (*spectrum.sectors)[k];
            if (std::abs(s.particle_number - filter->particle_number) > sector_tolerance ||
                std::abs(s.sz - filter->sz) > sector_tolerance) {
                continue;
            }
        }
        values.push_back(spectrum.eigenvalues[k]);
    }
    std::vector<double> out;
    for (double e : values) {
        if (out.empty() || std::abs(e - out.back()) > level_tolerance) out.push_back(e);
    }
    return out;
}

}  // namespace tvvqe
