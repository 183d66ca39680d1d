#include "tvvqe/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tvvqe {

namespace {

// Single-qubit products: row * column, result axis and phase.
// Order: I=0, X=1, Y=2, Z=3.
constexpr char kAxisOf[] = "IXYZ";

int axis_index(char a) {
    switch (a) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Y': return 2;
        case 'Z': return 3;
        default:
            throw std::invalid_argument(std::string("invalid Pauli axis '") + a + "'");
    }
}

struct AxisProduct {
    char axis;
    std::complex<double> phase;
};

AxisProduct axis_multiply(char a, char b) {
    static const int result[4][4] = {
        {0, 1, 2, 3},
        {1, 0, 3, 2},
        {2, 3, 0, 1},
        {3, 2, 1, 0}};
    // phase exponent of i: X*Y = iZ, Y*Z = iX, Z*X = iY, reversed pairs -i
    static const int ipow[4][4] = {
        {0, 0, 0, 0},
        {0, 0, 1, 3},
        {0, 3, 0, 1},
        {0, 1, 3, 0}};
    static const std::complex<double> kI(0.0, 1.0);
    int ia = axis_index(a), ib = axis_index(b);
    std::complex<double> ph = 1.0;
    switch (ipow[ia][ib]) {
        case 1: ph = kI; break;
        case 2: ph = -1.0; break;
        case 3: ph = -kI; break;
        default: break;
    }
    return {kAxisOf[result[ia][ib]], ph};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int PauliTerm::weight() const {
    return static_cast<int>(std::count_if(axes.begin(), axes.end(),
                                          [](char c) { return c != 'I'; }));
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
    if (a.axes.size() != b.axes.size()) {
        throw std::invalid_argument("PauliTerm multiply: axes length mismatch");
    }
    PauliTerm out;
    out.axes.resize(a.axes.size());
    out.coefficient = a.coefficient * b.coefficient;
    for (std::size_t q = 0; q < a.axes.size(); ++q) {
        AxisProduct p = axis_multiply(a.axes[q], b.axes[q]);
        out.axes[q] = p.axis;
        out.coefficient *= p.phase;
    }
    return out;
}

PauliSum::PauliSum(int qubit_count, std::vector<PauliTerm> terms)
    : qubit_count_(qubit_count), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.qubit_count() != qubit_count_) {
            throw std::invalid_argument("PauliSum: term axes length != qubit count");
        }
    }
}

void PauliSum::add(const PauliTerm& term) {
    if (term.qubit_count() != qubit_count_) {
        throw std::invalid_argument("PauliSum::add: term axes length != qubit count");
    }
    for (char c : term.axes) axis_index(c);
    terms_.push_back(term);
}

void PauliSum::add(std::complex<double> coefficient, const std::string& axes) {
    add(PauliTerm(coefficient, axes));
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.qubit_count_ != qubit_count_) {
        throw std::invalid_argument("PauliSum +=: qubit count mismatch");
    }
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

PauliSum& PauliSum::operator*=(std::complex<double> scale) {
    for (auto& t : terms_) t.coefficient *= scale;
    return *this;
}

PauliSum PauliSum::simplified(double drop_tolerance) const {
    std::map<std::string, std::complex<double>> merged;
    for (const auto& t : terms_) {
        merged[t.axes] += t.coefficient;
    }
    PauliSum out(qubit_count_);
    for (const auto& [axes, coeff] : merged) {
        if (std::abs(coeff) > drop_tolerance) {
            out.terms_.emplace_back(coeff, axes);
        }
    }
    return out;
}

bool PauliSum::is_hermitian(double tolerance) const {
    PauliSum s = simplified(0.0);
    for (const auto& t : s.terms_) {
        if (std::abs(t.coefficient.imag()) > tolerance) return false;
    }
    return true;
}

std::complex<double> PauliSum::identity_coefficient() const {
    std::complex<double> c = 0.0;
    for (const auto& t : terms_) {
        if (t.is_identity()) c += t.coefficient;
    }
    return c;
}

void PauliSum::write(std::ostream& out) const {
    for (const auto& t : terms_) {
        out << format_double(t.coefficient.real()) << ' '
            << format_double(t.coefficient.imag()) << ' ' << t.axes << '\n';
    }
}

std::string PauliSum::to_text() const {
    std::ostringstream ss;
    write(ss);
    return ss.str();
}

PauliSum PauliSum::from_text(std::istream& in, std::vector<std::string>* header_comments) {
    std::string line;
    int line_no = 0;
    int qubits = -1;
    std::vector<PauliTerm> terms;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            if (header_comments) header_comments->push_back(line.substr(first));
            continue;
        }
        std::istringstream ls(line);
        double re = 0.0, im = 0.0;
        std::string axes;
        if (!(ls >> re >> im >> axes)) {
            throw std::runtime_error("PauliSum parse error at line " +
                                     std::to_string(line_no) + ": expected '<real> <imag> <axes>'");
        }
        std::string trailing;
        if (ls >> trailing) {
            throw std::runtime_error("PauliSum parse error at line " +
                                     std::to_string(line_no) + ": trailing content '" + trailing + "'");
        }
        for (char c : axes) {
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw std::runtime_error("PauliSum parse error at line " +
                                         std::to_string(line_no) + ": invalid axis '" +
                                         std::string(1, c) + "'");
            }
        }
        if (qubits < 0) {
            qubits = static_cast<int>(axes.size());
        } else if (static_cast<int>(axes.size()) != qubits) {
            throw std::runtime_error("PauliSum parse error at line " +
                                     std::to_string(line_no) + ": axes length " +
                                     std::to_string(axes.size()) + " != " + std::to_string(qubits));
        }
        terms.emplace_back(std::complex<double>(re, im), axes);
    }
    if (terms.empty()) {
        throw std::runtime_error("PauliSum parse error: no terms");
    }
    return PauliSum(qubits, std::move(terms));
}

PauliSum PauliSum::from_text(const std::string& text, std::vector<std::string>* header_comments) {
    std::istringstream ss(text);
    return from_text(ss, header_comments);
}

PauliSum number_operator(int qubit_count) {
    PauliSum n(qubit_count);
    const std::string identity(qubit_count, 'I');
    n.add(0.5 * static_cast<double>(qubit_count), identity);
    for (int p = 0; p < qubit_count; ++p) {
        std::string axes = identity;
        axes[p] = 'Z';
        n.add(-0.5, axes);
    }
    return n;
}

PauliSum sz_operator(int qubit_count) {
    PauliSum sz(qubit_count);
    const std::string identity(qubit_count, 'I');
    double offset = 0.0;
    for (int p = 0; p < qubit_count; ++p) {
        double sign = (p % 2 == 0) ? 1.0 : -1.0;
        offset += 0.25 * sign;
        std::string axes = identity;
        axes[p] = 'Z';
        sz.add(-0.25 * sign, axes);
    }
    sz.add(offset, identity);
    return sz;
}

}  // namespace tvvqe
