#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace tvvqe {

/// Weighted Pauli word. `axes` holds one of 'I','X','Y','Z' per qubit;
/// qubit 0 is the leftmost character, matching ket notation like |1000>.
struct PauliTerm {
    std::complex<double> coefficient{1.0, 0.0};
    std::string axes;

    PauliTerm() = default;
    PauliTerm(std::complex<double> c, std::string a)
        : coefficient(c), axes(std::move(a)) {}

    int qubit_count() const { return static_cast<int>(axes.size()); }
    bool is_identity() const { return axes.find_first_not_of('I') == std::string::npos; }
    /// Number of non-identity axes.
    int weight() const;
};

/// Operator product of two Pauli words of equal length, phase folded
/// into the coefficient (e.g. X*Y = iZ).
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// Sum of Pauli words over a fixed register size.
class PauliSum {
public:
    static constexpr double kDefaultDropTolerance = 1e-12;

    PauliSum() = default;
    explicit PauliSum(int qubit_count) : qubit_count_(qubit_count) {}
    PauliSum(int qubit_count, std::vector<PauliTerm> terms);

    int qubit_count() const { return qubit_count_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Appends a term; throws on axes-length mismatch.
    void add(const PauliTerm& term);
    void add(std::complex<double> coefficient, const std::string& axes);
    PauliSum& operator+=(const PauliSum& other);
    PauliSum& operator*=(std::complex<double> scale);

    /// Merges like terms (sorted by axes) and drops coefficients below
    /// `drop_tolerance`. Idempotent; never increases the term count.
    PauliSum simplified(double drop_tolerance = kDefaultDropTolerance) const;

    /// True when every coefficient of the simplified sum is real within
    /// `tolerance`. Hermiticity is validated, never assumed.
    bool is_hermitian(double tolerance = 1e-10) const;

    /// Coefficient of the all-identity word (0 if absent).
    std::complex<double> identity_coefficient() const;

    /// One term per line: "<real> <imag> <axes>". Lines starting with '#'
    /// are comments. Round-trips coefficients exactly (%.17g).
    std::string to_text() const;
    void write(std::ostream& out) const;

    /// Parses the text format. Comment/blank lines are skipped; the
    /// comment lines are returned through `header_comments` when given.
    /// Throws std::runtime_error with a line number on malformed input.
    static PauliSum from_text(std::istream& in,
                              std::vector<std::string>* header_comments = nullptr);
    static PauliSum from_text(const std::string& text,
                              std::vector<std::string>* header_comments = nullptr);

private:
    int qubit_count_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Particle-number operator sum_p (I - Z_p)/2 on `qubit_count` modes.
PauliSum number_operator(int qubit_count);

/// Spin projection: +1/2 per even mode, -1/2 per odd mode occupation
/// (interleaved spin convention: mode 2i is up, 2i+1 is down).
PauliSum sz_operator(int qubit_count);

}  // namespace tvvqe
