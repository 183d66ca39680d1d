#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvvqe/models.hpp"
#include "tvvqe/oracle.hpp"
#include "tvvqe/solvers.hpp"

namespace tvvqe {

/// Sectioned key-value config text: [section] headers, `key = value`
/// entries, '#' comments. Repeated keys keep their order.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback = "") const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
    /// Whitespace-separated list value.
    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

private:
    struct Entry {
        std::string section, key, value;
    };
    std::vector<Entry> entries_;
    std::string origin_;
};

/// Target-state description resolved from config: label, initial ket,
/// optional sector filter and level index for exact-energy scoring.
struct TargetState {
    std::string label;
    std::string initial_occupation;
    std::optional<SectorLabel> sector;
    int level_index = -1;  // index into distinct levels; -1 = unscored
};

/// A fully resolved experiment: Hamiltonian, ansatz inputs, states,
/// method list and solver options.
struct Experiment {
    std::string kind;            // convergence | tangent_scatter | bond_scan
    std::string system;          // h2 | lih | hubbard
    std::vector<Method> methods;
    std::string output_prefix;
    std::string data_dir;
    int jobs = 1;

    // convergence / scatter: single Hamiltonian
    PauliSum hamiltonian;
    double bond_length = 0.0;
    std::string energy_units;

    // bond_scan grid
    std::vector<double> scan_r;

    std::string ansatz_reference;
    int trotter_depth = 2;
    std::vector<TargetState> states;
    DeflationParams deflation;
    bool deflation_beta_auto = false;
    ConstraintParams constraint;  // weights only; targets come per state
    SolverOptions options;
    std::vector<int> ssvqe_iterations;
};

/// Loads the config, applies CLI-style overrides, resolves the system
/// (reads data files / builds the lattice Hamiltonian).
Experiment load_experiment(const Config& config, const std::string& base_dir);

struct ExperimentOutput {
    std::vector<std::string> files;  // paths written
    std::string summary;             // the summary text, also written to a file
};

ExperimentOutput run_convergence(const Experiment& exp, const std::string& out_dir);
ExperimentOutput run_tangent_scatter(const Experiment& exp, const std::string& out_dir);
ExperimentOutput run_bond_scan(const Experiment& exp, const std::string& out_dir);

/// Gradient validation report: max |analytic - FDM| per variable over
/// seeded random draws, pass/fail against the stated bound.
struct GradientReport {
    std::vector<double> max_deviation;  // per variable
    double worst = 0.0;
    bool pass = false;
    std::string text;
};
GradientReport validate_gradients(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                                  int draws, double fdm_step, double bound, std::uint64_t seed);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// One row of a parsed experiment CSV (schema-checked round trip).
using CsvRow = std::vector<std::string>;
struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};
CsvTable read_csv(const std::string& path);

namespace paths {
std::string h2_file(const std::string& data_dir, double r);
std::string lih_file(const std::string& data_dir);
}  // namespace paths

}  // namespace tvvqe
