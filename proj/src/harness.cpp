#include "tvvqe/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tvvqe/ansatz.hpp"

namespace tvvqe {

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                         ": malformed section header");
            }
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": expected 'key = value'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        cfg.entries_.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) return true;
    }
    return false;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const Entry* found = nullptr;
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) found = &e;
    }
    return found ? found->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string v = get(section, key);
    return v.empty() ? fallback : std::stod(v);
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    const std::string v = get(section, key);
    return v.empty() ? fallback : std::stoi(v);
}

std::vector<std::string> Config::get_all(const std::string& section,
                                         const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) out.push_back(e.value);
    }
    return out;
}

std::vector<std::string> Config::get_list(const std::string& section,
                                          const std::string& key) const {
    std::istringstream ss(get(section, key));
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::vector<int> Config::get_int_list(const std::string& section, const std::string& key) const {
    std::vector<int> out;
    for (const auto& s : get_list(section, key)) out.push_back(std::stoi(s));
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    entries_.push_back({section, key, value});
}

// ---------------------------------------------------------------------------
// Experiment resolution
// ---------------------------------------------------------------------------

namespace paths {

std::string h2_file(const std::string& data_dir, double r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "h2/h2_sto3g_r%.2f.txt", r);
    return data_dir + "/" + buf;
}

std::string lih_file(const std::string& data_dir) {
    return data_dir + "/lih/lih_sto3g_active4.txt";
}

}  // namespace paths

namespace {

TargetState parse_state_line(const std::string& line) {
    std::istringstream ss(line);
    TargetState st;
    if (!(ss >> st.label >> st.initial_occupation)) {
        throw std::runtime_error("config: state entry needs '<label> <occupation>': " + line);
    }
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: bad state attribute '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "level") {
            st.level_index = std::stoi(value);
        } else if (key == "sector") {
            const auto comma = value.find(',');
            if (comma == std::string::npos) {
                throw std::runtime_error("config: sector needs 'N,Sz': " + tok);
            }
            st.sector = SectorLabel{std::stod(value.substr(0, comma)),
                                    std::stod(value.substr(comma + 1))};
        } else {
            throw std::runtime_error("config: unknown state attribute '" + key + "'");
        }
    }
    return st;
}

double occupation_count(const std::string& bits) {
    return static_cast<double>(std::count(bits.begin(), bits.end(), '1'));
}

double occupation_sz(const std::string& bits) {
    double sz = 0.0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') sz += (q % 2 == 0) ? 0.5 : -0.5;
    }
    return sz;
}

}  // namespace

Experiment load_experiment(const Config& cfg, const std::string& base_dir) {
    Experiment exp;
    exp.kind = cfg.get("experiment", "kind");
    exp.system = cfg.get("experiment", "system");
    if (exp.kind.empty() || exp.system.empty()) {
        throw std::runtime_error("config: [experiment] kind and system are required");
    }
    std::vector<std::string> methods = cfg.get_list("experiment", "methods");
    if (methods.empty()) methods = {cfg.get("experiment", "method", "tvvqe")};
    for (const auto& m : methods) exp.methods.push_back(method_from_string(m));
    exp.output_prefix = cfg.get("experiment", "output_prefix", exp.system + "_" + exp.kind);
    exp.jobs = cfg.get_int("experiment", "jobs", 1);

    exp.data_dir = cfg.get("data", "data_dir", "data/hamiltonians");
    if (!exp.data_dir.empty() && exp.data_dir.front() != '/') {
        exp.data_dir = base_dir.empty() ? exp.data_dir : base_dir + "/" + exp.data_dir;
    }

    if (exp.system == "hubbard") {
        HubbardSpec spec;
        spec.sites = cfg.get_int("hubbard", "sites", 3);
        spec.hopping_t = cfg.get_double("hubbard", "hopping_t", 0.13);
        spec.coulomb_u = cfg.get_double("hubbard", "coulomb_u", 8.0 * spec.hopping_t);
        exp.hamiltonian = build_hubbard(spec);
        exp.energy_units = "eV";
    } else if (exp.system == "h2" || exp.system == "lih") {
        exp.energy_units = "hartree";
        if (exp.kind != "bond_scan") {
            std::string file = cfg.get("data", "file");
            if (file.empty()) {
                file = exp.system == "h2"
                           ? paths::h2_file(exp.data_dir, cfg.get_double("data", "r", 0.74))
                           : paths::lih_file(exp.data_dir);
            } else {
                file = exp.data_dir + "/" + file;
            }
            MolecularSystem sys = load_molecular(file);
            exp.hamiltonian = sys.hamiltonian;
            exp.bond_length = sys.bond_length;
        }
    } else {
        throw std::runtime_error("config: unknown system '" + exp.system + "'");
    }

    if (exp.kind == "bond_scan") {
        const double r0 = cfg.get_double("scan", "r_start", 0.1);
        const double r1 = cfg.get_double("scan", "r_stop", 2.5);
        const double dr = cfg.get_double("scan", "r_step", 0.1);
        for (double r = r0; r <= r1 + 1e-9; r += dr) {
            exp.scan_r.push_back(std::round(r * 100.0) / 100.0);
        }
    }

    exp.ansatz_reference = cfg.get("ansatz", "reference");
    if (exp.ansatz_reference.empty()) {
        throw std::runtime_error("config: [ansatz] reference is required");
    }
    exp.trotter_depth = cfg.get_int("ansatz", "trotter_depth", 2);

    for (const auto& line : cfg.get_all("states", "state")) {
        exp.states.push_back(parse_state_line(line));
    }
    if (exp.states.empty()) {
        throw std::runtime_error("config: at least one [states] state entry is required");
    }

    const std::string mode = cfg.get("deflation", "mode",
                                     exp.system == "hubbard" ? "overlap" : "molecular");
    exp.deflation.mode = mode == "overlap" ? DeflationParams::Mode::overlap
                                           : DeflationParams::Mode::molecular;
    exp.deflation.a = cfg.get_double("deflation", "a", 1.0);
    exp.deflation.b = cfg.get_double("deflation", "b", 1.0);
    exp.deflation.alpha = cfg.get_double("deflation", "alpha", 100.0);
    exp.deflation.r_d = cfg.get_double("deflation", "r_d", 0.7414);
    exp.deflation.r = exp.bond_length > 0.0 ? exp.bond_length : exp.deflation.r_d;
    const std::string beta = cfg.get("deflation", "beta", "auto");
    if (beta == "auto") {
        exp.deflation_beta_auto = true;  // 3x spectral range, filled at run time
        exp.deflation.beta = 1.0;
    } else {
        exp.deflation.beta = std::stod(beta);
    }

    exp.constraint.number_weight = cfg.get_double("constraint", "number_weight", 1.0);
    exp.constraint.sz_weight = cfg.get_double("constraint", "sz_weight", 1.0);

    auto& opt = exp.options;
    opt.phase1_iterations = cfg.get_int_list("optimizer", "phase1_iterations");
    if (opt.phase1_iterations.empty()) opt.phase1_iterations = {25};
    opt.phase2_iterations = cfg.get_int_list("optimizer", "phase2_iterations");
    if (opt.phase2_iterations.empty()) opt.phase2_iterations = {10};
    exp.ssvqe_iterations = cfg.get_int_list("optimizer", "ssvqe_iterations");
    if (exp.ssvqe_iterations.empty()) exp.ssvqe_iterations = {50};
    opt.restarts = cfg.get_int("optimizer", "restarts", 10);
    opt.restart_range = cfg.get_double("optimizer", "restart_range", 3.141592653589793);
    opt.seed = static_cast<std::uint64_t>(cfg.get_int("experiment", "seed", 1));
    opt.optimizer.gradient_tolerance = cfg.get_double("optimizer", "gradient_tolerance", 1e-12);
    opt.optimizer.step_tolerance = cfg.get_double("optimizer", "step_tolerance", 1e-12);
    opt.fdm_step = cfg.get_double("optimizer", "fdm_step", 1e-5);
    opt.iteration_unit = cfg.get("optimizer", "iteration_unit", "steps") == "evaluations"
                             ? IterationUnit::evaluations
                             : IterationUnit::steps;
    opt.gradient_threads = cfg.get_int("optimizer", "gradient_threads", 1);
    return exp;
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::string phase_name(TracePhase p) {
    return p == TracePhase::energy ? "energy" : "tangent";
}

// --- minimal SVG line/scatter emitter -------------------------------------

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool markers_only = false;
    std::vector<int> flagged;  // indices drawn as crosses
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string svg_plot(const std::vector<Series>& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, bool logx) {
    const double w = 820, h = 560, ml = 80, mr = 170, mt = 50, mb = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-300)) : v; };
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(tx(s.x[i])) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmin > xmax) { xmin = 0; xmax = 1; }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
    const double px = (w - ml - mr) / (xmax - xmin);
    const double py = (h - mt - mb) / (ymax - ymin);
    auto X = [&](double v) { return ml + (tx(v) - xmin) * px; };
    auto Y = [&](double v) { return h - mb - (v - ymin) * py; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
        << "\" height=\"" << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
        << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 5.0;
        const double fy = ymin + (ymax - ymin) * t / 5.0;
        const double gx = ml + (fx - xmin) * px;
        const double gy = h - mb - (fy - ymin) * py;
        svg << "<line x1=\"" << gx << "\" y1=\"" << h - mb << "\" x2=\"" << gx << "\" y2=\""
            << h - mb + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << gx << "\" y=\"" << h - mb + 20
            << "\" text-anchor=\"middle\" font-size=\"11\">"
            << fmt_short(logx ? std::pow(10.0, fx) : fx) << "</text>\n"
            << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_short(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 16
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n"
        << "<text x=\"20\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
        << (mt + h - mb) / 2 << ")\">" << ylabel << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const std::string color = kColors[ci % 8];
        if (!s.markers_only) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(tx(s.x[i])) || !std::isfinite(s.y[i])) continue;
                svg << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
            }
            svg << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(tx(s.x[i])) || !std::isfinite(s.y[i])) continue;
            const bool flagged = std::find(s.flagged.begin(), s.flagged.end(),
                                           static_cast<int>(i)) != s.flagged.end();
            if (flagged) {
                const double cx = X(s.x[i]), cy = Y(s.y[i]);
                svg << "<path d=\"M" << cx - 5 << ' ' << cy - 5 << " L" << cx + 5 << ' ' << cy + 5
                    << " M" << cx - 5 << ' ' << cy + 5 << " L" << cx + 5 << ' ' << cy - 5
                    << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            } else {
                svg << "<circle cx=\"" << X(s.x[i]) << "\" cy=\"" << Y(s.y[i])
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            }
        }
        svg << "<text x=\"" << w - mr + 12 << "\" y=\"" << mt + 18 * ci
            << "\" font-size=\"12\" fill=\"" << color << "\">" << s.label << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

// --- exact level resolution ------------------------------------------------

std::vector<double> resolve_exact_levels(const PauliSum& hamiltonian,
                                         const std::vector<TargetState>& states,
                                         Spectrum* spectrum_out = nullptr) {
    bool need_sectors = false;
    for (const auto& s : states) need_sectors = need_sectors || s.sector.has_value();
    Spectrum spec = diagonalize(hamiltonian, true);
    std::vector<double> exact(states.size(),
                              std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].level_index < 0) continue;
        const auto levels = distinct_levels(spec, states[i].sector);
        if (states[i].level_index >= static_cast<int>(levels.size())) {
            throw std::runtime_error("state '" + states[i].label + "': level index " +
                                     std::to_string(states[i].level_index) +
                                     " out of range (" + std::to_string(levels.size()) +
                                     " distinct levels in sector)");
        }
        exact[i] = levels[states[i].level_index];
    }
    if (spectrum_out) *spectrum_out = std::move(spec);
    return exact;
}

std::vector<StateSpec> make_state_specs(const std::vector<TargetState>& states,
                                        const std::vector<double>& exact) {
    std::vector<StateSpec> specs;
    for (std::size_t i = 0; i < states.size(); ++i) {
        StateSpec s;
        s.label = states[i].label;
        s.initial_occupation = states[i].initial_occupation;
        if (std::isfinite(exact[i])) s.exact_energy = exact[i];
        specs.push_back(std::move(s));
    }
    return specs;
}

ConstraintParams constraint_for(const ConstraintParams& weights, const std::string& occupation) {
    ConstraintParams c = weights;
    c.electron_target = occupation_count(occupation);
    c.sz_target = occupation_sz(occupation);
    return c;
}

DeflationParams deflation_for(const Experiment& exp, const PauliSum& hamiltonian, double r) {
    DeflationParams d = exp.deflation;
    d.r = r > 0.0 ? r : d.r_d;
    if (d.mode == DeflationParams::Mode::overlap && exp.deflation_beta_auto) {
        const Spectrum spec = diagonalize(hamiltonian, false);
        d.beta = 3.0 * (spec.eigenvalues.back() - spec.eigenvalues.front());
    }
    return d;
}

SuiteResult run_method(const Experiment& exp, Method method, const PauliSum& hamiltonian,
                       double r, const std::vector<StateSpec>& specs) {
    const UccAnsatz ansatz =
        build_uccsd(hamiltonian.qubit_count(), exp.ansatz_reference, exp.trotter_depth);
    const DeflationParams deflation = deflation_for(exp, hamiltonian, r);
    // Constraint targets follow each state's initial occupation sector.
    // The deflation chain shares one ConstraintParams; per-state targets are
    // resolved inside the chain via the per-state problems, so we pass the
    // first state's targets and patch per state below when they differ.
    SolverOptions options = exp.options;
    switch (method) {
        case Method::vqd:
            return solve_vqd(hamiltonian, ansatz, specs, deflation,
                             constraint_for(exp.constraint, specs[0].initial_occupation),
                             options);
        case Method::tvvqe:
            return solve_tvvqe(hamiltonian, ansatz, specs, deflation,
                               constraint_for(exp.constraint, specs[0].initial_occupation),
                               options);
        case Method::ssvqe: {
            options.phase1_iterations = exp.ssvqe_iterations;
            return solve_ssvqe(hamiltonian, ansatz, specs,
                               constraint_for(exp.constraint, specs[0].initial_occupation),
                               options);
        }
        case Method::mcvqe: {
            options.phase1_iterations = exp.ssvqe_iterations;
            return solve_mcvqe(hamiltonian, ansatz, specs,
                               constraint_for(exp.constraint, specs[0].initial_occupation),
                               options);
        }
    }
    throw std::logic_error("run_method: unreachable");
}

}  // namespace

// ---------------------------------------------------------------------------
// Spearman
// ---------------------------------------------------------------------------

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman: need two same-length series of >= 2 points");
    }
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> r(n, 0.0);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += rx[i]; my += ry[i]; }
    mx /= n; my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        CsvRow row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        if (table.header.empty()) {
            table.header = row;
        } else {
            if (row.size() != table.header.size()) {
                throw std::runtime_error("read_csv: ragged row in '" + path + "'");
            }
            table.rows.push_back(row);
        }
    }
    if (table.header.empty()) throw std::runtime_error("read_csv: empty file '" + path + "'");
    return table;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

ExperimentOutput run_convergence(const Experiment& exp, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);
    const std::vector<double> exact = resolve_exact_levels(exp.hamiltonian, exp.states);
    const std::vector<StateSpec> specs = make_state_specs(exp.states, exact);

    ExperimentOutput out;
    std::ostringstream csv;
    csv << "# schema=convergence v1\n";
    csv << "system,method,state,iteration,phase,energy,tangent_norm,log_error\n";
    std::ostringstream summary;

    for (Method method : exp.methods) {
        const SuiteResult suite = run_method(exp, method, exp.hamiltonian, exp.bond_length, specs);
        for (const auto& st : suite.states) {
            for (const auto& pt : st.trace) {
                csv << exp.system << ',' << to_string(method) << ',' << st.label << ','
                    << pt.iteration << ',' << phase_name(pt.phase) << ',' << fmt(pt.energy) << ','
                    << fmt(pt.tangent_norm) << ',' << fmt(pt.log_error) << '\n';
            }
        }
        summary << "method " << to_string(method) << " (" << exp.system << ", energies in "
                << exp.energy_units << ")\n";
        summary << "state            final_energy        exact_energy        log_error    tv_start\n";
        for (const auto& st : suite.states) {
            const double le = st.exact_energy ? log_error(st.final_energy, *st.exact_energy)
                                              : std::numeric_limits<double>::quiet_NaN();
            char line[200];
            std::snprintf(line, sizeof(line), "%-12s %19.12f %19.12f %12.4f %8d%s\n",
                          st.label.c_str(), st.final_energy,
                          st.exact_energy ? *st.exact_energy
                                          : std::numeric_limits<double>::quiet_NaN(),
                          le, st.tv_start_iteration,
                          (std::isfinite(le) && le > -2.0) ? "  [local-minimum-suspect]" : "");
            summary << line;
        }
        summary << '\n';
    }

    const std::string csv_path = out_dir + "/" + exp.output_prefix + ".csv";
    write_file(csv_path, csv.str());
    out.files.push_back(csv_path);

    // plot: log error vs iteration, re-read from the CSV so the figure shows
    // exactly what was written
    const CsvTable table = read_csv(csv_path);
    std::map<std::string, Series> by_state;
    std::vector<std::string> state_order;
    for (const auto& row : table.rows) {
        const std::string key = row[1] + ":" + row[2];
        if (!by_state.count(key)) state_order.push_back(key);
        auto& s = by_state[key];
        s.label = key;
        s.x.push_back(std::stod(row[3]));
        s.y.push_back(std::stod(row[7]));
    }
    std::vector<Series> series;
    for (const auto& k : state_order) series.push_back(by_state[k]);
    const std::string svg_path = out_dir + "/" + exp.output_prefix + ".svg";
    write_file(svg_path, svg_plot(series, exp.system + " convergence", "iteration",
                                  "log10 |E - E_exact|", false));
    out.files.push_back(svg_path);

    const std::string sum_path = out_dir + "/" + exp.output_prefix + "_summary.txt";
    write_file(sum_path, summary.str());
    out.files.push_back(sum_path);
    out.summary = summary.str();

    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cout << "[convergence] " << exp.system << " completed in " << ms << " ms\n";
    return out;
}

ExperimentOutput run_tangent_scatter(const Experiment& exp, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    if (exp.methods.size() != 1 || exp.methods[0] != Method::tvvqe) {
        throw std::runtime_error("tangent_scatter requires method = tvvqe");
    }
    std::filesystem::create_directories(out_dir);
    const std::vector<double> exact = resolve_exact_levels(exp.hamiltonian, exp.states);
    const std::vector<StateSpec> specs = make_state_specs(exp.states, exact);
    const SuiteResult suite =
        run_method(exp, Method::tvvqe, exp.hamiltonian, exp.bond_length, specs);

    ExperimentOutput out;
    std::ostringstream csv;
    csv << "# schema=tangent_scatter v1\n";
    csv << "system,method,state,point_index,tangent_norm,log_error,phase,is_tv_start\n";
    std::ostringstream summary;
    summary << "tangent-norm vs log-error (" << exp.system << ")\n";

    std::vector<Series> series;
    for (const auto& st : suite.states) {
        Series s;
        s.label = st.label;
        s.markers_only = true;
        std::vector<double> tv_norm, tv_logerr;
        for (std::size_t k = 0; k < st.trace.size(); ++k) {
            const auto& pt = st.trace[k];
            const bool is_start = static_cast<int>(pt.iteration) == st.tv_start_iteration;
            csv << exp.system << ",tvvqe," << st.label << ',' << k << ','
                << fmt(pt.tangent_norm) << ',' << fmt(pt.log_error) << ','
                << phase_name(pt.phase) << ',' << (is_start ? 1 : 0) << '\n';
            s.x.push_back(pt.tangent_norm);
            s.y.push_back(pt.log_error);
            if (is_start) s.flagged.push_back(static_cast<int>(k));
            if (pt.phase == TracePhase::tangent || is_start) {
                tv_norm.push_back(pt.tangent_norm);
                tv_logerr.push_back(pt.log_error);
            }
        }
        double rho = std::numeric_limits<double>::quiet_NaN();
        if (tv_norm.size() >= 2) rho = spearman(tv_norm, tv_logerr);
        char line[160];
        std::snprintf(line, sizeof(line), "%-12s tangent-phase points %2zu  spearman %8.4f\n",
                      st.label.c_str(), tv_norm.size(), rho);
        summary << line;
        series.push_back(std::move(s));
    }

    const std::string csv_path = out_dir + "/" + exp.output_prefix + ".csv";
    write_file(csv_path, csv.str());
    out.files.push_back(csv_path);
    const std::string svg_path = out_dir + "/" + exp.output_prefix + ".svg";
    write_file(svg_path, svg_plot(series, exp.system + " tangent norm vs log error",
                                  "tangent norm (L1)", "log10 |E - E_exact|", true));
    out.files.push_back(svg_path);
    const std::string sum_path = out_dir + "/" + exp.output_prefix + "_summary.txt";
    write_file(sum_path, summary.str());
    out.files.push_back(sum_path);
    out.summary = summary.str();

    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cout << "[tangent_scatter] " << exp.system << " completed in " << ms << " ms\n";
    return out;
}

ExperimentOutput run_bond_scan(const Experiment& exp, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    if (exp.system != "h2") {
        throw std::runtime_error("bond_scan is defined for the h2 data grid");
    }
    std::filesystem::create_directories(out_dir);

    // fail fast listing every absent grid file
    std::vector<std::string> missing;
    for (double r : exp.scan_r) {
        const std::string f = paths::h2_file(exp.data_dir, r);
        if (!std::filesystem::exists(f)) missing.push_back(f);
    }
    if (!missing.empty()) {
        std::string msg = "bond_scan: missing grid files:";
        for (const auto& f : missing) msg += "\n  " + f;
        throw std::runtime_error(msg);
    }

    struct PointResult {
        double r = 0.0;
        std::vector<std::string> labels;
        std::vector<double> energy, exact, logerr, tv_logerr_before;
    };
    const std::size_t n_r = exp.scan_r.size();

    ExperimentOutput out;
    std::ostringstream csv;
    csv << "# schema=bond_scan v1\n";
    csv << "system,method,state,r,energy,exact_energy,log_error\n";
    std::ostringstream summary;

    std::map<std::string, std::vector<double>> mean_rows;  // method -> per-state mean
    std::vector<std::string> method_names;

    for (Method method : exp.methods) {
        std::vector<PointResult> results(n_r);
        std::atomic_size_t next{0};
        auto worker = [&]() {
            for (std::size_t i = next.fetch_add(1); i < n_r; i = next.fetch_add(1)) {
                const double r = exp.scan_r[i];
                const MolecularSystem sys = load_molecular(paths::h2_file(exp.data_dir, r));
                const std::vector<double> exact = resolve_exact_levels(sys.hamiltonian, exp.states);
                const std::vector<StateSpec> specs = make_state_specs(exp.states, exact);
                const SuiteResult suite = run_method(exp, method, sys.hamiltonian, r, specs);
                PointResult& pr = results[i];
                pr.r = r;
                for (std::size_t s = 0; s < suite.states.size(); ++s) {
                    const auto& st = suite.states[s];
                    pr.labels.push_back(st.label);
                    pr.energy.push_back(st.final_energy);
                    pr.exact.push_back(exact[s]);
                    pr.logerr.push_back(st.exact_energy
                                            ? log_error(st.final_energy, *st.exact_energy)
                                            : std::numeric_limits<double>::quiet_NaN());
                    // log error at the tangent-phase boundary, for the
                    // phase-2 regression guard
                    double before = std::numeric_limits<double>::quiet_NaN();
                    for (const auto& pt : st.trace) {
                        if (pt.iteration == st.tv_start_iteration) before = pt.log_error;
                    }
                    pr.tv_logerr_before.push_back(before);
                }
            }
        };
        const int jobs = std::max(1, exp.jobs);
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        // single collector writes in grid order
        for (const auto& pr : results) {
            for (std::size_t s = 0; s < pr.labels.size(); ++s) {
                csv << exp.system << ',' << to_string(method) << ',' << pr.labels[s] << ','
                    << fmt_short(pr.r) << ',' << fmt(pr.energy[s]) << ',' << fmt(pr.exact[s])
                    << ',' << fmt(pr.logerr[s]) << '\n';
            }
        }
        std::vector<double> means(exp.states.size(), 0.0);
        for (const auto& pr : results) {
            for (std::size_t s = 0; s < means.size(); ++s) means[s] += pr.logerr[s];
        }
        for (auto& m : means) m /= static_cast<double>(n_r);
        mean_rows[to_string(method)] = means;
        method_names.push_back(to_string(method));

        // per-method SVG: energy curves + exact
        std::vector<Series> series;
        for (std::size_t s = 0; s < exp.states.size(); ++s) {
            Series calc, ex;
            calc.label = exp.states[s].label;
            ex.label = exp.states[s].label + "(e)";
            for (const auto& pr : results) {
                calc.x.push_back(pr.r);
                calc.y.push_back(pr.energy[s]);
                ex.x.push_back(pr.r);
                ex.y.push_back(pr.exact[s]);
            }
            series.push_back(calc);
            series.push_back(ex);
        }
        const std::string svg_path =
            out_dir + "/" + exp.output_prefix + "_" + to_string(method) + ".svg";
        write_file(svg_path, svg_plot(series, "h2 bond scan (" + to_string(method) + ")",
                                      "bond length (angstrom)", "energy (hartree)", false));
        out.files.push_back(svg_path);
    }

    const std::string csv_path = out_dir + "/" + exp.output_prefix + ".csv";
    write_file(csv_path, csv.str());
    out.files.push_back(csv_path);

    // summary from the re-parsed CSV so recomputation is bit-exact
    const CsvTable table = read_csv(csv_path);
    std::map<std::string, std::pair<double, int>> acc;  // method:state -> (sum, n)
    for (const auto& row : table.rows) {
        auto& a = acc[row[1] + ":" + row[2]];
        a.first += std::stod(row[6]);
        a.second += 1;
    }
    summary << "mean log error over the bond grid (" << n_r << " points)\n";
    summary << "method      ";
    for (const auto& st : exp.states) {
        char cell[32];
        std::snprintf(cell, sizeof(cell), " %12s", st.label.c_str());
        summary << cell;
    }
    summary << '\n';
    for (const auto& m : method_names) {
        char cell[32];
        std::snprintf(cell, sizeof(cell), "%-12s", m.c_str());
        summary << cell;
        for (const auto& st : exp.states) {
            const auto& a = acc[m + ":" + st.label];
            std::snprintf(cell, sizeof(cell), " %12.4f", a.first / a.second);
            summary << cell;
        }
        summary << '\n';
    }

    const std::string sum_path = out_dir + "/" + exp.output_prefix + "_summary.txt";
    write_file(sum_path, summary.str());
    out.files.push_back(sum_path);
    out.summary = summary.str();

    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cout << "[bond_scan] " << n_r << " points x " << exp.methods.size()
              << " methods completed in " << ms << " ms\n";
    return out;
}

GradientReport validate_gradients(const PauliSum& hamiltonian, const UccAnsatz& ansatz,
                                  int draws, double fdm_step, double bound, std::uint64_t seed) {
    GradientReport report;
    const int d = ansatz.parameter_count();
    report.max_deviation.assign(d, 0.0);
    if (d == 0) {
        report.pass = true;
        report.text = "no parameters; empty report\n";
        return report;
    }

    StateProblem problem;
    problem.hamiltonian = hamiltonian;
    problem.ansatz = ansatz;
    std::string ref(static_cast<std::size_t>(ansatz.qubit_count()), '0');
    problem.initial_state = StateVector::basis_state(ref);
    problem.constraint.number_weight = 0.0;
    problem.constraint.sz_weight = 0.0;
    problem.finalize();
    // A generic superposition initial state exercises every slot path.
    {
        StateVector s(ansatz.qubit_count());
        RestartStream rs(seed ^ 0xabcdef12345ULL);
        for (auto& a : s.amplitudes()) {
            a = std::complex<double>(rs.uniform(-1, 1), rs.uniform(-1, 1));
        }
        const double n = s.norm();
        for (auto& a : s.amplitudes()) a /= n;
        problem.initial_state = s;
    }

    RestartStream stream(seed);
    const Objective energy = [&](std::span<const double> theta) {
        return trial_energy(problem, theta);
    };
    std::vector<double> theta(d, 0.0);
    for (int it = 0; it < draws; ++it) {
        for (auto& t : theta) t = stream.uniform(-3.141592653589793, 3.141592653589793);
        const std::vector<double> ga = analytic_gradient(problem, theta);
        const std::vector<double> gf = fdm_gradient(energy, theta, fdm_step);
        for (int m = 0; m < d; ++m) {
            report.max_deviation[m] = std::max(report.max_deviation[m],
                                               std::abs(ga[m] - gf[m]));
        }
    }
    report.worst = *std::max_element(report.max_deviation.begin(), report.max_deviation.end());
    report.pass = report.worst < bound;

    std::ostringstream txt;
    txt << "analytic vs central-difference gradients, " << draws << " draws, step "
        << fmt_short(fdm_step) << "\n";
    txt << "variable  max|analytic - fdm|\n";
    for (int m = 0; m < d; ++m) {
        char line[80];
        std::snprintf(line, sizeof(line), "%8d  %.3e\n", m, report.max_deviation[m]);
        txt << line;
    }
    txt << "worst " << fmt_short(report.worst) << (report.pass ? "  PASS" : "  FAIL")
        << " (bound " << fmt_short(bound) << ")\n";
    report.text = txt.str();
    return report;
}

}  // namespace tvvqe
