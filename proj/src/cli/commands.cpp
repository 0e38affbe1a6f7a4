// commands.cpp: analysis drivers behind the analyze, sweep and table1 subcommands

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>

#include "lindtherm/cli.hpp"
#include "lindtherm/ensemble.hpp"
#include "lindtherm/lba.hpp"
#include "lindtherm/qome.hpp"

namespace lindtherm::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> fields_for(const RunConfig& cfg, std::size_t n) {
    if (cfg.family == Family::free_spins_uniform)
        return std::vector<double>(n, cfg.field);
    return modulated_fields(n, cfg.law.offset, cfg.law.amplitude, cfg.law.phase_step);
}

double span_of(const VectorXd& e) { return e.size() ? e.maxCoeff() - e.minCoeff() : 0.0; }

// Eigendecomposition with the tolerance given relative to the spectral span.
EnergySpectrum diagonalize_rel(const QubitSystem& sys, double rel, bool require_nondegenerate) {
    EnergySpectrum spec = diagonalize(sys, 0.0, false);
    spec.degeneracy_tol = rel * span_of(spec.energies);
    if (require_nondegenerate)
        return diagonalize(sys, spec.degeneracy_tol, true);
    return spec;
}

QubitSystem replicate(const QubitSystem& single, std::size_t n) {
    const std::size_t k = single.num_qubits;
    QubitSystem out;
    out.num_qubits = k * n;
    out.gamma = single.gamma;
    const Eigen::Index d = Eigen::Index{1} << k;
    const Eigen::Index dim = Eigen::Index{1} << (k * n);
    out.hamiltonian = MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index left = Eigen::Index{1} << (k * i);
        const Eigen::Index right = dim / (left * d);
        for (Eigen::Index l = 0; l < left; ++l)
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b)
                    for (Eigen::Index r = 0; r < right; ++r)
                        out.hamiltonian((l * d + a) * right + r, (l * d + b) * right + r) +=
                            single.hamiltonian(a, b);
    }
    return out;
}

std::size_t qubits_per_system(const RunConfig& cfg) {
    return cfg.family == Family::custom_hamiltonian ? cfg.custom->num_qubits : 1;
}

void require_cap(std::size_t bits, std::size_t cap, const std::string& what) {
    if (bits >= 63 || (std::size_t{1} << bits) > cap)
        throw Error(ErrorKind::CapExceeded,
                    what + " dimension 2^" + std::to_string(bits) + " exceeds the cap of " +
                        std::to_string(cap));
}

void append_warning(std::string& w, const std::string& flag) {
    if (!w.empty())
        w += ";";
    w += flag;
}

EnsembleSpec spin_ensemble(const std::vector<double>& fields, double beta, double gamma,
                           double rel) {
    EnsembleSpec spec;
    spec.beta = beta;
    for (double g : fields) {
        auto same = std::find_if(spec.members.begin(), spec.members.end(), [&](const auto& m) {
            return m.spectrum.energies(1) == g;
        });
        if (same != spec.members.end()) {
            ++same->count;
            continue;
        }
        if (!(g > 0.0))
            throw Error(ErrorKind::NonPositiveField, "every Gamma_i must be positive");
        const std::vector<double> one{g};
        const QubitSystem sys = free_spins_hamiltonian(one, gamma);
        EnergySpectrum s = diagonalize_rel(sys, rel, true);
        DipoleData d = dipole_data(sys, s);
        // Keep the analytic level as the grouping key; the numeric one differs in the last bit.
        EnsembleMember m{std::move(s), std::move(d), 1};
        spec.members.push_back(std::move(m));
        spec.members.back().spectrum.energies(1) = g;
        spec.members.back().spectrum.energies(0) = -g;
    }
    return spec;
}

Record run_lba_analytic(const RunConfig& cfg, std::size_t n) {
    Record rec;
    rec.n = n;
    rec.method = Method::lba_analytic;
    const auto start = Clock::now();
    EnsembleTimes t;
    if (cfg.family == Family::custom_hamiltonian) {
        EnergySpectrum s = diagonalize_rel(*cfg.custom, cfg.tol.degeneracy_rel, true);
        DipoleData d = dipole_data(*cfg.custom, s);
        EnsembleSpec spec{{EnsembleMember{std::move(s), std::move(d), n}}, cfg.beta};
        t = ensemble_times(spec);
    } else {
        t = free_spins_times(fields_for(cfg, n), cfg.beta, cfg.gamma);
    }
    if (cfg.timing)
        rec.wall_s = seconds_since(start);
    rec.tau_P = t.tau_P;
    rec.tau_Q = t.tau_Q;
    rec.tau = t.tau;
    return rec;
}

Record run_lba_numeric(const RunConfig& cfg, std::size_t n) {
    Record rec;
    rec.n = n;
    rec.method = Method::lba_numeric;
    require_cap(qubits_per_system(cfg) * n, cfg.numeric_cap, "product space");
    NumericEnsembleOptions opts;
    opts.lanczos.seed = cfg.seed;
    const auto start = Clock::now();
    EnsembleSpec spec;
    if (cfg.family == Family::custom_hamiltonian) {
        EnergySpectrum s = diagonalize_rel(*cfg.custom, cfg.tol.degeneracy_rel, true);
        DipoleData d = dipole_data(*cfg.custom, s);
        spec = EnsembleSpec{{EnsembleMember{std::move(s), std::move(d), n}}, cfg.beta};
    } else {
        spec = spin_ensemble(fields_for(cfg, n), cfg.beta, cfg.gamma, cfg.tol.degeneracy_rel);
    }
    const NumericEnsembleTimes t = numeric_ensemble_times(spec, opts);
    if (cfg.timing)
        rec.wall_s = seconds_since(start);
    rec.tau_P = t.tau_P;
    rec.tau_Q = t.tau_Q;
    rec.tau = t.tau;
    rec.zero_multiplicity = 1;
    return rec;
}

struct QomeOutcome {
    LiouvillianSpectrum spectrum;
    DegeneracyReport degeneracy;
};

QomeOutcome solve_qome(const QubitSystem& composite, double beta, const Tolerances& tol,
                       std::size_t cap) {
    EnergySpectrum spec = diagonalize_rel(composite, tol.degeneracy_rel, false);
    const DipoleData dip = dipole_data(composite, spec);
    LiouvillianOptions opts;
    opts.energy_tol = tol.energy_rel * span_of(spec.energies);
    opts.cap = cap;
    const Liouvillian L = build_liouvillian(spec, dip, beta, opts);
    return {qome_spectrum(L, tol.tol_zero, tol.tol_imag), degeneracy_report(spec.energies, opts.energy_tol)};
}

Record run_qome(const RunConfig& cfg, std::size_t n) {
    Record rec;
    rec.n = n;
    rec.method = Method::qome;
    const std::size_t bits = qubits_per_system(cfg) * n;
    require_cap(2 * bits, cfg.qome_cap, "Liouvillian");
    const QubitSystem composite = cfg.family == Family::custom_hamiltonian
                                      ? replicate(*cfg.custom, n)
                                      : free_spins_hamiltonian(fields_for(cfg, n), cfg.gamma);
    const auto start = Clock::now();
    const QomeOutcome out = solve_qome(composite, cfg.beta, cfg.tol, cfg.qome_cap);
    if (cfg.timing)
        rec.wall_s = seconds_since(start);
    rec.tau_P = out.spectrum.tau_P;
    rec.tau_Q = out.spectrum.tau_Q;
    if (rec.tau_P && rec.tau_Q)
        rec.tau = std::max(*rec.tau_P, *rec.tau_Q);
    rec.zero_multiplicity = out.spectrum.zero_multiplicity;
    if (out.degeneracy.has_level_degeneracy)
        append_warning(rec.warnings, "level_degeneracy");
    if (out.spectrum.zero_multiplicity > 1)
        append_warning(rec.warnings, "multiple_steady_states");
    return rec;
}

Record run_one(const RunConfig& cfg, std::size_t n, Method m) {
    switch (m) {
    case Method::lba_analytic: return run_lba_analytic(cfg, n);
    case Method::lba_numeric: return run_lba_numeric(cfg, n);
    case Method::qome: return run_qome(cfg, n);
    }
    return {};
}

} // namespace

std::vector<Record> cmd_analyze(const RunConfig& config) {
    std::vector<Record> out;
    for (std::size_t n : config.sizes)
        for (Method m : config.methods)
            out.push_back(run_one(config, n, m));
    return out;
}

std::vector<Record> cmd_sweep(const RunConfig& config) {
    if (!config.sweep || config.sweep->values.empty())
        throw Error(ErrorKind::ConfigError, "sweep needs a nonempty grid");
    std::vector<double> grid = config.sweep->values;
    std::stable_sort(grid.begin(), grid.end());

    std::vector<std::vector<Record>> per_point(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    const auto count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < count; ++p) {
        try {
            RunConfig point = config;
            if (config.sweep->parameter == "beta")
                point.beta = grid[p];
            else
                point.field = grid[p];
            per_point[p] = cmd_analyze(point);
            for (auto& r : per_point[p])
                r.grid_value = grid[p];
        } catch (...) {
            errors[p] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<Record> out;
    for (auto& v : per_point)
        for (auto& r : v)
            out.push_back(std::move(r));
    return out;
}

std::vector<Table1Row> cmd_table1(const Table1Options& options) {
    RunConfig cfg;
    cfg.family = Family::free_spins_modulated;
    cfg.tol.energy_rel = options.energy_rel;
    cfg.qome_cap = options.qome_cap;
    cfg.timing = options.timing;

    std::vector<Table1Row> rows;
    auto analytic = [&](std::size_t n) {
        Table1Row row;
        row.n = n;
        const EnsembleTimes t = free_spins_times(modulated_fields(n), 1.0, 1.0);
        row.lba_tauP = t.tau_P;
        row.lba_tauQ = t.tau_Q;
        return row;
    };

    for (std::size_t n = 1; n <= 13; ++n) {
        Table1Row row = analytic(n);
        if (n <= options.max_numeric_n) {
            const Record r = run_lba_numeric(cfg, n);
            row.lba_num_tauP = r.tau_P;
            row.lba_num_tauQ = r.tau_Q;
            row.lba_cpu_s = r.wall_s;
        }
        if (n <= options.max_qome_n && 2 * n < 63 && (std::size_t{1} << (2 * n)) <= options.qome_cap) {
            try {
                const Record r = run_qome(cfg, n);
                row.qome_tauP = r.tau_P;
                row.qome_tauQ = r.tau_Q;
                row.qome_cpu_s = r.wall_s;
                row.warnings = r.warnings;
            } catch (const Error& e) {
                const EnergySpectrum spec = diagonalize_rel(
                    free_spins_hamiltonian(modulated_fields(n)), cfg.tol.degeneracy_rel, false);
                if (degeneracy_report(spec.energies, cfg.tol.energy_rel * span_of(spec.energies))
                        .has_level_degeneracy)
                    append_warning(row.warnings, "level_degeneracy");
                append_warning(row.warnings, std::string(to_string(e.kind())));
            }
        }
        rows.push_back(std::move(row));
    }
    for (std::size_t n : {100u, 1000u, 10000u, 100000u})
        rows.push_back(analytic(n));
    return rows;
}

} // namespace lindtherm::cli
