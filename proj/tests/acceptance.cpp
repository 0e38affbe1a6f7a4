// acceptance: one PASS/FAIL line per acceptance criterion, tolerances fixed here

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lindtherm/ensemble.hpp"
#include "lindtherm/qome.hpp"
#include "oracles.hpp"

using namespace lindtherm;

namespace {

// A printed table entry, its value and one unit of its last printed digit.
struct Printed {
    double value;
    double unit;
};

Printed printed(const std::string& s) {
    const auto dot = s.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
    return {std::stod(s), std::pow(10.0, -decimals)};
}

// Values within one unit of the last digit; the small slack absorbs decimal representation.
bool within_last_digit(double computed, const std::string& s) {
    const Printed p = printed(s);
    return std::abs(computed - p.value) <= p.unit * (1.0 + 1e-9);
}

struct TableRow {
    std::size_t n;
    const char* lba_p;
    const char* lba_q;
    const char* qome_p;
    const char* qome_q;
};

const TableRow kTable[] = {
    {1, "0.04760", "0.09520", "0.04760", "0.09520"},
    {2, "0.04760", "0.07493", "0.04760", "0.09520"},
    {3, "0.21406", "0.13016", "0.21406", "0.42813"},
    {4, "0.21406", "0.09589", "0.21406", "0.42813"},
    {5, "0.21406", "0.07560", "0.21406", "0.42813"},
    {6, "0.22800", "0.06989", "0.22800", "0.45600"},
    {7, "0.22800", "0.05833", nullptr, nullptr},
    {8, "0.22800", "0.05058", nullptr, nullptr},
    {9, "0.22800", "0.04733", nullptr, nullptr},
    {10, "0.22800", "0.04172", nullptr, nullptr},
    {11, "0.22800", "0.03809", nullptr, nullptr},
    {12, "0.22800", "0.03573", nullptr, nullptr},
    {13, "0.22800", "0.03245", nullptr, nullptr},
};

const TableRow kLarge[] = {
    {100, "0.23104", "0.004433", nullptr, nullptr},
    {1000, "0.23106", "0.0004455", nullptr, nullptr},
    {10000, "0.23106", "0.00004457", nullptr, nullptr},
    {100000, "0.23106", "0.000004458", nullptr, nullptr},
};

constexpr double kEquivalenceEntryTol = 1e-10;
constexpr double kEquivalenceTimeTol = 1e-8;
constexpr double kDetailedBalanceTol = 1e-10;
constexpr double kColumnSumTol = 1e-10;
constexpr double kSymmetrizationTol = 1e-12;
constexpr double kGibbsKernelTol = 1e-10;
constexpr double kKroneckerTol = 1e-10;
constexpr double kDecouplingTol = 1e-12;
constexpr double kUlpBudget = 4.0; // "exactly as computed": a few roundings of the closed form
constexpr double kTraceTol = 1e-10;
constexpr double kHermitianTol = 1e-10;
constexpr double kPositivityTol = -1e-9;
constexpr double kGibbsDistanceTol = 1e-8;

struct Outcome {
    bool pass{true};
    std::string detail;
    void fail(const std::string& why) {
        if (pass)
            detail = why;
        pass = false;
    }
};

EnsembleMember spin_member(double field) {
    auto [s, d] = free_spin_system(field);
    return {s, d, 1};
}

EnsembleSpec modulated_spec(std::size_t n) {
    EnsembleSpec spec;
    for (double g : modulated_fields(n))
        spec.members.push_back(spin_member(g));
    return spec;
}

LiouvillianSpectrum qome_for_fields(const std::vector<double>& fields) {
    const auto sys = free_spins_hamiltonian(fields);
    const auto spec = diagonalize(sys, -1.0, false);
    return qome_spectrum(build_liouvillian(spec, dipole_data(sys, spec), 1.0));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

Outcome criterion1() {
    Outcome o;
    double worst = 0.0;
    for (const auto& row : kTable) {
        const auto fields = modulated_fields(row.n);
        const auto a = free_spins_times(fields, 1.0, 1.0);
        const auto num = numeric_ensemble_times(modulated_spec(row.n));
        const std::pair<double, const char*> checks[] = {
            {a.tau_P, row.lba_p}, {a.tau_Q, row.lba_q}, {num.tau_P, row.lba_p}, {num.tau_Q, row.lba_q}};
        for (const auto& [v, s] : checks) {
            worst = std::max(worst, std::abs(v - printed(s).value) / printed(s).unit);
            if (!within_last_digit(v, s))
                o.fail("N=" + std::to_string(row.n) + ": " + fmt(v) + " vs " + s);
        }
    }
    if (o.pass)
        o.detail = "worst deviation " + fmt(worst) + " last-digit units";
    return o;
}

Outcome criterion2() {
    Outcome o;
    double worst = 0.0;
    for (const auto& row : kLarge) {
        const auto t = free_spins_times(modulated_fields(row.n), 1.0, 1.0);
        for (const auto& [v, s] : {std::pair{t.tau_P, row.lba_p}, std::pair{t.tau_Q, row.lba_q}}) {
            worst = std::max(worst, std::abs(v - printed(s).value) / printed(s).unit);
            if (!within_last_digit(v, s))
                o.fail("N=" + std::to_string(row.n) + ": " + fmt(v) + " vs " + s);
        }
    }
    if (o.pass)
        o.detail = "worst deviation " + fmt(worst) + " last-digit units";
    return o;
}

Outcome criterion3() {
    Outcome o;
    double worst = 0.0;
    for (const auto& row : kTable) {
        if (!row.qome_p)
            continue;
        const auto s = qome_for_fields(modulated_fields(row.n));
        if (!s.tau_P || !s.tau_Q) {
            o.fail("N=" + std::to_string(row.n) + ": missing time");
            continue;
        }
        for (const auto& [v, str] : {std::pair{*s.tau_P, row.qome_p}, std::pair{*s.tau_Q, row.qome_q}}) {
            worst = std::max(worst, std::abs(v - printed(str).value) / printed(str).unit);
            if (!within_last_digit(v, str))
                o.fail("N=" + std::to_string(row.n) + ": " + fmt(v) + " vs " + str);
        }
    }
    if (o.pass)
        o.detail = "N=1..6, worst deviation " + fmt(worst) + " last-digit units";
    return o;
}

Outcome criterion4() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    double worst_entry = 0.0, worst_time = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
        const int dim = 3 + draw % 2;
        VectorXd e(dim);
        do {
            for (auto& x : e)
                x = u(rng);
            std::sort(e.begin(), e.end());
        } while (!oracle::well_separated(e, 0.05));
        std::array<MatrixXcd, 3> ops;
        for (auto& op : ops)
            op = oracle::random_hermitian(dim, rng, 0.5);
        const auto spec = EnergySpectrum::from_levels(e, default_degeneracy_tol(e));
        const auto deg = degeneracy_report(e, default_degeneracy_tol(e));
        if (deg.has_level_degeneracy || deg.has_gap_degeneracy)
            o.fail("draw " + std::to_string(draw) + " is degenerate");
        const auto dip = dipole_data_from_operators(ops, spec, 1.0);
        const double beta = 0.5 + 0.15 * draw;

        const auto rates = thermal_rates(spec, dip, beta);
        const auto L = build_liouvillian(spec, dip, beta);
        const double entry = (L.dense() - lba_liouvillian(rates, e)).cwiseAbs().maxCoeff();
        worst_entry = std::max(worst_entry, entry);
        if (entry > kEquivalenceEntryTol)
            o.fail("draw " + std::to_string(draw) + ": entry deviation " + fmt(entry));

        const auto t = thermalization_times(pauli_matrix(rates, spec), rates);
        const auto s = qome_spectrum(L);
        if (!s.tau_P || !s.tau_Q) {
            o.fail("draw " + std::to_string(draw) + ": missing QOME time");
            continue;
        }
        const double dp = std::abs(*s.tau_P - t.tau_P) / t.tau_P;
        const double dq = std::abs(*s.tau_Q - t.tau_Q) / t.tau_Q;
        worst_time = std::max({worst_time, dp, dq});
        if (dp > kEquivalenceTimeTol || dq > kEquivalenceTimeTol)
            o.fail("draw " + std::to_string(draw) + ": time deviation " + fmt(std::max(dp, dq)));
    }
    if (o.pass)
        o.detail = "10 draws, max entry deviation " + fmt(worst_entry) + ", max time deviation " + fmt(worst_time);
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::size_t previous = 0;
    std::string counts;
    for (std::size_t n : {2u, 3u}) {
        const std::vector<double> fields(n, 1.0);
        const auto s = qome_for_fields(fields);
        counts += (counts.empty() ? "" : ", ") + std::string("N=") + std::to_string(n) + ": " +
                  std::to_string(s.zero_multiplicity);
        if (s.zero_multiplicity <= 1)
            o.fail("QOME zero multiplicity " + std::to_string(s.zero_multiplicity) + " at N=" + std::to_string(n));
        if (s.zero_multiplicity <= previous)
            o.fail("multiplicity does not grow from N=2 to N=3");
        previous = s.zero_multiplicity;

        std::vector<PauliMatrix> members;
        for (double g : fields) {
            const auto m = spin_member(g);
            members.push_back(pauli_matrix(thermal_rates(m.spectrum, m.dipoles, 1.0), m.spectrum));
        }
        const auto composed = compose_rate_matrix(members);
        if (zero_multiplicity(composed) != 1)
            o.fail("LBA stationary state not unique at N=" + std::to_string(n));
        EnsembleSpec spec;
        spec.members.push_back({spin_member(1.0).spectrum, spin_member(1.0).dipoles, n});
        try {
            numeric_ensemble_times(spec);
        } catch (const Error& e) {
            o.fail(std::string("numeric LBA path: ") + e.what());
        }
    }
    if (o.pass)
        o.detail = "QOME zero multiplicities " + counts + "; LBA kernel dimension 1";
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 3.0), w(0.1, 2.0);
    auto random_member = [&](int dim) {
        VectorXd e(dim);
        for (auto& x : e)
            x = u(rng);
        std::sort(e.begin(), e.end());
        EnsembleMember m;
        m.spectrum = EnergySpectrum::from_levels(e, default_degeneracy_tol(e));
        m.dipoles.squared = MatrixXd::Zero(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                m.dipoles.squared(a, b) = m.dipoles.squared(b, a) = w(rng);
        for (auto& amp : m.dipoles.amplitudes)
            amp = MatrixXcd::Zero(dim, dim);
        return m;
    };

    for (int draw = 0; draw < 10; ++draw) {
        const auto m = random_member(2 + draw % 3);
        const double beta = 0.5 + 0.2 * draw;
        const auto rates = thermal_rates(m.spectrum, m.dipoles, beta);
        const auto pm = pauli_matrix(rates, m.spectrum);
        const VectorXd& e = m.spectrum.energies;
        const Eigen::Index M = e.size();
        const double scale = pm.generator.cwiseAbs().maxCoeff();
        for (Eigen::Index a = 0; a < M; ++a)
            for (Eigen::Index b = 0; b < M; ++b) {
                const double lhs = rates.transitions(a, b) * std::exp(-beta * e(b));
                const double rhs = rates.transitions(b, a) * std::exp(-beta * e(a));
                if (std::abs(lhs - rhs) > kDetailedBalanceTol * std::max(std::abs(lhs), std::abs(rhs)))
                    o.fail("detailed balance");
            }
        if (pm.generator.colwise().sum().cwiseAbs().maxCoeff() > kColumnSumTol)
            o.fail("column sums");
        VectorXd p(M);
        for (Eigen::Index a = 0; a < M; ++a)
            p(a) = std::exp(beta * e(a) / 2);
        MatrixXd sym = -rates.symmetric;
        sym.diagonal() += rates.escape;
        const MatrixXd sim = p.asDiagonal() * pm.generator * p.cwiseInverse().asDiagonal();
        if ((sim - sym).cwiseAbs().maxCoeff() > kSymmetrizationTol * scale)
            o.fail("symmetrization identity");
        if (pm.eigenvalues.minCoeff() < -kSymmetrizationTol * scale)
            o.fail("negative eigenvalue of A");
        Eigen::EigenSolver<MatrixXd> es(pm.generator, false);
        if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > kSymmetrizationTol * scale)
            o.fail("complex eigenvalue of A");
        const VectorXd gibbs = gibbs_state(m.spectrum, beta);
        if ((pm.stationary - gibbs).cwiseAbs().maxCoeff() > kGibbsKernelTol ||
            (pm.generator * gibbs).cwiseAbs().maxCoeff() > kGibbsKernelTol * scale)
            o.fail("Gibbs kernel");
    }

    for (int n = 1; n <= 3; ++n)
        for (int draw = 0; draw < 3; ++draw) {
            std::vector<PauliMatrix> pms;
            std::vector<std::vector<double>> spectra;
            for (int i = 0; i < n; ++i) {
                const auto m = random_member(2 + (draw + i) % 3);
                pms.push_back(pauli_matrix(thermal_rates(m.spectrum, m.dipoles, 1.0), m.spectrum));
                spectra.emplace_back(pms.back().eigenvalues.data(),
                                     pms.back().eigenvalues.data() + pms.back().eigenvalues.size());
            }
            const auto c = compose_rate_matrix(pms);
            const auto sums = oracle::sum_spectrum(spectra);
            for (std::size_t k = 0; k < sums.size(); ++k)
                if (std::abs(c.eigenvalues(k) - sums[k]) > kKroneckerTol * sums.back())
                    o.fail("Kronecker spectral identity");
        }

    double worst_ulps = 0.0;
    {
        auto m = random_member(3);
        VectorXd b = thermal_rates(m.spectrum, m.dipoles, 1.0).escape;
        std::sort(b.begin(), b.end());
        for (std::size_t n = 1; n <= 20; ++n) {
            m.count = n;
            const auto t = ensemble_times(EnsembleSpec{{m}, 1.0});
            const double product = t.tau_Q * ((2.0 * n - 1.0) * b(0) + b(1));
            const double ulps = std::abs(product - 2.0) / (2.0 * std::numeric_limits<double>::epsilon());
            worst_ulps = std::max(worst_ulps, ulps);
            if (ulps > kUlpBudget)
                o.fail("decoherence closed form off by " + fmt(ulps) + " ulp at N=" + std::to_string(n));
        }
        const auto spin = spin_member(1.0);
        for (std::size_t n = 1; n <= 20; ++n) {
            const std::vector<double> fields(n, 1.0);
            const auto t = free_spins_times(fields, 1.0, 1.0);
            const auto r = thermal_rates(spin.spectrum, spin.dipoles, 1.0);
            VectorXd bs = r.escape;
            std::sort(bs.begin(), bs.end());
            const double product = t.tau_Q * ((2.0 * n - 1.0) * bs(0) + bs(1));
            const double ulps = std::abs(product - 2.0) / (2.0 * std::numeric_limits<double>::epsilon());
            worst_ulps = std::max(worst_ulps, ulps);
            if (ulps > kUlpBudget)
                o.fail("free-spin decoherence closed form off by " + fmt(ulps) + " ulp at N=" + std::to_string(n));
        }
    }

    const auto a = spin_member(1.0), b = spin_member(1.3);
    const auto product = verify_product_basis_decoupling(a, b);
    if (!product.holds || product.max_deviation > kDecouplingTol || product.max_escape_deviation > kDecouplingTol)
        o.fail("product-basis decoupling");
    const std::vector<double> g{1.0, 0.5};
    const auto sys = free_spins_hamiltonian(g);
    const auto spec4 = diagonalize(sys);
    const EnsembleMember four{spec4, dipole_data(sys, spec4), 1};
    const auto bell = verify_product_basis_decoupling(four, four, 1.0, PairBasis::bell);
    if (bell.holds || !bell.mixed_form_deviation || *bell.mixed_form_deviation > kDecouplingTol)
        o.fail("Bell-basis counterexample");

    if (o.pass)
        o.detail = "closed-form decoherence within " + fmt(worst_ulps) + " ulp; Bell basis deviates by " +
                   fmt(bell.max_deviation) + " from the decoupled form, " +
                   fmt(*bell.mixed_form_deviation) + " from the mixed form";
    return o;
}

Outcome criterion7() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 3.0), w(0.1, 2.0);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const int dim = 2 + draw % 3;
        VectorXd e(dim);
        do {
            for (auto& x : e)
                x = u(rng);
            std::sort(e.begin(), e.end());
        } while ((e.tail(dim - 1) - e.head(dim - 1)).minCoeff() < 0.05);
        MatrixXd d = MatrixXd::Zero(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                d(a, b) = d(b, a) = w(rng);
        const auto spec = EnergySpectrum::from_levels(e, default_degeneracy_tol(e));
        DipoleData dip;
        dip.squared = d;
        for (auto& amp : dip.amplitudes)
            amp = MatrixXcd::Zero(dim, dim);
        const double beta = 0.5 + 0.1 * draw;
        const auto rates = thermal_rates(spec, dip, beta);
        const auto pm = pauli_matrix(rates, spec);
        const auto times = thermalization_times(pm, rates);
        const MatrixXcd mu = decoherence_rates(rates, e);
        const MatrixXcd rho0 = oracle::random_density(dim, rng);
        for (double t : {0.0, 0.1 * times.tau, times.tau, 5 * times.tau}) {
            const MatrixXcd rho = evolve(pm, mu, rho0, t);
            if (std::abs(rho.trace() - cplx(1.0)) > kTraceTol)
                o.fail("trace at draw " + std::to_string(draw));
            if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
                o.fail("Hermiticity at draw " + std::to_string(draw));
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < kPositivityTol)
                o.fail("positivity at draw " + std::to_string(draw));
        }
        const MatrixXcd late = evolve(pm, mu, rho0, 50 * times.tau);
        const MatrixXcd gibbs = gibbs_state(spec, beta).cast<cplx>().asDiagonal();
        const double dist = (late - gibbs).cwiseAbs().maxCoeff();
        worst = std::max(worst, dist);
        if (dist > kGibbsDistanceTol)
            o.fail("Gibbs distance " + fmt(dist) + " at draw " + std::to_string(draw));
    }
    if (o.pass)
        o.detail = "20 draws, largest distance from Gibbs at 50 tau " + fmt(worst);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Modulated-field table: LBA rows N=1..13, analytic and numeric", criterion1},
        {"Modulated-field table: large-N analytic rows", criterion2},
        {"Modulated-field table: QOME rows", criterion3},
        {"QOME equals the LBA generator for nondegenerate systems", criterion4},
        {"Uniform-field steady-state multiplicity", criterion5},
        {"Property suite", criterion6},
        {"Evolution checks", criterion7},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %zu: %s (%s) [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first, o.detail.c_str(), secs);
        if (!o.pass)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
