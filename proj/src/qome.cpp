// qome.cpp: quantum optical master equation Liouvillian and its comparison with the LBA

#include "lindtherm/qome.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lindtherm {

namespace {

std::vector<int> class_ids(std::span<const double> values, double tol) {
    std::vector<int> ids(values.size(), -1);
    int next = 0;
    for (const auto& cls : equality_classes(values, tol)) {
        for (std::size_t i : cls)
            ids[i] = next;
        ++next;
    }
    return ids;
}

} // namespace

LiouvillianTerms liouvillian_terms(const EnergySpectrum& spec, const DipoleData& dip, double beta,
                                   double energy_tol) {
    const Eigen::Index M = spec.energies.size();
    if (dip.dim() != static_cast<std::size_t>(M))
        throw Error(ErrorKind::DimensionMismatch, "dipole and spectrum sizes differ");
    for (const auto& d : dip.amplitudes)
        if (d.rows() != M || d.cols() != M)
            throw Error(ErrorKind::DimensionMismatch, "dipole amplitudes have the wrong size");

    LiouvillianTerms t;
    t.levels = M;
    t.energies = spec.energies;
    t.gamma = dip.gamma;
    const double tol = energy_tol < 0.0 ? default_degeneracy_tol(spec.energies) : energy_tol;
    t.level_class = class_ids(std::span<const double>(spec.energies.data(), M), tol);

    std::vector<double> gaps(static_cast<std::size_t>(M * M));
    for (Eigen::Index a = 0; a < M; ++a)
        for (Eigen::Index b = 0; b < M; ++b)
            gaps[a * M + b] = spec.energies(a) - spec.energies(b);
    t.pair_class = class_ids(gaps, tol);

    // Levels of one class count as equal, so the weight between them is the dE -> 0 limit.
    t.weight = MatrixXd::Zero(M, M);
    for (Eigen::Index q = 0; q < M; ++q)
        for (Eigen::Index m = 0; m < M; ++m)
            if (t.level_class[q] != t.level_class[m])
                t.weight(q, m) = transition_weight(spec.energies(q), spec.energies(m), beta);

    t.amplitudes = dip.amplitudes;
    t.escape = MatrixXcd::Zero(M, M);
    const MatrixXcd w = t.weight.cast<cplx>();
    for (const auto& d : dip.amplitudes)
        t.escape.noalias() += d.transpose() * w.cwiseProduct(d.conjugate());
    t.escape *= dip.gamma;
    return t;
}

MatrixXcd Liouvillian::dense() const {
    MatrixXcd L = MatrixXcd::Zero(dim(), dim());
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const auto& idx = sectors[s];
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                L(idx[r], idx[c]) = blocks[s](r, c);
    }
    return L;
}

namespace {

void check_cap(Eigen::Index levels, std::size_t cap) {
    const auto dim = static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels);
    if (dim > cap)
        throw Error(ErrorKind::CapExceeded, "Liouvillian dimension " + std::to_string(dim) +
                                                " exceeds the cap of " + std::to_string(cap));
}

} // namespace

Liouvillian build_liouvillian(const EnergySpectrum& spec, const DipoleData& dip, double beta,
                              const LiouvillianOptions& options) {
    check_cap(spec.energies.size(), options.cap);
    const LiouvillianTerms terms = liouvillian_terms(spec, dip, beta, options.energy_tol);
    Liouvillian L;
    L.levels = terms.levels;
    L.energy_tol =
        options.energy_tol < 0.0 ? default_degeneracy_tol(spec.energies) : options.energy_tol;
    L.sectors = kernels::liouvillian_sectors(terms);
    L.blocks = options.parallel ? kernels::assemble_blocks_omp(terms, L.sectors)
                                : kernels::assemble_blocks_serial(terms, L.sectors);
    return L;
}

MatrixXcd build_liouvillian_reference(const EnergySpectrum& spec, const DipoleData& dip,
                                      double beta, double energy_tol) {
    return kernels::assemble_liouvillian_serial(liouvillian_terms(spec, dip, beta, energy_tol));
}

LiouvillianSpectrum classify_spectrum(VectorXcd eigenvalues, double tol_zero, double tol_imag) {
    LiouvillianSpectrum out;
    out.tol_zero = tol_zero;
    out.tol_imag = tol_imag;
    out.eigenvalues = std::move(eigenvalues);
    const VectorXcd& ev = out.eigenvalues;
    out.scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    const double zero_thr = tol_zero * out.scale;
    const double imag_thr = tol_imag * out.scale;

    double best_real = std::numeric_limits<double>::infinity();
    double best_osc = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double mod = std::abs(ev(k));
        if (mod < zero_thr || out.scale == 0.0) {
            ++out.zero_multiplicity;
            continue;
        }
        if (std::abs(ev(k).imag()) < imag_thr)
            best_real = std::min(best_real, mod);
        else
            best_osc = std::min(best_osc, std::abs(ev(k).real()));
    }
    if (!std::isfinite(best_real))
        throw Error(ErrorKind::NoDissipativeEigenvalue, "no real nonzero eigenvalue");
    out.tau_P = 1.0 / best_real;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double mod = std::abs(ev(k));
        if (mod >= zero_thr && std::abs(ev(k).imag()) < imag_thr &&
            std::abs(mod - best_real) <= 1e-8 * out.scale)
            ++out.tau_P_degeneracy;
    }
    if (std::isfinite(best_osc))
        out.tau_Q = best_osc <= zero_thr ? std::numeric_limits<double>::infinity() : 1.0 / best_osc;
    return out;
}

LiouvillianSpectrum qome_spectrum(const Liouvillian& L, double tol_zero, double tol_imag,
                                  bool parallel) {
    const auto parts = parallel ? kernels::block_eigenvalues_omp(L.blocks)
                                : kernels::block_eigenvalues_serial(L.blocks);
    VectorXcd all(L.dim());
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        all.segment(at, p.size()) = p;
        at += p.size();
    }
    return classify_spectrum(std::move(all), tol_zero, tol_imag);
}

std::vector<JumpGroup> jump_operator_groups(std::span<const double> energies, double tol) {
    std::vector<std::pair<std::size_t, std::size_t>> dyads;
    std::vector<double> omegas;
    for (std::size_t m = 0; m < energies.size(); ++m)
        for (std::size_t n = 0; n < energies.size(); ++n)
            if (m != n) {
                dyads.emplace_back(m, n);
                omegas.push_back(energies[n] - energies[m]);
            }
    std::vector<JumpGroup> groups;
    for (const auto& cls : equality_classes(omegas, tol)) {
        JumpGroup g;
        double sum = 0.0;
        for (std::size_t i : cls) {
            g.dyads.push_back(dyads[i]);
            sum += omegas[i];
        }
        g.omega = sum / static_cast<double>(cls.size());
        groups.push_back(std::move(g));
    }
    std::sort(groups.begin(), groups.end(),
              [](const JumpGroup& a, const JumpGroup& b) { return a.omega < b.omega; });
    return groups;
}

namespace {

std::optional<double> relative_deviation(std::optional<double> a, std::optional<double> b) {
    if (!a || !b)
        return std::nullopt;
    if (std::isinf(*a) || std::isinf(*b))
        return *a == *b ? std::optional<double>(0.0) : std::optional<double>(std::numeric_limits<double>::infinity());
    return std::abs(*b - *a) / std::abs(*a);
}

} // namespace

ComparisonReport compare(const EnsembleTimes& lba, const LiouvillianSpectrum& qome,
                         const DegeneracyReport& deg) {
    ComparisonReport rep;
    rep.lba = {lba.tau_P, lba.tau_Q};
    rep.qome = {qome.tau_P, qome.tau_Q};
    rep.degeneracy = deg;
    rep.deviation_P = relative_deviation(rep.lba.tau_P, rep.qome.tau_P);
    rep.deviation_Q = relative_deviation(rep.lba.tau_Q, rep.qome.tau_Q);
    rep.agree_P = rep.deviation_P && *rep.deviation_P <= kAgreementTol;
    rep.agree_Q = rep.deviation_Q && *rep.deviation_Q <= kAgreementTol;
    rep.pathology.multiple_steady_states = qome.zero_multiplicity > 1;
    return rep;
}

PathologyFlags series_pathologies(std::span<const SeriesPoint> points) {
    PathologyFlags flags;
    for (const auto& p : points)
        if (p.qome.zero_multiplicity > 1)
            flags.multiple_steady_states = true;

    auto spread = [&](auto lba_of, auto qome_of) -> std::optional<bool> {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        std::size_t used = 0;
        for (const auto& p : points) {
            const std::optional<double> q = qome_of(p);
            if (!q || !std::isfinite(*q))
                continue;
            const double r = *q / lba_of(p);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            ++used;
        }
        if (used < 2)
            return std::nullopt;
        return (hi - lo) > kAgreementTol * lo;
    };
    flags.tauP_depends_on_N = spread([](const SeriesPoint& p) { return p.lba.tau_P; },
                                     [](const SeriesPoint& p) { return p.qome.tau_P; });
    flags.tauQ_not_1_over_N = spread([](const SeriesPoint& p) { return p.lba.tau_Q; },
                                     [](const SeriesPoint& p) { return p.qome.tau_Q; });
    return flags;
}

} // namespace lindtherm
