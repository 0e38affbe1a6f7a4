// ensemble.cpp: N noninteracting distinguishable systems in the product eigenbasis

#include "lindtherm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "lindtherm/kernels.hpp"

namespace lindtherm {

std::size_t EnsembleSpec::total_count() const {
    std::size_t n = 0;
    for (const auto& m : members)
        n += m.count;
    return n;
}

PauliMatrix compose_rate_matrix(std::span<const PauliMatrix> members, std::size_t cap) {
    if (members.empty())
        throw Error(ErrorKind::EmptyEnsemble, "no members to compose");
    if (members.size() == 1)
        return members.front();

    std::size_t dim = 1;
    for (const auto& m : members) {
        dim *= m.dim();
        if (dim > cap)
            throw Error(ErrorKind::DimensionCap,
                        "product dimension exceeds the cap of " + std::to_string(cap));
    }
    const double beta = members.front().beta;
    for (const auto& m : members)
        if (m.beta != beta)
            throw Error(ErrorKind::DimensionMismatch, "members at different temperatures");

    MatrixXd generator = members.front().generator;
    VectorXd energies = members.front().energies;
    for (std::size_t i = 1; i < members.size(); ++i) {
        const auto& next = members[i];
        const Eigen::Index da = generator.rows(), db = next.generator.rows();
        MatrixXd sum = MatrixXd::Zero(da * db, da * db);
        VectorXd e(da * db);
        for (Eigen::Index a = 0; a < da; ++a)
            for (Eigen::Index b = 0; b < db; ++b) {
                e(a * db + b) = energies(a) + next.energies(b);
                for (Eigen::Index a2 = 0; a2 < da; ++a2)
                    sum(a * db + b, a2 * db + b) += generator(a, a2);
                for (Eigen::Index b2 = 0; b2 < db; ++b2)
                    sum(a * db + b, a * db + b2) += next.generator(b, b2);
            }
        generator = std::move(sum);
        energies = std::move(e);
    }
    return pauli_matrix_from_generator(generator, energies, beta);
}

namespace {

struct MemberSummary {
    double mu2{0.0};
    double b_min{0.0};
    double b_second{0.0};
};

void validate(const EnsembleSpec& spec) {
    if (spec.members.empty() || spec.total_count() == 0)
        throw Error(ErrorKind::EmptyEnsemble, "ensemble has no systems");
    for (const auto& m : spec.members)
        if (m.count == 0)
            throw Error(ErrorKind::EmptyEnsemble, "member count must be positive");
}

// e^{-x} / sinh(x) and coth(x) without overflow for large x.
double boltzmann_over_sinh(double x) { return 2.0 / std::expm1(2.0 * x); }
double coth(double x) { return 1.0 + boltzmann_over_sinh(x); }

} // namespace

EnsembleTimes ensemble_times(const EnsembleSpec& spec) {
    validate(spec);
    std::vector<MemberSummary> summaries(spec.members.size());
    // Members are independent; each one is a small dense problem.
    std::vector<std::string> failures(spec.members.size());
    std::vector<ErrorKind> kinds(spec.members.size(), ErrorKind::ConfigError);
    const auto count = static_cast<long>(spec.members.size());
#pragma omp parallel for schedule(dynamic) if (count > 4)
    for (long i = 0; i < count; ++i) {
        try {
            const auto& m = spec.members[i];
            const RateData rates = thermal_rates(m.spectrum, m.dipoles, spec.beta);
            const PauliMatrix pm = pauli_matrix(rates, m.spectrum);
            const ThermalizationTimes t = thermalization_times(pm, rates);
            summaries[i] = {t.mu2, t.B1, t.B2};
        } catch (const Error& e) {
            failures[i] = e.what();
            kinds[i] = e.kind();
        }
    }
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw Error(kinds[i], "member " + std::to_string(i) + ": " + failures[i]);

    EnsembleTimes out;
    out.min_second_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        out.per_member_mu2.push_back(s.mu2);
        out.tau_P = std::max(out.tau_P, 1.0 / s.mu2);
        out.B_min_total += static_cast<double>(spec.members[i].count) * s.b_min;
        out.min_second_gap = std::min(out.min_second_gap, s.b_second - s.b_min);
    }
    out.tau_Q = 2.0 / (2.0 * out.B_min_total + out.min_second_gap);
    out.tau = std::max(out.tau_P, out.tau_Q);
    return out;
}

EnsembleTimes free_spins_times(std::span<const double> fields, double beta, double gamma) {
    if (fields.empty())
        throw Error(ErrorKind::EmptyEnsemble, "no spins");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorKind::NonPositiveBeta, "beta must be positive and finite");
    for (double g : fields)
        if (!(g > 0.0))
            throw Error(ErrorKind::NonPositiveField, "every Gamma_i must be positive");

    // Ground-state escape rate of spin k: gamma (2 Gamma_k)^3 e^{-beta Gamma_k} / sinh(beta Gamma_k).
    // Neumaier summation keeps the N = 1e5 total accurate.
    double sum = 0.0, comp = 0.0;
    for (double g : fields) {
        const double term = gamma * std::pow(2.0 * g, 3) * boltzmann_over_sinh(beta * g);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    const double ground_total = sum + comp;

    EnsembleTimes out;
    out.B_min_total = ground_total;
    out.min_second_gap = std::numeric_limits<double>::infinity();
    double best_q = 0.0;
    for (double g : fields) {
        const double c = gamma * std::pow(2.0 * g, 3);
        const double x = beta * g;
        out.per_member_mu2.push_back(2.0 * c / std::tanh(x));
        out.tau_P = std::max(out.tau_P, std::tanh(x) / (2.0 * c));
        out.min_second_gap = std::min(out.min_second_gap, 2.0 * c);
        const double others = ground_total - c * boltzmann_over_sinh(x);
        best_q = std::max(best_q, 1.0 / (c * coth(x) + others));
    }
    out.tau_Q = best_q;
    out.tau = std::max(out.tau_P, out.tau_Q);
    return out;
}

std::vector<double> modulated_fields(std::size_t n, double offset, double amplitude,
                                     double phase_step) {
    if (phase_step < 0.0)
        phase_step = std::numbers::pi / std::sqrt(2.0);
    std::vector<double> fields(n);
    for (std::size_t i = 0; i < n; ++i)
        fields[i] = offset + amplitude * std::sin(static_cast<double>(i) * phase_step);
    return fields;
}

namespace {

MatrixXd pair_rates(const MatrixXd& dipole_squared, const VectorXd& energies, double beta) {
    const Eigen::Index dim = energies.size();
    MatrixXd c = MatrixXd::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b)
            if (a != b)
                c(a, b) = dipole_squared(a, b) * thermal_kernel(energies(a) - energies(b), beta);
    return c;
}

VectorXd escape_from(const MatrixXd& c, const VectorXd& energies, double beta) {
    const Eigen::Index dim = energies.size();
    VectorXd b = VectorXd::Zero(dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index j = 0; j < dim; ++j)
            if (j != m)
                b(m) += c(j, m) * std::exp(-0.5 * beta * (energies(j) - energies(m)));
    return b;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatrixXcd bell_basis(Eigen::Index m_dim) {
    const Eigen::Index dim = m_dim * m_dim;
    MatrixXcd u = MatrixXcd::Zero(dim, dim);
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index m = 0; m < m_dim; ++m) {
        u(m * m_dim + m, m * m_dim + m) = 1.0;
        for (Eigen::Index n = m + 1; n < m_dim; ++n) {
            u(m * m_dim + n, m * m_dim + n) = r; // symmetric, labelled (m, n)
            u(n * m_dim + m, m * m_dim + n) = r;
            u(m * m_dim + n, n * m_dim + m) = r; // antisymmetric, labelled (n, m)
            u(n * m_dim + m, n * m_dim + m) = -r;
        }
    }
    return u;
}

} // namespace

DecouplingCheck verify_product_basis_decoupling(const EnsembleMember& a,
                                                const std::optional<EnsembleMember>& b,
                                                double beta, PairBasis basis) {
    DecouplingCheck out;
    const Eigen::Index ma = a.spectrum.energies.size();
    const MatrixXd ca = pair_rates(a.dipoles.squared, a.spectrum.energies, beta);
    if (!b) {
        out.measured = ca;
        return out;
    }
    const Eigen::Index mb = b->spectrum.energies.size();
    if (ma * mb > kDecouplingCap)
        throw Error(ErrorKind::DimensionCap, "explicit pair construction limited to dimension 64");
    const MatrixXd cb = pair_rates(b->dipoles.squared, b->spectrum.energies, beta);

    const Eigen::Index dim = ma * mb;
    VectorXd energies(dim);
    for (Eigen::Index m = 0; m < ma; ++m)
        for (Eigen::Index n = 0; n < mb; ++n)
            energies(m * mb + n) = a.spectrum.energies(m) + b->spectrum.energies(n);

    MatrixXcd u = MatrixXcd::Identity(dim, dim);
    if (basis == PairBasis::bell) {
        if (ma != mb || (a.spectrum.energies - b->spectrum.energies).cwiseAbs().maxCoeff() >
                            a.spectrum.degeneracy_tol)
            throw Error(ErrorKind::DimensionMismatch, "Bell basis needs two identical members");
        u = bell_basis(ma);
    }

    const MatrixXcd id_a = MatrixXcd::Identity(ma, ma), id_b = MatrixXcd::Identity(mb, mb);
    MatrixXd d2 = MatrixXd::Zero(dim, dim);
    for (std::size_t h = 0; h < 3; ++h) {
        const MatrixXcd first = u.adjoint() * kron(a.dipoles.amplitudes[h], id_b) * u;
        const MatrixXcd second = u.adjoint() * kron(id_a, b->dipoles.amplitudes[h]) * u;
        d2 += a.dipoles.gamma * first.cwiseAbs2() + b->dipoles.gamma * second.cwiseAbs2();
    }
    d2.diagonal().setZero();
    out.measured = pair_rates(d2, energies, beta);

    const double c_scale = std::max(out.measured.cwiseAbs().maxCoeff(), 1e-300);
    double mixed_dev = 0.0;
    for (Eigen::Index m = 0; m < ma; ++m)
        for (Eigen::Index n = 0; n < mb; ++n)
            for (Eigen::Index p = 0; p < ma; ++p)
                for (Eigen::Index q = 0; q < mb; ++q) {
                    const double got = out.measured(m * mb + n, p * mb + q);
                    const double want = (n == q ? ca(m, p) : 0.0) + (m == p ? cb(n, q) : 0.0);
                    out.max_deviation = std::max(out.max_deviation, std::abs(got - want) / c_scale);
                    if (basis == PairBasis::bell) {
                        const double mixed = 0.5 * ((n == q ? ca(m, p) : 0.0) + (m == p ? ca(n, q) : 0.0) +
                                                    (n == p ? ca(m, q) : 0.0) + (m == q ? ca(n, p) : 0.0));
                        mixed_dev = std::max(mixed_dev, std::abs(got - mixed) / c_scale);
                    }
                }
    if (basis == PairBasis::bell)
        out.mixed_form_deviation = mixed_dev;

    const VectorXd ba = escape_from(ca, a.spectrum.energies, beta);
    const VectorXd bb = escape_from(cb, b->spectrum.energies, beta);
    const VectorXd bpair = escape_from(out.measured, energies, beta);
    const double b_scale = std::max(bpair.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index m = 0; m < ma; ++m)
        for (Eigen::Index n = 0; n < mb; ++n)
            out.max_escape_deviation = std::max(
                out.max_escape_deviation, std::abs(bpair(m * mb + n) - ba(m) - bb(n)) / b_scale);

    out.holds = out.max_deviation <= 1e-12 && out.max_escape_deviation <= 1e-12;
    return out;
}

NumericEnsembleTimes numeric_ensemble_times(const EnsembleSpec& spec,
                                            const NumericEnsembleOptions& options) {
    validate(spec);
    std::vector<MatrixXd> symmetric;
    std::vector<VectorXd> escape;
    std::vector<VectorXd> kernel_factors;
    for (const auto& m : spec.members) {
        const RateData rates = thermal_rates(m.spectrum, m.dipoles, spec.beta);
        MatrixXd s = -rates.symmetric;
        s.diagonal() += rates.escape;
        VectorXd root(m.spectrum.energies.size());
        const double e0 = m.spectrum.energies.minCoeff();
        for (Eigen::Index k = 0; k < root.size(); ++k)
            root(k) = std::exp(-0.5 * spec.beta * (m.spectrum.energies(k) - e0));
        root.normalize();
        for (std::size_t c = 0; c < m.count; ++c) {
            symmetric.push_back(s);
            escape.push_back(rates.escape);
            kernel_factors.push_back(root);
        }
    }

    NumericEnsembleTimes out;
    const VectorXd b = options.parallel ? kernels::product_escape_rates_omp(escape)
                                        : kernels::product_escape_rates_serial(escape);
    out.dim = b.size();
    if (out.dim < 2)
        throw Error(ErrorKind::DimensionMismatch, "product space needs at least two states");
    {
        Eigen::Index first = 0;
        for (Eigen::Index k = 1; k < b.size(); ++k)
            if (b(k) < b(first))
                first = k;
        double second = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < b.size(); ++k)
            if (k != first)
                second = std::min(second, b(k));
        out.B1 = b(first);
        out.B2 = second;
    }

    const SparseMatrixXd s = options.parallel ? kernels::kronecker_sum_omp(symmetric)
                                              : kernels::kronecker_sum_serial(symmetric);
    // Gershgorin bound on the spectral radius sets the scale of "zero".
    double radius = 0.0;
    for (Eigen::Index r = 0; r < s.outerSize(); ++r) {
        double row = 0.0;
        for (SparseMatrixXd::InnerIterator it(s, r); it; ++it)
            row += std::abs(it.value());
        radius = std::max(radius, row);
    }

    if (out.dim <= options.dense_limit) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> solver(MatrixXd(s), Eigen::EigenvaluesOnly);
        const VectorXd ev = solver.eigenvalues();
        const double thr = 1e-10 * ev.cwiseAbs().maxCoeff();
        if (std::abs(ev(1)) <= thr)
            throw Error(ErrorKind::ErgodicityViolation, "zero eigenvalue of A^(N) is degenerate");
        out.mu2 = ev(1);
    } else {
        VectorXd kernel = kernel_factors.front();
        for (std::size_t i = 1; i < kernel_factors.size(); ++i) {
            const VectorXd& f = kernel_factors[i];
            VectorXd next(kernel.size() * f.size());
            for (Eigen::Index a = 0; a < kernel.size(); ++a)
                next.segment(a * f.size(), f.size()) = kernel(a) * f;
            kernel = std::move(next);
        }
        kernel.normalize();
        const bool parallel = options.parallel;
        const auto apply = [&s, parallel](const VectorXd& x, VectorXd& y) {
            if (parallel)
                kernels::sparse_apply_omp(s, x, y);
            else
                kernels::sparse_apply_serial(s, x, y);
        };
        const LanczosResult r = smallest_eigenvalue(apply, out.dim, kernel, options.lanczos);
        if (!r.converged)
            throw Error(ErrorKind::ErgodicityViolation,
                        "Lanczos did not converge (residual " + std::to_string(r.residual) + ")");
        if (r.value <= 1e-10 * radius)
            throw Error(ErrorKind::ErgodicityViolation, "zero eigenvalue of A^(N) is degenerate");
        out.mu2 = r.value;
        out.iterative = true;
    }

    out.tau_P = 1.0 / out.mu2;
    out.tau_Q = 2.0 / (out.B1 + out.B2);
    out.tau = std::max(out.tau_P, out.tau_Q);
    return out;
}

} // namespace lindtherm
