// lba.cpp: Lindblad-based approach for one nondegenerate system

#include "lindtherm/lba.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace lindtherm {

namespace {

constexpr double kLogSpaceThreshold = 700.0;
constexpr double kSeriesThreshold = 1e-8;

void require_nondegenerate(const EnergySpectrum& spec) {
    for (Eigen::Index m = 0; m + 1 < spec.energies.size(); ++m)
        if (spec.energies(m + 1) - spec.energies(m) <= spec.degeneracy_tol)
            throw Error(ErrorKind::DegenerateSpectrum,
                        "rates need a nondegenerate spectrum (levels " + std::to_string(m) +
                            ", " + std::to_string(m + 1) + ")");
}

// Eigen-decomposition of the symmetric similar matrix, shared by both PauliMatrix builders.
PauliMatrix finish_pauli(MatrixXd generator, MatrixXd symmetric, const VectorXd& energies,
                         double beta) {
    PauliMatrix pm;
    pm.generator = std::move(generator);
    pm.energies = energies;
    pm.beta = beta;
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetric);
    pm.eigenvalues = solver.eigenvalues();
    pm.symmetric_eigenvectors = solver.eigenvectors();

    const VectorXd gibbs = gibbs_state(energies, beta);
    pm.stationary = gibbs;
    if (zero_multiplicity(pm) == 1) {
        // Kernel of P A P^-1 is P p_eq, so p_eq = P^-1 v, normalised to unit mass.
        const double shift = energies.size() ? energies.minCoeff() : 0.0;
        VectorXd p(energies.size());
        for (Eigen::Index m = 0; m < energies.size(); ++m)
            p(m) = std::exp(-0.5 * beta * (energies(m) - shift)) * pm.symmetric_eigenvectors(m, 0);
        const double mass = p.sum();
        if (mass != 0.0)
            pm.stationary = p / mass;
    }
    return pm;
}

} // namespace

double thermal_kernel(double energy_gap, double beta) {
    const double gap = std::abs(energy_gap);
    if (gap == 0.0)
        return 0.0;
    const double x = beta * gap;
    if (x > kLogSpaceThreshold)
        return std::exp(3.0 * std::log(gap) - 0.5 * x - std::log1p(-std::exp(-x)));
    if (x < kSeriesThreshold)
        return gap * gap * gap * (1.0 / x - x / 24.0);
    return gap * gap * gap / (2.0 * std::sinh(0.5 * x));
}

double transition_weight(double e_m, double e_k, double beta) {
    const double de = e_m - e_k;
    const double gap = std::abs(de);
    if (gap == 0.0)
        return 0.0;
    const double x = beta * gap;
    if (x > kLogSpaceThreshold) {
        // exp(-beta de / 2) / (e^{x/2} - e^{-x/2}) = exp(-(beta de + x)/2) / (1 - e^{-x})
        return std::exp(3.0 * std::log(gap) - 0.5 * (beta * de + x) - std::log1p(-std::exp(-x)));
    }
    return thermal_kernel(de, beta) * std::exp(-0.5 * beta * de);
}

RateData thermal_rates(const EnergySpectrum& spec, const DipoleData& dip, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorKind::NonPositiveBeta, "beta must be positive and finite");
    if (dip.dim() != spec.dim())
        throw Error(ErrorKind::DimensionMismatch, "dipole and spectrum sizes differ");
    require_nondegenerate(spec);

    const Eigen::Index dim = spec.energies.size();
    RateData rates;
    rates.beta = beta;
    rates.symmetric = MatrixXd::Zero(dim, dim);
    rates.transitions = MatrixXd::Zero(dim, dim);
    rates.escape = VectorXd::Zero(dim);
    const VectorXd& e = spec.energies;
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index n = 0; n < dim; ++n) {
            if (m == n)
                continue;
            const double de = e(m) - e(n);
            const double c = dip.squared(m, n) * thermal_kernel(de, beta);
            rates.symmetric(m, n) = c;
            if (beta * std::abs(de) > kLogSpaceThreshold)
                rates.transitions(m, n) = dip.squared(m, n) * transition_weight(e(m), e(n), beta);
            else
                rates.transitions(m, n) = c * std::exp(-0.5 * beta * de);
        }
    for (Eigen::Index m = 0; m < dim; ++m) {
        double b = 0.0;
        for (Eigen::Index j = 0; j < dim; ++j)
            b += rates.transitions(j, m);
        rates.escape(m) = b;
    }
    return rates;
}

PauliMatrix pauli_matrix(const RateData& rates, const EnergySpectrum& spec) {
    const Eigen::Index dim = rates.escape.size();
    if (spec.energies.size() != dim || rates.transitions.rows() != dim ||
        rates.symmetric.rows() != dim)
        throw Error(ErrorKind::DimensionMismatch, "rates and spectrum sizes differ");

    MatrixXd generator = -rates.transitions;
    generator.diagonal() += rates.escape;
    MatrixXd symmetric = -rates.symmetric;
    symmetric.diagonal() += rates.escape;
    return finish_pauli(std::move(generator), std::move(symmetric), spec.energies, rates.beta);
}

PauliMatrix pauli_matrix_from_generator(const MatrixXd& generator, const VectorXd& energies,
                                        double beta) {
    const Eigen::Index dim = energies.size();
    if (generator.rows() != dim || generator.cols() != dim)
        throw Error(ErrorKind::DimensionMismatch, "generator and energies sizes differ");
    const double mid = dim ? 0.5 * (energies.maxCoeff() + energies.minCoeff()) : 0.0;
    VectorXd half(dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        half(m) = 0.5 * beta * (energies(m) - mid);
    MatrixXd symmetric(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index n = 0; n < dim; ++n)
            symmetric(m, n) =
                generator(m, n) == 0.0 ? 0.0 : generator(m, n) * std::exp(half(m) - half(n));
    symmetric = (0.5 * (symmetric + symmetric.transpose())).eval();
    return finish_pauli(generator, std::move(symmetric), energies, beta);
}

std::size_t zero_multiplicity(const PauliMatrix& pm) {
    if (pm.eigenvalues.size() == 0)
        return 0;
    const double thr = 1e-10 * pm.eigenvalues.cwiseAbs().maxCoeff();
    std::size_t count = 0;
    for (Eigen::Index k = 0; k < pm.eigenvalues.size(); ++k)
        if (std::abs(pm.eigenvalues(k)) <= thr)
            ++count;
    return count;
}

ThermalizationTimes thermalization_times(const PauliMatrix& pm, const RateData& rates) {
    if (pm.dim() < 2 || rates.dim() != pm.dim())
        throw Error(ErrorKind::DimensionMismatch, "need matching rates and at least two levels");
    const std::size_t zeros = zero_multiplicity(pm);
    if (zeros != 1)
        throw Error(ErrorKind::ErgodicityViolation,
                    "zero eigenvalue of A has multiplicity " + std::to_string(zeros));

    ThermalizationTimes t;
    t.mu2 = pm.eigenvalues(1);
    VectorXd b = rates.escape;
    std::sort(b.begin(), b.end());
    t.B1 = b(0);
    t.B2 = b(1);
    t.tau_P = 1.0 / t.mu2;
    t.tau_Q = 2.0 / (t.B1 + t.B2);
    t.tau = std::max(t.tau_P, t.tau_Q);
    return t;
}

MatrixXcd decoherence_rates(const RateData& rates, const VectorXd& effective_energies) {
    const Eigen::Index dim = rates.escape.size();
    if (effective_energies.size() != dim)
        throw Error(ErrorKind::DimensionMismatch, "effective energies have the wrong size");
    MatrixXcd mu = MatrixXcd::Zero(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index n = 0; n < dim; ++n)
            if (m != n)
                mu(m, n) = cplx(0.5 * (rates.escape(m) + rates.escape(n)),
                                effective_energies(m) - effective_energies(n));
    return mu;
}

VectorXd gibbs_state(const VectorXd& energies, double beta) {
    const Eigen::Index dim = energies.size();
    if (dim == 0)
        return {};
    // Shift by the level that keeps every exponent <= 0.
    const double ref = beta >= 0.0 ? energies.minCoeff() : energies.maxCoeff();
    VectorXd p(dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        p(m) = std::exp(-beta * (energies(m) - ref));
    return p / p.sum();
}

MatrixXcd evolve(const PauliMatrix& pm, const MatrixXcd& decoherence, const MatrixXcd& rho0,
                 double t) {
    const Eigen::Index dim = pm.eigenvalues.size();
    if (rho0.rows() != dim || rho0.cols() != dim || decoherence.rows() != dim ||
        decoherence.cols() != dim)
        throw Error(ErrorKind::DimensionMismatch, "density matrix has the wrong size");
    if (!(t >= 0.0))
        throw Error(ErrorKind::NegativeTime, "t must be nonnegative");

    const double herm = (rho0 - rho0.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw Error(ErrorKind::InvalidDensityMatrix, "rho0 is not Hermitian");
    if (std::abs(rho0.trace() - cplx(1.0)) > 1e-10)
        throw Error(ErrorKind::InvalidDensityMatrix, "rho0 does not have unit trace");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> psd(0.5 * (rho0 + rho0.adjoint()),
                                                  Eigen::EigenvaluesOnly);
    if (psd.eigenvalues().minCoeff() < -1e-10)
        throw Error(ErrorKind::InvalidDensityMatrix, "rho0 is not positive semidefinite");

    // p(t) = P^-1 V exp(-Lambda t) V^T P p(0)
    const double mid = 0.5 * (pm.energies.maxCoeff() + pm.energies.minCoeff());
    VectorXd weight(dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        weight(m) = std::exp(0.5 * pm.beta * (pm.energies(m) - mid));
    VectorXd p0 = rho0.diagonal().real();
    VectorXd y = pm.symmetric_eigenvectors.transpose() * weight.cwiseProduct(p0);
    for (Eigen::Index k = 0; k < dim; ++k)
        y(k) *= std::exp(-pm.eigenvalues(k) * t);
    const VectorXd p = (pm.symmetric_eigenvectors * y).cwiseQuotient(weight);

    MatrixXcd rho(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index n = 0; n < dim; ++n)
            rho(m, n) = m == n ? cplx(p(m)) : std::exp(-decoherence(m, n) * t) * rho0(m, n);
    return rho;
}

MatrixXcd lba_liouvillian(const RateData& rates, const VectorXd& energies) {
    const Eigen::Index dim = rates.escape.size();
    if (energies.size() != dim)
        throw Error(ErrorKind::DimensionMismatch, "energies and rates sizes differ");
    MatrixXcd L = MatrixXcd::Zero(dim * dim, dim * dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index n = 0; n < dim; ++n) {
            const Eigen::Index row = m * dim + n;
            L(row, row) = cplx(-0.5 * (rates.escape(m) + rates.escape(n)), -(energies(m) - energies(n)));
        }
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index k = 0; k < dim; ++k)
            if (k != m)
                L(m * dim + m, k * dim + k) += rates.transitions(m, k);
    return L;
}

} // namespace lindtherm
