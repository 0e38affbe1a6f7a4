// model.cpp: qubit Hamiltonians, energy spectra, dipole matrices and degeneracy diagnostics

#include "lindtherm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace lindtherm {

namespace pauli {

MatrixXcd sigma_x() {
    MatrixXcd s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

MatrixXcd sigma_y() {
    MatrixXcd s(2, 2);
    s << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return s;
}

MatrixXcd sigma_z() {
    MatrixXcd s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

MatrixXcd embed(const MatrixXcd& op, std::size_t site, std::size_t num_qubits) {
    const Eigen::Index left = Eigen::Index{1} << site;
    const Eigen::Index right = Eigen::Index{1} << (num_qubits - site - 1);
    const Eigen::Index d = op.rows();
    const Eigen::Index dim = left * d * right;
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    // I_left (x) op (x) I_right
    for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b) {
                if (op(a, b) == cplx(0.0))
                    continue;
                for (Eigen::Index r = 0; r < right; ++r)
                    out((l * d + a) * right + r, (l * d + b) * right + r) = op(a, b);
            }
    return out;
}

std::array<MatrixXcd, 3> total_spin_operators(std::size_t num_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    std::array<MatrixXcd, 3> ops{MatrixXcd::Zero(dim, dim), MatrixXcd::Zero(dim, dim),
                                 MatrixXcd::Zero(dim, dim)};
    const std::array<MatrixXcd, 3> single{sigma_x(), sigma_y(), sigma_z()};
    for (std::size_t i = 0; i < num_qubits; ++i)
        for (std::size_t h = 0; h < 3; ++h)
            ops[h] += embed(single[h], i, num_qubits);
    return ops;
}

} // namespace pauli

void QubitSystem::validate() const {
    if (num_qubits < 1 || num_qubits > 30)
        throw Error(ErrorKind::DimensionMismatch, "qubit count must be in [1, 30]");
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    if (hamiltonian.rows() != dim || hamiltonian.cols() != dim)
        throw Error(ErrorKind::DimensionMismatch,
                    "Hamiltonian must be " + std::to_string(dim) + "x" + std::to_string(dim));
    const double scale = hamiltonian.cwiseAbs().maxCoeff();
    const double asym = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, 1e-300) && asym > 0.0)
        throw Error(ErrorKind::NonHermitian, "H - H^dagger has max-norm " + std::to_string(asym));
}

QubitSystem free_spins_hamiltonian(std::span<const double> fields, double gamma) {
    QubitSystem sys;
    sys.num_qubits = fields.size();
    sys.gamma = gamma;
    const Eigen::Index dim = Eigen::Index{1} << fields.size();
    sys.hamiltonian = MatrixXcd::Zero(dim, dim);
    const MatrixXcd sx = pauli::sigma_x();
    for (std::size_t i = 0; i < fields.size(); ++i)
        sys.hamiltonian -= fields[i] * pauli::embed(sx, i, fields.size());
    return sys;
}

double default_degeneracy_tol(const VectorXd& energies) {
    if (energies.size() < 2)
        return 0.0;
    return 1e-9 * (energies.maxCoeff() - energies.minCoeff());
}

EnergySpectrum EnergySpectrum::from_levels(const VectorXd& energies, double degeneracy_tol) {
    EnergySpectrum spec;
    spec.energies = energies;
    spec.eigenbasis = MatrixXcd::Identity(energies.size(), energies.size());
    spec.degeneracy_tol = degeneracy_tol;
    return spec;
}

namespace {

void fix_phases(MatrixXcd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best * (1.0 + 1e-12)) {
                best = a;
                arg = r;
            }
        }
        const cplx phase = std::conj(vectors(arg, c)) / std::abs(vectors(arg, c));
        vectors.col(c) *= phase;
        vectors(arg, c) = std::abs(vectors(arg, c));
    }
}

void check_nondegenerate(const VectorXd& energies, double tol) {
    for (Eigen::Index m = 0; m + 1 < energies.size(); ++m)
        if (energies(m + 1) - energies(m) <= tol)
            throw Error(ErrorKind::DegenerateSpectrum,
                        "levels " + std::to_string(m) + " and " + std::to_string(m + 1) +
                            " are within " + std::to_string(tol));
}

} // namespace

EnergySpectrum diagonalize(const QubitSystem& sys, double degeneracy_tol,
                           bool require_nondegenerate) {
    sys.validate();
    // Symmetrize away round-off so the solver sees an exactly Hermitian matrix.
    const MatrixXcd h = 0.5 * (sys.hamiltonian + sys.hamiltonian.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NonHermitian, "Hermitian eigensolver did not converge");

    EnergySpectrum spec;
    spec.energies = solver.eigenvalues();
    spec.eigenbasis = solver.eigenvectors();
    fix_phases(spec.eigenbasis);
    spec.degeneracy_tol =
        degeneracy_tol < 0.0 ? default_degeneracy_tol(spec.energies) : degeneracy_tol;
    if (require_nondegenerate)
        check_nondegenerate(spec.energies, spec.degeneracy_tol);
    return spec;
}

DipoleData dipole_data_from_operators(const std::array<MatrixXcd, 3>& operators,
                                      const EnergySpectrum& spec, double gamma) {
    const Eigen::Index dim = spec.energies.size();
    DipoleData dip;
    dip.gamma = gamma;
    dip.squared = MatrixXd::Zero(dim, dim);
    for (std::size_t h = 0; h < 3; ++h) {
        if (operators[h].rows() != dim || operators[h].cols() != dim ||
            spec.eigenbasis.rows() != dim || spec.eigenbasis.cols() != dim)
            throw Error(ErrorKind::DimensionMismatch, "dipole operator and spectrum sizes differ");
        dip.amplitudes[h] = spec.eigenbasis.adjoint() * operators[h] * spec.eigenbasis;
        dip.squared += dip.amplitudes[h].cwiseAbs2();
    }
    dip.squared *= gamma;
    dip.squared = 0.5 * (dip.squared + dip.squared.transpose()).eval();
    dip.squared.diagonal().setZero();
    return dip;
}

DipoleData dipole_data(const QubitSystem& sys, const EnergySpectrum& spec) {
    const Eigen::Index dim = Eigen::Index{1} << sys.num_qubits;
    if (spec.energies.size() != dim)
        throw Error(ErrorKind::DimensionMismatch, "spectrum does not belong to this system");
    return dipole_data_from_operators(pauli::total_spin_operators(sys.num_qubits), spec, sys.gamma);
}

std::pair<EnergySpectrum, DipoleData> free_spin_system(double field, double gamma) {
    if (!(field > 0.0))
        throw Error(ErrorKind::NonPositiveField, "Gamma must be positive");

    // |1> = |+>, |2> = |->, both with a real positive largest component.
    const double r = 1.0 / std::sqrt(2.0);
    MatrixXcd basis(2, 2);
    basis << r, r, r, -r;
    // Tie between the two components of |->: the first one is the phase anchor.
    EnergySpectrum spec;
    spec.energies = VectorXd(2);
    spec.energies << -field, field;
    spec.eigenbasis = basis;
    spec.degeneracy_tol = 1e-9 * 2.0 * field;

    DipoleData dip;
    dip.gamma = gamma;
    // In the sigma^x eigenbasis: sigma^x -> diag(1,-1), sigma^y -> [[0, i],[-i, 0]], sigma^z -> [[0,1],[1,0]]
    dip.amplitudes[0] = MatrixXcd(2, 2);
    dip.amplitudes[0] << 1.0, 0.0, 0.0, -1.0;
    dip.amplitudes[1] = MatrixXcd(2, 2);
    dip.amplitudes[1] << 0.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 0.0;
    dip.amplitudes[2] = MatrixXcd(2, 2);
    dip.amplitudes[2] << 0.0, 1.0, 1.0, 0.0;
    dip.squared = MatrixXd(2, 2);
    dip.squared << 0.0, 2.0 * gamma, 2.0 * gamma, 0.0;
    return {std::move(spec), std::move(dip)};
}

std::vector<std::vector<std::size_t>> equality_classes(std::span<const double> values, double tol) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    // In one dimension the transitive closure of |x - y| <= tol links exactly the
    // sorted neighbours that are within tol, so a single sweep is the union-find.
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k == 0 || values[order[k]] - values[order[k - 1]] > tol)
            classes.emplace_back();
        classes.back().push_back(order[k]);
    }
    for (auto& c : classes)
        std::sort(c.begin(), c.end());
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return classes;
}

DegeneracyReport degeneracy_report(std::span<const double> energies, double tol) {
    DegeneracyReport rep;
    rep.tol = tol;
    rep.level_classes = equality_classes(energies, tol);
    rep.has_level_degeneracy = std::any_of(rep.level_classes.begin(), rep.level_classes.end(),
                                           [](const auto& c) { return c.size() > 1; });

    const std::size_t m = energies.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> gaps;
    pairs.reserve(m * (m > 0 ? m - 1 : 0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (a != b) {
                pairs.emplace_back(a, b);
                gaps.push_back(energies[a] - energies[b]);
            }
    for (const auto& cls : equality_classes(gaps, tol)) {
        auto& out = rep.gap_classes.emplace_back();
        for (std::size_t idx : cls)
            out.push_back(pairs[idx]);
        if (out.size() > 1)
            rep.has_gap_degeneracy = true;
    }
    return rep;
}

} // namespace lindtherm
