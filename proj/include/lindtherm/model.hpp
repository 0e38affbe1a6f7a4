// model.hpp: qubit Hamiltonians, energy spectra, dipole matrices and degeneracy diagnostics

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lindtherm/core.hpp"

namespace lindtherm {

namespace pauli {
MatrixXcd sigma_x();
MatrixXcd sigma_y();
MatrixXcd sigma_z();

// Single-site operator `op` acting on qubit `site` of a `num_qubits` register.
// Qubit 0 is the most significant factor of the tensor product.
MatrixXcd embed(const MatrixXcd& op, std::size_t site, std::size_t num_qubits);

// Sum_i sigma_i^h for h = x, y, z.
std::array<MatrixXcd, 3> total_spin_operators(std::size_t num_qubits);
} // namespace pauli

struct QubitSystem {
    std::size_t num_qubits{1};
    MatrixXcd hamiltonian;
    double gamma{1.0}; // dipole coupling constant

    // Throws DimensionMismatch or NonHermitian.
    void validate() const;
};

// H = -sum_i Gamma_i sigma_i^x
QubitSystem free_spins_hamiltonian(std::span<const double> fields, double gamma = 1.0);

struct EnergySpectrum {
    VectorXd energies;   // ascending
    MatrixXcd eigenbasis; // columns are eigenvectors in the construction basis
    double degeneracy_tol{0.0};

    std::size_t dim() const { return static_cast<std::size_t>(energies.size()); }

    // Levels given directly; the eigenbasis is the identity.
    static EnergySpectrum from_levels(const VectorXd& energies, double degeneracy_tol);
};

// 1e-9 * (E_max - E_min), the relative default used throughout.
double default_degeneracy_tol(const VectorXd& energies);

struct DipoleData {
    std::array<MatrixXcd, 3> amplitudes; // d^(h)_{m,n} in the energy eigenbasis, h = x, y, z
    MatrixXd squared;                     // D_{m,n} = gamma * sum_h |d^(h)_{m,n}|^2, zero diagonal
    double gamma{1.0};

    std::size_t dim() const { return static_cast<std::size_t>(squared.rows()); }
};

struct DegeneracyReport {
    bool has_level_degeneracy{false};
    bool has_gap_degeneracy{false};
    std::vector<std::vector<std::size_t>> level_classes;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> gap_classes; // ordered pairs, m != n
    double tol{0.0};
};

// Hermitian eigendecomposition with ascending energies and the largest-magnitude component
// of every eigenvector made real positive. A negative degeneracy_tol selects the default.
// Throws DegenerateSpectrum when require_nondegenerate and two adjacent levels lie within tol.
EnergySpectrum diagonalize(const QubitSystem& sys, double degeneracy_tol = -1.0,
                           bool require_nondegenerate = true);

DipoleData dipole_data(const QubitSystem& sys, const EnergySpectrum& spec);

// Generic form: `operators` are the three dipole operators in the construction basis of `spec`.
DipoleData dipole_data_from_operators(const std::array<MatrixXcd, 3>& operators,
                                      const EnergySpectrum& spec, double gamma);

// Closed-form single spin H = -Gamma sigma^x; no numerical diagonalization.
std::pair<EnergySpectrum, DipoleData> free_spin_system(double field, double gamma = 1.0);

// Equality classes of `values` under |x - y| <= tol, closed transitively.
std::vector<std::vector<std::size_t>> equality_classes(std::span<const double> values, double tol);

DegeneracyReport degeneracy_report(std::span<const double> energies, double tol);

inline DegeneracyReport degeneracy_report(const VectorXd& energies, double tol) {
    return degeneracy_report(std::span<const double>(energies.data(), energies.size()), tol);
}

} // namespace lindtherm
