// lba.hpp: Lindblad-based approach for one nondegenerate system
//
// Jump operators are the off-diagonal dyads |m><n| of the energy eigenbasis, with squared
// amplitudes fixed by detailed balance and the dipole transition rates. Populations follow a
// Pauli master equation dp/dt = -A p; every coherence rho_{m,n} decays on its own.

#pragma once

#include <cstddef>

#include "lindtherm/core.hpp"
#include "lindtherm/model.hpp"

namespace lindtherm {

struct RateData {
    double beta{1.0};
    MatrixXd symmetric;   // C_{m,n} = C_{n,m} >= 0, zero diagonal
    MatrixXd transitions; // |l_{m,n}|^2: rate of n -> m, indexed [m, n]
    VectorXd escape;      // B_m = sum_j |l_{j,m}|^2

    std::size_t dim() const { return static_cast<std::size_t>(escape.size()); }
};

struct PauliMatrix {
    MatrixXd generator;   // A_{m,n} = B_m delta_{m,n} - |l_{m,n}|^2
    VectorXd energies;
    double beta{1.0};
    VectorXd eigenvalues; // ascending
    MatrixXd symmetric_eigenvectors; // orthonormal eigenvectors of P A P^-1, P = diag(exp(beta E / 2))
    VectorXd stationary;

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct ThermalizationTimes {
    double tau_P{0.0};
    double tau_Q{0.0};
    double tau{0.0};
    double mu2{0.0};
    double B1{0.0};
    double B2{0.0};
};

// |dE|^3 / (2 sinh(beta |dE| / 2)); zero at dE = 0, overflow- and cancellation-safe.
double thermal_kernel(double energy_gap, double beta);

// W~_{m,k} = |E_m - E_k|^3 exp(-beta (E_m - E_k)/2) / (2 sinh(beta |E_m - E_k| / 2)).
double transition_weight(double e_m, double e_k, double beta);

RateData thermal_rates(const EnergySpectrum& spec, const DipoleData& dip, double beta);

// Eigenvalues always come from the real-symmetric similar matrix diag(B) - C.
PauliMatrix pauli_matrix(const RateData& rates, const EnergySpectrum& spec);

// Builds a PauliMatrix from an explicit generator that is known to satisfy detailed balance
// with respect to `energies` at `beta`.
PauliMatrix pauli_matrix_from_generator(const MatrixXd& generator, const VectorXd& energies,
                                        double beta);

// Eigenvalues with |mu| <= 1e-10 * max|mu| (all of them when the generator vanishes).
std::size_t zero_multiplicity(const PauliMatrix& pm);

ThermalizationTimes thermalization_times(const PauliMatrix& pm, const RateData& rates);

// mu_{m,n} = i (E'_m - E'_n) + (B_m + B_n) / 2 off the diagonal, zero on it.
MatrixXcd decoherence_rates(const RateData& rates, const VectorXd& effective_energies);

VectorXd gibbs_state(const VectorXd& energies, double beta);
inline VectorXd gibbs_state(const EnergySpectrum& spec, double beta) {
    return gibbs_state(spec.energies, beta);
}

// Populations via exp(-A t) from the stored spectral decomposition; coherences decay
// independently with exp(-mu_{m,n} t).
MatrixXcd evolve(const PauliMatrix& pm, const MatrixXcd& decoherence, const MatrixXcd& rho0,
                 double t);

// The full generator of the Lindblad-based master equation in Liouville space, row-major
// vectorization index(m, n) = m * M + n, with E' = E in the coherent part.
MatrixXcd lba_liouvillian(const RateData& rates, const VectorXd& energies);

} // namespace lindtherm
