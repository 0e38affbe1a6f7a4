// ensemble.hpp: N noninteracting distinguishable systems in the product eigenbasis
//
// In the product basis the squared jump amplitudes decouple system by system, so the Pauli
// matrix of the ensemble is the Kronecker sum of the members' matrices and escape rates add.
// Closed forms are the production path; explicit product-space constructions verify them.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lindtherm/lanczos.hpp"
#include "lindtherm/lba.hpp"
#include "lindtherm/model.hpp"

namespace lindtherm {

struct EnsembleMember {
    EnergySpectrum spectrum;
    DipoleData dipoles;
    std::size_t count{1};
};

struct EnsembleSpec {
    std::vector<EnsembleMember> members;
    double beta{1.0};

    std::size_t total_count() const;
};

struct EnsembleTimes {
    double tau_P{0.0};
    double tau_Q{0.0};
    double tau{0.0};
    std::vector<double> per_member_mu2;
    double B_min_total{0.0};    // sum_i n_i B_min,i
    double min_second_gap{0.0}; // min_i (B_second,i - B_min,i)
};

inline constexpr std::size_t kDefaultCompositionCap = 4096;

// Explicit Kronecker sum A(x)I(x)... + ... + ...(x)I(x)A over the product index set
// (last member fastest). Throws DimensionCap above `cap`.
PauliMatrix compose_rate_matrix(std::span<const PauliMatrix> members,
                                std::size_t cap = kDefaultCompositionCap);

EnsembleTimes ensemble_times(const EnsembleSpec& spec);

// Closed forms for N spins H = -sum_i Gamma_i sigma_i^x.
EnsembleTimes free_spins_times(std::span<const double> fields, double beta, double gamma = 1.0);

// Modulated field Gamma_i = offset + amplitude * sin((i - 1) * phase_step), i = 1..n.
std::vector<double> modulated_fields(std::size_t n, double offset = 1.0, double amplitude = 0.5,
                                     double phase_step = -1.0);

enum class PairBasis { product, bell };

struct DecouplingCheck {
    bool holds{true};
    double max_deviation{0.0};        // |C measured - C_{m,p} d_{n,q} - C_{n,q} d_{m,p}|, relative
    double max_escape_deviation{0.0}; // |B_{m,n} - B_m - B_n|, relative
    std::optional<double> mixed_form_deviation; // Bell basis only
    MatrixXd measured;                // C_{m,n;p,q}, row index m * Mb + n
};

// Two-system rates built from the per-system dipole operators in the chosen eigenbasis of
// H (x) I + I (x) H, compared against the decoupled form. The Bell basis needs identical
// members and labels (|m,n> + |n,m>)/sqrt2 as (m,n), (|m,n> - |n,m>)/sqrt2 as (n,m), m < n.
DecouplingCheck verify_product_basis_decoupling(const EnsembleMember& a,
                                                const std::optional<EnsembleMember>& b,
                                                double beta = 1.0,
                                                PairBasis basis = PairBasis::product);

inline constexpr Eigen::Index kDecouplingCap = 64;

struct NumericEnsembleOptions {
    Eigen::Index dense_limit{512}; // above this the second eigenvalue comes from Lanczos
    bool parallel{true};
    LanczosOptions lanczos{};
};

struct NumericEnsembleTimes {
    double tau_P{0.0};
    double tau_Q{0.0};
    double tau{0.0};
    double mu2{0.0};
    double B1{0.0};
    double B2{0.0};
    Eigen::Index dim{0};
    bool iterative{false};
};

// Builds the explicit product-space generator diag(B) - C (symmetrized Kronecker sum) and
// enumerates every product escape rate; no closed forms are used.
NumericEnsembleTimes numeric_ensemble_times(const EnsembleSpec& spec,
                                            const NumericEnsembleOptions& options = {});

} // namespace lindtherm
