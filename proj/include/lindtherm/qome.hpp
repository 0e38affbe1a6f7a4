// qome.hpp: quantum optical master equation Liouvillian and its comparison with the LBA
//
// The generator is assembled entry by entry (Lamb shift dropped) with energy and gap
// Kronecker deltas decided at a shared tolerance. It commutes with the coherent
// superoperator, so it splits into invariant sectors that are stored and diagonalized
// block by block.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lindtherm/ensemble.hpp"
#include "lindtherm/kernels.hpp"
#include "lindtherm/lba.hpp"
#include "lindtherm/model.hpp"

namespace lindtherm {

inline constexpr std::size_t kDefaultLiouvillianCap = 4096;

struct Liouvillian {
    Eigen::Index levels{0}; // M; the vectorized dimension is M^2
    double energy_tol{0.0};
    std::vector<std::vector<Eigen::Index>> sectors; // row indices m * M + n of each block
    std::vector<MatrixXcd> blocks;

    Eigen::Index dim() const { return levels * levels; }
    Eigen::Index index(Eigen::Index m, Eigen::Index n) const { return m * levels + n; }
    std::pair<Eigen::Index, Eigen::Index> pair(Eigen::Index idx) const {
        return {idx / levels, idx % levels};
    }

    MatrixXcd dense() const;
};

struct LiouvillianOptions {
    double energy_tol{-1.0}; // negative: 1e-9 * (E_max - E_min)
    std::size_t cap{kDefaultLiouvillianCap};
    bool parallel{true};
};

// Shared precomputation for the production and reference assemblies.
LiouvillianTerms liouvillian_terms(const EnergySpectrum& spec, const DipoleData& dip, double beta,
                                   double energy_tol);

Liouvillian build_liouvillian(const EnergySpectrum& spec, const DipoleData& dip, double beta,
                              const LiouvillianOptions& options = {});

// Every entry of the full matrix, serially; the reference for build_liouvillian.
MatrixXcd build_liouvillian_reference(const EnergySpectrum& spec, const DipoleData& dip,
                                      double beta, double energy_tol = -1.0);

struct LiouvillianSpectrum {
    VectorXcd eigenvalues;
    std::size_t zero_multiplicity{0};
    std::optional<double> tau_P;
    std::optional<double> tau_Q;
    std::size_t tau_P_degeneracy{0};
    double tol_zero{1e-10};
    double tol_imag{1e-8};
    double scale{0.0}; // largest eigenvalue modulus
};

// Classification of a full eigenvalue list: zero when |mu| < tol_zero * scale, real when
// |Im mu| < tol_imag * scale. tau_P = 1 / min |mu| over real nonzero eigenvalues; tau_Q =
// 1 / min |Re mu| over oscillating ones. Throws NoDissipativeEigenvalue.
LiouvillianSpectrum classify_spectrum(VectorXcd eigenvalues, double tol_zero = 1e-10,
                                      double tol_imag = 1e-8);

LiouvillianSpectrum qome_spectrum(const Liouvillian& L, double tol_zero = 1e-10,
                                  double tol_imag = 1e-8, bool parallel = true);

struct JumpGroup {
    double omega{0.0}; // E_n - E_m shared by every dyad |m><n| of the group
    std::vector<std::pair<std::size_t, std::size_t>> dyads;
};

std::vector<JumpGroup> jump_operator_groups(std::span<const double> energies, double tol);

struct TimesPair {
    std::optional<double> tau_P;
    std::optional<double> tau_Q;
};

struct PathologyFlags {
    bool multiple_steady_states{false};
    std::optional<bool> tauP_depends_on_N;
    std::optional<bool> tauQ_not_1_over_N;
};

struct ComparisonReport {
    TimesPair lba;
    TimesPair qome;
    DegeneracyReport degeneracy;
    bool agree_P{false};
    bool agree_Q{false};
    std::optional<double> deviation_P; // relative
    std::optional<double> deviation_Q;
    PathologyFlags pathology;
};

inline constexpr double kAgreementTol = 1e-6;

ComparisonReport compare(const EnsembleTimes& lba, const LiouvillianSpectrum& qome,
                         const DegeneracyReport& deg);

struct SeriesPoint {
    std::size_t n{1};
    EnsembleTimes lba;
    LiouvillianSpectrum qome;
};

// N-dependence flags need at least two sizes. tauP_depends_on_N: the ratio of the QOME to the
// LBA dissipation time changes with N; tauQ_not_1_over_N: the same for the decoherence time.
// Both compare against the LBA because its N-dependence is the physically consistent one.
PathologyFlags series_pathologies(std::span<const SeriesPoint> points);

} // namespace lindtherm
