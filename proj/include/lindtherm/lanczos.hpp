// lanczos.hpp: extremal eigenvalue of a symmetric operator on a deflated subspace

#pragma once

#include <cstdint>
#include <functional>

#include "lindtherm/core.hpp"

namespace lindtherm {

struct LanczosOptions {
    int max_iterations{400};
    double tolerance{1e-12}; // residual relative to the largest Ritz value
    std::uint64_t seed{20240611};
};

struct LanczosResult {
    double value{0.0};
    double residual{0.0};
    int iterations{0};
    bool converged{false};
};

using SymmetricOperator = std::function<void(const VectorXd& in, VectorXd& out)>;

// Smallest eigenvalue of `op` restricted to the orthogonal complement of `deflate`
// (a unit vector, typically a known kernel vector). Full reorthogonalization.
LanczosResult smallest_eigenvalue(const SymmetricOperator& op, Eigen::Index dim,
                                  const VectorXd& deflate, const LanczosOptions& options = {});

} // namespace lindtherm
