// lanczos.cpp: extremal eigenvalue of a symmetric operator on a deflated subspace

#include "lindtherm/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

namespace lindtherm {

namespace {

void project_out(VectorXd& v, const VectorXd& u) { v -= u.dot(v) * u; }

} // namespace

LanczosResult smallest_eigenvalue(const SymmetricOperator& op, Eigen::Index dim,
                                  const VectorXd& deflate, const LanczosOptions& options) {
    LanczosResult result;
    const Eigen::Index space = deflate.size() ? dim - 1 : dim;
    if (space <= 0)
        return result;
    const int max_iter = static_cast<int>(std::min<Eigen::Index>(options.max_iterations, space));

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v(i) = normal(rng);
    if (deflate.size())
        project_out(v, deflate);
    v.normalize();

    std::vector<VectorXd> basis;
    std::vector<double> alpha, beta;
    VectorXd w(dim);

    for (int k = 0; k < max_iter; ++k) {
        basis.push_back(v);
        op(v, w);
        const double a = v.dot(w);
        alpha.push_back(a);
        // Two passes of classical Gram-Schmidt against everything seen so far.
        for (int pass = 0; pass < 2; ++pass) {
            if (deflate.size())
                project_out(w, deflate);
            for (const auto& q : basis)
                project_out(w, q);
        }
        const double b = w.norm();

        const int m = k + 1;
        const bool check = (m % 5 == 0) || m == max_iter || b < 1e-14;
        if (check) {
            MatrixXd t = MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m)
                    t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<MatrixXd> tri(t);
            const double ritz = tri.eigenvalues()(0);
            const double scale = std::max(tri.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
            const double residual = std::abs(b * tri.eigenvectors()(m - 1, 0));
            result.value = ritz;
            result.residual = residual / scale;
            result.iterations = m;
            if (result.residual <= options.tolerance || b < 1e-14) {
                result.converged = true;
                return result;
            }
        }
        if (b < 1e-14)
            break;
        beta.push_back(b);
        v = w / b;
    }
    return result;
}

} // namespace lindtherm
