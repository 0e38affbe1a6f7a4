// kernels.hpp: data-parallel inner loops with their serial reference versions
//
// Every *_omp kernel has a *_serial twin computing the same result with plain loops; the
// serial versions are the reference the tests and the benchmark compare against.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "lindtherm/core.hpp"

namespace lindtherm {

using SparseMatrixXd = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Everything needed to evaluate one entry of the QOME Liouvillian (Lamb shift dropped).
// Kronecker deltas on energies and on energy gaps are decided by class ids computed
// once with the shared energy tolerance.
struct LiouvillianTerms {
    Eigen::Index levels{0};
    VectorXd energies;
    std::vector<int> level_class; // per level
    std::vector<int> pair_class;  // per ordered pair (a, b) at a * M + b, classes of E_a - E_b
    std::array<MatrixXcd, 3> amplitudes;
    MatrixXd weight;   // W~_{q,m}, zero between levels of one class
    MatrixXcd escape;  // G_{k,m} = gamma sum_q sum_h d_{q,k} conj(d_{q,m}) W~_{q,m}
    double gamma{1.0};

    // L_{(m,n),(k,j)} with row-major vectorization.
    cplx entry(Eigen::Index row, Eigen::Index col) const;
};

namespace kernels {

// Full M^2 x M^2 assembly, every entry evaluated.
MatrixXcd assemble_liouvillian_serial(const LiouvillianTerms& terms);

// Connected components of the coupling graph; each is an invariant subspace of L.
std::vector<std::vector<Eigen::Index>> liouvillian_sectors(const LiouvillianTerms& terms);

// Dense block per sector, rows and columns ordered as in the sector.
std::vector<MatrixXcd> assemble_blocks_serial(const LiouvillianTerms& terms,
                                              const std::vector<std::vector<Eigen::Index>>& sectors);
std::vector<MatrixXcd> assemble_blocks_omp(const LiouvillianTerms& terms,
                                           const std::vector<std::vector<Eigen::Index>>& sectors);

std::vector<VectorXcd> block_eigenvalues_serial(const std::vector<MatrixXcd>& blocks);
std::vector<VectorXcd> block_eigenvalues_omp(const std::vector<MatrixXcd>& blocks);

// B_alpha = sum_i B^(i)_{alpha_i} over the product index set, last member fastest.
VectorXd product_escape_rates_serial(const std::vector<VectorXd>& member_escape);
VectorXd product_escape_rates_omp(const std::vector<VectorXd>& member_escape);

// Explicit diag(B) - C of the Kronecker-sum generator in the product basis, from the
// members' symmetrized matrices diag(B_i) - C_i.
SparseMatrixXd kronecker_sum_serial(const std::vector<MatrixXd>& members);
SparseMatrixXd kronecker_sum_omp(const std::vector<MatrixXd>& members);

void sparse_apply_serial(const SparseMatrixXd& a, const VectorXd& x, VectorXd& y);
void sparse_apply_omp(const SparseMatrixXd& a, const VectorXd& x, VectorXd& y);

int max_threads();

} // namespace kernels

} // namespace lindtherm
