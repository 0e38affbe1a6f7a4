// kernels_detail.hpp: helpers shared by the serial and OpenMP kernel translation units

#pragma once

#include <vector>

#include <Eigen/Eigenvalues>

#include "lindtherm/kernels.hpp"

namespace lindtherm::kernels::detail {

std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims);
Eigen::Index kron_row_nnz(const std::vector<MatrixXd>& members,
                          const std::vector<Eigen::Index>& strides, Eigen::Index row);
void kron_fill_row(const std::vector<MatrixXd>& members, const std::vector<Eigen::Index>& strides,
                   Eigen::Index row, int* inner, double* values);
Eigen::Index product_dim(const std::vector<MatrixXd>& members);

inline MatrixXcd assemble_block(const LiouvillianTerms& terms,
                                const std::vector<Eigen::Index>& sector) {
    const auto size = static_cast<Eigen::Index>(sector.size());
    MatrixXcd block(size, size);
    for (Eigen::Index r = 0; r < size; ++r)
        for (Eigen::Index c = 0; c < size; ++c)
            block(r, c) = terms.entry(sector[r], sector[c]);
    return block;
}

inline VectorXcd block_eigenvalues(const MatrixXcd& block) {
    if (block.rows() == 1)
        return block.diagonal();
    Eigen::ComplexEigenSolver<MatrixXcd> solver(block, false);
    return solver.eigenvalues();
}

} // namespace lindtherm::kernels::detail
