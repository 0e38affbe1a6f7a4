// kernels_omp.cpp: OpenMP versions of the data-parallel kernels

#include "lindtherm/kernels.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_detail.hpp"

namespace lindtherm::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

// Largest blocks first so dynamic scheduling does not finish on a straggler.
std::vector<std::size_t> by_size_desc(const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
    return order;
}

} // namespace

std::vector<MatrixXcd> assemble_blocks_omp(const LiouvillianTerms& terms,
                                           const std::vector<std::vector<Eigen::Index>>& sectors) {
    std::vector<std::size_t> sizes;
    for (const auto& s : sectors)
        sizes.push_back(s.size());
    const auto order = by_size_desc(sizes);
    std::vector<MatrixXcd> blocks(sectors.size());
    const auto count = static_cast<long>(order.size());
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < count; ++t) {
        const std::size_t s = order[t];
        blocks[s] = detail::assemble_block(terms, sectors[s]);
    }
    return blocks;
}

std::vector<VectorXcd> block_eigenvalues_omp(const std::vector<MatrixXcd>& blocks) {
    std::vector<std::size_t> sizes;
    for (const auto& b : blocks)
        sizes.push_back(static_cast<std::size_t>(b.rows()));
    const auto order = by_size_desc(sizes);
    std::vector<VectorXcd> out(blocks.size());
    const auto count = static_cast<long>(order.size());
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < count; ++t) {
        const std::size_t s = order[t];
        out[s] = detail::block_eigenvalues(blocks[s]);
    }
    return out;
}

VectorXd product_escape_rates_omp(const std::vector<VectorXd>& member_escape) {
    VectorXd rates = VectorXd::Zero(1);
    for (const auto& b : member_escape) {
        const Eigen::Index mb = b.size();
        VectorXd next(rates.size() * mb);
#pragma omp parallel for schedule(static)
        for (Eigen::Index a = 0; a < rates.size(); ++a)
            for (Eigen::Index m = 0; m < mb; ++m)
                next(a * mb + m) = rates(a) + b(m);
        rates = std::move(next);
    }
    return rates;
}

SparseMatrixXd kronecker_sum_omp(const std::vector<MatrixXd>& members) {
    const Eigen::Index dim = detail::product_dim(members);
    std::vector<Eigen::Index> dims;
    for (const auto& m : members)
        dims.push_back(m.rows());
    const auto strides = detail::strides_of(dims);

    std::vector<Eigen::Index> offsets(static_cast<std::size_t>(dim) + 1, 0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < dim; ++r)
        offsets[r + 1] = detail::kron_row_nnz(members, strides, r);
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

    SparseMatrixXd a(dim, dim);
    a.resizeNonZeros(offsets.back());
    for (Eigen::Index r = 0; r <= dim; ++r)
        a.outerIndexPtr()[r] = static_cast<int>(offsets[r]);
    int* inner = a.innerIndexPtr();
    double* values = a.valuePtr();
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < dim; ++r)
        detail::kron_fill_row(members, strides, r, inner + offsets[r], values + offsets[r]);
    return a;
}

void sparse_apply_omp(const SparseMatrixXd& a, const VectorXd& x, VectorXd& y) {
    y.resize(a.rows());
    const int* outer = a.outerIndexPtr();
    const int* inner = a.innerIndexPtr();
    const double* values = a.valuePtr();
    const Eigen::Index rows = a.rows();
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < rows; ++r) {
        double s = 0.0;
        for (int t = outer[r]; t < outer[r + 1]; ++t)
            s += values[t] * x(inner[t]);
        y(r) = s;
    }
}

} // namespace lindtherm::kernels
