// kernels_serial.cpp: reference loops and the pieces shared with the OpenMP kernels

#include "lindtherm/kernels.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "kernels_detail.hpp"

namespace lindtherm {

cplx LiouvillianTerms::entry(Eigen::Index row, Eigen::Index col) const {
    const Eigen::Index M = levels;
    const Eigen::Index m = row / M, n = row % M;
    const Eigen::Index k = col / M, j = col % M;
    cplx v{0.0, 0.0};
    if (m == k && n == j)
        v += cplx(0.0, -(energies(m) - energies(n)));
    if (n == j && level_class[k] == level_class[m])
        v -= 0.5 * escape(k, m);
    if (m == k && level_class[j] == level_class[n])
        v -= 0.5 * std::conj(escape(j, n));
    if (pair_class[k * M + m] == pair_class[j * M + n] && weight(m, k) != 0.0) {
        cplx s{0.0, 0.0};
        for (const auto& d : amplitudes)
            s += d(m, k) * std::conj(d(n, j));
        v += gamma * weight(m, k) * s;
    }
    return v;
}

namespace kernels {

namespace detail {

std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
    std::vector<Eigen::Index> strides(dims.size());
    Eigen::Index s = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        strides[i] = s;
        s *= dims[i];
    }
    return strides;
}

Eigen::Index kron_row_nnz(const std::vector<MatrixXd>& members,
                          const std::vector<Eigen::Index>& strides, Eigen::Index row) {
    Eigen::Index count = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Eigen::Index a = (row / strides[i]) % members[i].rows();
        for (Eigen::Index b = 0; b < members[i].cols(); ++b)
            if (b != a && members[i](a, b) != 0.0)
                ++count;
    }
    return count;
}

void kron_fill_row(const std::vector<MatrixXd>& members, const std::vector<Eigen::Index>& strides,
                   Eigen::Index row, int* inner, double* values) {
    // Columns of one row: neighbours differing in a single member index, plus the diagonal.
    // Collected then sorted so the compressed storage stays ordered.
    struct Item {
        Eigen::Index col;
        double value;
    };
    Item local[256];
    std::vector<Item> heap;
    Item* items = local;
    const Eigen::Index nnz = kron_row_nnz(members, strides, row);
    if (nnz > 256) {
        heap.resize(static_cast<std::size_t>(nnz));
        items = heap.data();
    }
    Eigen::Index used = 0;
    double diag = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Eigen::Index a = (row / strides[i]) % members[i].rows();
        diag += members[i](a, a);
        for (Eigen::Index b = 0; b < members[i].cols(); ++b)
            if (b != a && members[i](a, b) != 0.0)
                items[used++] = {row + (b - a) * strides[i], members[i](a, b)};
    }
    items[used++] = {row, diag};
    std::sort(items, items + used, [](const Item& x, const Item& y) { return x.col < y.col; });
    for (Eigen::Index t = 0; t < used; ++t) {
        inner[t] = static_cast<int>(items[t].col);
        values[t] = items[t].value;
    }
}

Eigen::Index product_dim(const std::vector<MatrixXd>& members) {
    Eigen::Index dim = 1;
    for (const auto& m : members)
        dim *= m.rows();
    return dim;
}

} // namespace detail

MatrixXcd assemble_liouvillian_serial(const LiouvillianTerms& terms) {
    const Eigen::Index dim = terms.levels * terms.levels;
    MatrixXcd L(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            L(r, c) = terms.entry(r, c);
    return L;
}

std::vector<std::vector<Eigen::Index>> liouvillian_sectors(const LiouvillianTerms& terms) {
    const Eigen::Index M = terms.levels;
    const Eigen::Index dim = M * M;
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto link = [&](Eigen::Index r, Eigen::Index c) {
        if (terms.entry(r, c) == cplx(0.0) && terms.entry(c, r) == cplx(0.0))
            return;
        const Eigen::Index a = find(r), b = find(c);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    };

    // Escape terms couple (m,n) with (k,n) or (m,k) inside one level class.
    for (Eigen::Index m = 0; m < M; ++m)
        for (Eigen::Index k = 0; k < M; ++k) {
            if (k == m || terms.level_class[k] != terms.level_class[m])
                continue;
            for (Eigen::Index n = 0; n < M; ++n) {
                link(m * M + n, k * M + n);
                link(n * M + m, n * M + k);
            }
        }

    // Feeding term couples (m,n) with (k,j) when E_k - E_m and E_j - E_n share a class.
    std::vector<std::vector<Eigen::Index>> by_class;
    for (Eigen::Index p = 0; p < dim; ++p) {
        const int c = terms.pair_class[p];
        if (c >= static_cast<int>(by_class.size()))
            by_class.resize(c + 1);
        by_class[c].push_back(p);
    }
    for (const auto& members : by_class)
        for (Eigen::Index km : members)
            for (Eigen::Index jn : members) {
                const Eigen::Index k = km / M, m = km % M;
                const Eigen::Index j = jn / M, n = jn % M;
                link(m * M + n, k * M + j);
            }

    std::vector<std::vector<Eigen::Index>> sectors;
    std::vector<Eigen::Index> slot(static_cast<std::size_t>(dim), -1);
    for (Eigen::Index p = 0; p < dim; ++p) {
        const Eigen::Index root = find(p);
        if (slot[root] < 0) {
            slot[root] = static_cast<Eigen::Index>(sectors.size());
            sectors.emplace_back();
        }
        sectors[slot[root]].push_back(p);
    }
    return sectors;
}

std::vector<MatrixXcd> assemble_blocks_serial(const LiouvillianTerms& terms,
                                              const std::vector<std::vector<Eigen::Index>>& sectors) {
    std::vector<MatrixXcd> blocks(sectors.size());
    for (std::size_t s = 0; s < sectors.size(); ++s)
        blocks[s] = detail::assemble_block(terms, sectors[s]);
    return blocks;
}

std::vector<VectorXcd> block_eigenvalues_serial(const std::vector<MatrixXcd>& blocks) {
    std::vector<VectorXcd> out(blocks.size());
    for (std::size_t s = 0; s < blocks.size(); ++s)
        out[s] = detail::block_eigenvalues(blocks[s]);
    return out;
}

VectorXd product_escape_rates_serial(const std::vector<VectorXd>& member_escape) {
    VectorXd rates = VectorXd::Zero(1);
    for (const auto& b : member_escape) {
        VectorXd next(rates.size() * b.size());
        for (Eigen::Index a = 0; a < rates.size(); ++a)
            for (Eigen::Index m = 0; m < b.size(); ++m)
                next(a * b.size() + m) = rates(a) + b(m);
        rates = std::move(next);
    }
    return rates;
}

SparseMatrixXd kronecker_sum_serial(const std::vector<MatrixXd>& members) {
    const Eigen::Index dim = detail::product_dim(members);
    const auto strides = detail::strides_of([&] {
        std::vector<Eigen::Index> d;
        for (const auto& m : members)
            d.push_back(m.rows());
        return d;
    }());
    std::vector<Eigen::Index> offsets(static_cast<std::size_t>(dim) + 1, 0);
    for (Eigen::Index r = 0; r < dim; ++r)
        offsets[r + 1] = offsets[r] + detail::kron_row_nnz(members, strides, r);

    SparseMatrixXd a(dim, dim);
    a.resizeNonZeros(offsets.back());
    for (Eigen::Index r = 0; r <= dim; ++r)
        a.outerIndexPtr()[r] = static_cast<int>(offsets[r]);
    for (Eigen::Index r = 0; r < dim; ++r)
        detail::kron_fill_row(members, strides, r, a.innerIndexPtr() + offsets[r],
                              a.valuePtr() + offsets[r]);
    return a;
}

void sparse_apply_serial(const SparseMatrixXd& a, const VectorXd& x, VectorXd& y) {
    y.resize(a.rows());
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        double s = 0.0;
        for (SparseMatrixXd::InnerIterator it(a, r); it; ++it)
            s += it.value() * x(it.col());
        y(r) = s;
    }
}

} // namespace kernels

} // namespace lindtherm
