// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>

#include "lindtherm/ensemble.hpp"
#include "lindtherm/kernels.hpp"
#include "lindtherm/qome.hpp"

using namespace lindtherm;

namespace {

std::vector<MatrixXd> spin_generators(int n) {
    std::vector<MatrixXd> out;
    for (double g : modulated_fields(n)) {
        const auto [spec, dip] = free_spin_system(g);
        MatrixXd s = -thermal_rates(spec, dip, 1.0).symmetric;
        s.diagonal() += thermal_rates(spec, dip, 1.0).escape;
        out.push_back(s);
    }
    return out;
}

std::vector<VectorXd> spin_escapes(int n) {
    std::vector<VectorXd> out;
    for (double g : modulated_fields(n)) {
        const auto [spec, dip] = free_spin_system(g);
        out.push_back(thermal_rates(spec, dip, 1.0).escape);
    }
    return out;
}

LiouvillianTerms spin_terms(int n) {
    const auto sys = free_spins_hamiltonian(modulated_fields(n));
    const auto spec = diagonalize(sys, -1.0, false);
    return liouvillian_terms(spec, dipole_data(sys, spec), 1.0, default_degeneracy_tol(spec.energies));
}

template <auto Kernel>
void kronecker(benchmark::State& state) {
    const auto gens = spin_generators(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(gens));
}

template <auto Kernel>
void apply(benchmark::State& state) {
    const SparseMatrixXd a = kernels::kronecker_sum_serial(spin_generators(static_cast<int>(state.range(0))));
    VectorXd x = VectorXd::LinSpaced(a.rows(), -1.0, 1.0), y(a.rows());
    for (auto _ : state) {
        Kernel(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

template <auto Kernel>
void escape(benchmark::State& state) {
    const auto b = spin_escapes(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(b));
}

template <auto Kernel>
void blocks(benchmark::State& state) {
    const auto terms = spin_terms(static_cast<int>(state.range(0)));
    const auto sectors = kernels::liouvillian_sectors(terms);
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(terms, sectors));
}

template <auto Kernel>
void eigen_blocks(benchmark::State& state) {
    const auto terms = spin_terms(static_cast<int>(state.range(0)));
    const auto b = kernels::assemble_blocks_serial(terms, kernels::liouvillian_sectors(terms));
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(b));
}

} // namespace

BENCHMARK(kronecker<kernels::kronecker_sum_serial>)->Name("kronecker_sum/serial")->DenseRange(8, 14, 3);
BENCHMARK(kronecker<kernels::kronecker_sum_omp>)->Name("kronecker_sum/omp")->DenseRange(8, 14, 3);
BENCHMARK(apply<kernels::sparse_apply_serial>)->Name("sparse_apply/serial")->DenseRange(8, 14, 3);
BENCHMARK(apply<kernels::sparse_apply_omp>)->Name("sparse_apply/omp")->DenseRange(8, 14, 3);
BENCHMARK(escape<kernels::product_escape_rates_serial>)->Name("product_escape/serial")->DenseRange(10, 18, 4);
BENCHMARK(escape<kernels::product_escape_rates_omp>)->Name("product_escape/omp")->DenseRange(10, 18, 4);
BENCHMARK(blocks<kernels::assemble_blocks_serial>)->Name("assemble_blocks/serial")->DenseRange(3, 5, 1);
BENCHMARK(blocks<kernels::assemble_blocks_omp>)->Name("assemble_blocks/omp")->DenseRange(3, 5, 1);
BENCHMARK(eigen_blocks<kernels::block_eigenvalues_serial>)->Name("block_eigenvalues/serial")->DenseRange(3, 5, 1);
BENCHMARK(eigen_blocks<kernels::block_eigenvalues_omp>)->Name("block_eigenvalues/omp")->DenseRange(3, 5, 1);

BENCHMARK_MAIN();
