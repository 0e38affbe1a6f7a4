#include <doctest.h>

#include <cmath>
#include <random>

#include "lindtherm/lba.hpp"
#include "oracles.hpp"

using namespace lindtherm;

namespace {

bool throws_kind(auto&& f, ErrorKind k) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == k;
    }
    return false;
}

DipoleData dipoles_from_squared(const MatrixXd& d) {
    DipoleData dip;
    dip.squared = d;
    for (auto& a : dip.amplitudes)
        a = MatrixXcd::Zero(d.rows(), d.cols());
    return dip;
}

struct Fixture {
    EnergySpectrum spec;
    DipoleData dip;
    RateData rates;
    PauliMatrix pm;
};

Fixture make(const VectorXd& e, const MatrixXd& d, double beta) {
    Fixture f;
    f.spec = EnergySpectrum::from_levels(e, default_degeneracy_tol(e));
    f.dip = dipoles_from_squared(d);
    f.rates = thermal_rates(f.spec, f.dip, beta);
    f.pm = pauli_matrix(f.rates, f.spec);
    return f;
}

Fixture free_spin(double field, double beta) {
    auto [s, d] = free_spin_system(field);
    Fixture f;
    f.spec = s;
    f.dip = d;
    f.rates = thermal_rates(s, d, beta);
    f.pm = pauli_matrix(f.rates, s);
    return f;
}

Fixture three_level() {
    VectorXd e(3);
    e << 0.0, 1.0, 2.3;
    MatrixXd d = MatrixXd::Ones(3, 3);
    d.diagonal().setZero();
    return make(e, d, 1.0);
}

Fixture random_system(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::uniform_real_distribution<double> w(0.1, 2.0);
    VectorXd e(dim);
    for (auto& x : e)
        x = u(rng);
    std::sort(e.begin(), e.end());
    MatrixXd d = MatrixXd::Zero(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = m + 1; n < dim; ++n)
            d(m, n) = d(n, m) = w(rng);
    return make(e, d, 0.5 + u(rng));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST_CASE("free spin symmetric rate") {
    const auto f = free_spin(1.0, 1.0);
    const double expect = 16.0 / (std::exp(1.0) - std::exp(-1.0));
    CHECK(rel(f.rates.symmetric(0, 1), expect) < 1e-14);
    CHECK(f.rates.symmetric(0, 1) == doctest::Approx(6.8073).epsilon(1e-5));
    CHECK(f.rates.symmetric(0, 1) == f.rates.symmetric(1, 0));
}

TEST_CASE("no coupling gives no rates") {
    VectorXd e(3);
    e << 0.0, 1.0, 2.0;
    const auto f = make(e, MatrixXd::Zero(3, 3), 1.0);
    CHECK(f.rates.symmetric.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.rates.transitions.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.rates.escape.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.pm.generator.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.pm.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero_multiplicity(f.pm) == 3);
}

TEST_CASE("rate structure on random systems") {
    std::mt19937_64 rng(2024);
    for (int draw = 0; draw < 10; ++draw) {
        const auto f = random_system(rng, 4);
        const auto& e = f.spec.energies;
        const double beta = f.rates.beta;
        for (int m = 0; m < 4; ++m) {
            double b = 0.0;
            for (int j = 0; j < 4; ++j)
                b += f.rates.transitions(j, m);
            CHECK(f.rates.escape(m) == b);
            CHECK(f.rates.symmetric(m, m) == 0.0);
            for (int n = 0; n < 4; ++n) {
                if (m == n)
                    continue;
                CHECK(f.rates.symmetric(m, n) == f.rates.symmetric(n, m));
                const double l2 = f.rates.transitions(m, n);
                CHECK(rel(l2, f.rates.symmetric(m, n) * std::exp(-beta * (e(m) - e(n)) / 2)) < 1e-12);
                CHECK(rel(l2, f.dip.squared(m, n) * oracle::boltzmann_weight(e(m), e(n), beta)) < 1e-12);
                CHECK(rel(l2 * std::exp(-beta * e(n)), f.rates.transitions(n, m) * std::exp(-beta * e(m))) < 1e-12);
            }
        }
    }
}

TEST_CASE("thermal kernel far from the ordinary range") {
    const double big = thermal_kernel(1000.0, 1.0);
    CHECK(std::isfinite(big));
    CHECK(big > 0.0);
    CHECK(rel(big, std::exp(3 * std::log(1000.0) - 500.0)) < 1e-12);
    CHECK(rel(transition_weight(0.0, 1000.0, 1.0), std::pow(1000.0, 3)) < 1e-12);
    CHECK(transition_weight(1000.0, 0.0, 1.0) < 1e-300);

    const double tiny = 1e-10;
    CHECK(rel(thermal_kernel(tiny, 1.0), tiny * tiny) < 1e-12);
    CHECK(thermal_kernel(0.0, 1.0) == 0.0);
    for (double x : {1e-7, 1e-3, 0.5, 3.0, 50.0, 699.0})
        CHECK(rel(thermal_kernel(x, 1.0), x * x * x / (2 * std::sinh(x / 2))) < 1e-13);
}

TEST_CASE("bad inputs to the rate builder") {
    auto [s, d] = free_spin_system(1.0);
    CHECK(throws_kind([&] { thermal_rates(s, d, 0.0); }, ErrorKind::NonPositiveBeta));
    CHECK(throws_kind([&] { thermal_rates(s, d, -1.0); }, ErrorKind::NonPositiveBeta));
    CHECK(throws_kind([&] { thermal_rates(s, d, INFINITY); }, ErrorKind::NonPositiveBeta));
    VectorXd e(2);
    e << 1.0, 1.0;
    const auto flat = EnergySpectrum::from_levels(e, 0.0);
    CHECK(throws_kind([&] { thermal_rates(flat, d, 1.0); }, ErrorKind::DegenerateSpectrum));
}

TEST_CASE("free spin Pauli matrix") {
    for (double beta : {0.3, 1.0, 2.5}) {
        const auto f = free_spin(1.0, beta);
        const double c = 16.0 / (std::exp(beta) - std::exp(-beta));
        MatrixXd a(2, 2);
        a << std::exp(-beta), -std::exp(beta), -std::exp(-beta), std::exp(beta);
        a *= c;
        CHECK((f.pm.generator - a).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
        CHECK(std::abs(f.pm.eigenvalues(0)) < 1e-12);
        CHECK(rel(f.pm.eigenvalues(1), 16.0 / std::tanh(beta)) < 1e-13);
    }
}

TEST_CASE("symmetrized and nonsymmetric solvers agree") {
    const auto f = three_level();
    const auto ref = oracle::nonsymmetric_real_eigenvalues(f.pm.generator);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(f.pm.eigenvalues(k) - ref[k]) < 1e-9);
}

TEST_CASE("Pauli matrix properties") {
    std::mt19937_64 rng(99);
    for (int draw = 0; draw < 10; ++draw) {
        const auto f = random_system(rng, 2 + draw % 4);
        const auto& a = f.pm.generator;
        const Eigen::Index M = a.rows();
        const double scale = a.cwiseAbs().maxCoeff();
        CHECK(a.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);

        VectorXd p(M);
        for (Eigen::Index m = 0; m < M; ++m)
            p(m) = std::exp(f.rates.beta * f.spec.energies(m) / 2);
        const MatrixXd sim = p.asDiagonal() * a * p.cwiseInverse().asDiagonal();
        MatrixXd sym = -f.rates.symmetric;
        sym.diagonal() += f.rates.escape;
        CHECK((sim - sym).cwiseAbs().maxCoeff() <= 1e-12 * scale);

        Eigen::EigenSolver<MatrixXd> es(a, false);
        CHECK(es.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-12 * scale);
        CHECK(f.pm.eigenvalues.minCoeff() >= -1e-10 * scale);
        CHECK(std::abs(f.pm.eigenvalues(0)) <= 1e-10 * f.pm.eigenvalues(M - 1));

        const VectorXd gibbs = gibbs_state(f.spec, f.rates.beta);
        CHECK((f.pm.stationary - gibbs).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((a * gibbs).cwiseAbs().maxCoeff() < 1e-10 * scale);
    }
}

TEST_CASE("kernel vector of A is the Gibbs distribution") {
    const auto f = three_level();
    Eigen::FullPivLU<MatrixXd> lu(f.pm.generator);
    const MatrixXd k = lu.kernel();
    REQUIRE(k.cols() == 1);
    const VectorXd v = k.col(0) / k.col(0).sum();
    CHECK((v - gibbs_state(f.spec, 1.0)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("thermalization times") {
    const auto f = free_spin(1.0, 1.0);
    const auto t = thermalization_times(f.pm, f.rates);
    CHECK(rel(t.tau_P, std::tanh(1.0) / 16) < 1e-13);
    CHECK(t.tau_P == doctest::Approx(0.04760).epsilon(1e-4));
    CHECK(t.tau_Q == doctest::Approx(0.09520).epsilon(1e-4));
    CHECK(rel(t.tau_Q, 2 * t.tau_P) < 1e-13);
    CHECK(t.tau == std::max(t.tau_P, t.tau_Q));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int draw = 0; draw < 5; ++draw) {
        VectorXd e(2);
        e << 0.0, u(rng);
        MatrixXd d(2, 2);
        d << 0.0, u(rng), 0.0, 0.0;
        d(1, 0) = d(0, 1);
        const auto g = make(e, d, u(rng));
        const auto tt = thermalization_times(g.pm, g.rates);
        CHECK(rel(tt.tau_Q, 2 * tt.tau_P) < 1e-12);
    }
}

TEST_CASE("times agree with the slowest decay of exp(-A t)") {
    const auto f = three_level();
    const auto t = thermalization_times(f.pm, f.rates);
    VectorXd p0(3);
    p0 << 0.0, 0.0, 1.0;
    const VectorXd eq = gibbs_state(f.spec, 1.0);
    const double mu3 = f.pm.eigenvalues(2);
    const double t1 = 30.0 / (mu3 - t.mu2);
    const double dt = 0.1 * t.tau_P;
    const VectorXd a = oracle::expm(MatrixXd(-f.pm.generator * t1)) * p0 - eq;
    const VectorXd b = oracle::expm(MatrixXd(-f.pm.generator * (t1 + dt))) * p0 - eq;
    const double fitted = std::log(a.norm() / b.norm()) / dt;
    CHECK(rel(1.0 / fitted, t.tau_P) < 1e-6);

    const MatrixXcd mu = decoherence_rates(f.rates, f.spec.energies);
    double slowest = INFINITY;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            if (m != n)
                slowest = std::min(slowest, mu(m, n).real());
    CHECK(rel(1.0 / slowest, t.tau_Q) < 1e-13);
}

TEST_CASE("ergodicity violation on decoupled blocks") {
    VectorXd e(4);
    e << 0.0, 1.0, 2.2, 3.7;
    MatrixXd d = MatrixXd::Zero(4, 4);
    d(0, 1) = d(1, 0) = 1.0;
    d(2, 3) = d(3, 2) = 1.0;
    const auto f = make(e, d, 1.0);
    CHECK(zero_multiplicity(f.pm) == 2);
    CHECK(throws_kind([&] { thermalization_times(f.pm, f.rates); }, ErrorKind::ErgodicityViolation));
}

TEST_CASE("decoherence rates") {
    const auto f = free_spin(1.0, 1.0);
    const auto t = thermalization_times(f.pm, f.rates);
    const MatrixXcd mu = decoherence_rates(f.rates, f.spec.energies);
    CHECK(rel(mu(0, 1).real(), 1.0 / t.tau_Q) < 1e-13);
    CHECK(mu(0, 0) == cplx(0.0));
    CHECK(mu(0, 1).imag() == doctest::Approx(-2.0));

    const auto g = three_level();
    const MatrixXcd flat = decoherence_rates(g.rates, VectorXd::Constant(3, 0.7));
    CHECK(flat.imag().cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(3);
    const MatrixXcd rho0 = oracle::random_density(3, rng);
    const MatrixXcd m3 = decoherence_rates(g.rates, g.spec.energies);
    for (double tt : {0.1, 1.0}) {
        const MatrixXcd rho = evolve(g.pm, m3, rho0, tt);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
                if (m != n)
                    CHECK(std::abs(std::abs(rho(m, n)) - std::abs(rho0(m, n)) * std::exp(-m3(m, n).real() * tt)) < 1e-10);
    }
}

TEST_CASE("Gibbs distribution") {
    VectorXd e(3);
    e << -1.0, 0.5, 4.0;
    CHECK((gibbs_state(e, 0.0) - VectorXd::Constant(3, 1.0 / 3)).cwiseAbs().maxCoeff() < 1e-15);
    VectorXd e2(2);
    e2 << -1.0, 1.0;
    const VectorXd p = gibbs_state(e2, 1.0);
    const double z = std::exp(1.0) + std::exp(-1.0);
    CHECK(std::abs(p(0) - std::exp(1.0) / z) < 1e-15);
    CHECK(std::abs(p(1) - std::exp(-1.0) / z) < 1e-15);
    VectorXd far(3);
    far << 0.0, 500.0, 2000.0;
    const VectorXd q = gibbs_state(far, 3.0);
    CHECK(std::abs(q.sum() - 1.0) < 1e-14);
    CHECK(std::isfinite(gibbs_state(far, -3.0).sum()));
}

TEST_CASE("evolution") {
    const auto f = free_spin(1.0, 1.0);
    const MatrixXcd mu = decoherence_rates(f.rates, f.spec.energies);
    const VectorXd eq = gibbs_state(f.spec, 1.0);
    MatrixXcd gibbs = eq.cast<cplx>().asDiagonal();
    for (double t : {0.0, 0.3, 10.0})
        CHECK((evolve(f.pm, mu, gibbs, t) - gibbs).cwiseAbs().maxCoeff() < 1e-13);

    MatrixXcd ground = MatrixXcd::Zero(2, 2);
    ground(0, 0) = 1.0;
    const double mu2 = f.pm.eigenvalues(1);
    for (double t : {0.01, 0.05, 0.2}) {
        const MatrixXcd rho = evolve(f.pm, mu, ground, t);
        CHECK(std::abs(rho(1, 1).real() - eq(1) * (1 - std::exp(-mu2 * t))) < 1e-13);
    }

    CHECK(throws_kind([&] { evolve(f.pm, mu, ground, -1.0); }, ErrorKind::NegativeTime));
    MatrixXcd bad = ground;
    bad(0, 0) = 2.0;
    CHECK(throws_kind([&] { evolve(f.pm, mu, bad, 1.0); }, ErrorKind::InvalidDensityMatrix));
    bad = ground;
    bad(0, 1) = 0.3;
    CHECK(throws_kind([&] { evolve(f.pm, mu, bad, 1.0); }, ErrorKind::InvalidDensityMatrix));
    MatrixXcd neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK(throws_kind([&] { evolve(f.pm, mu, neg, 1.0); }, ErrorKind::InvalidDensityMatrix));
}

TEST_CASE("relaxation is monotone in the weighted norm") {
    const auto f = three_level();
    const MatrixXcd mu = decoherence_rates(f.rates, f.spec.energies);
    std::mt19937_64 rng(17);
    const MatrixXcd rho0 = oracle::random_density(3, rng);
    const VectorXd eq = gibbs_state(f.spec, 1.0);
    VectorXd w(3);
    for (int m = 0; m < 3; ++m)
        w(m) = std::exp(f.spec.energies(m) / 2);
    double last = INFINITY;
    for (int k = 0; k < 10; ++k) {
        const double t = 0.02 * k * k;
        const VectorXd p = evolve(f.pm, mu, rho0, t).diagonal().real();
        const double dist = (p - eq).cwiseProduct(w).norm();
        CHECK(dist <= last * (1 + 1e-12));
        CHECK(std::abs(p.sum() - 1.0) < 1e-12);
        last = dist;
    }
}

TEST_CASE("seeded evolutions preserve density matrices and reach Gibbs") {
    std::mt19937_64 rng(20240611);
    for (int draw = 0; draw < 20; ++draw) {
        const auto f = random_system(rng, 2 + draw % 3);
        const Eigen::Index M = f.spec.energies.size();
        const MatrixXcd mu = decoherence_rates(f.rates, f.spec.energies);
        const auto times = thermalization_times(f.pm, f.rates);
        const MatrixXcd rho0 = oracle::random_density(M, rng);
        for (double t : {0.1 * times.tau, times.tau, 3 * times.tau}) {
            const MatrixXcd rho = evolve(f.pm, mu, rho0, t);
            CHECK(std::abs(rho.trace() - cplx(1.0)) < 1e-10);
            CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= -1e-9);
        }
        const MatrixXcd late = evolve(f.pm, mu, rho0, 50 * times.tau);
        const MatrixXcd gibbs = gibbs_state(f.spec, f.rates.beta).cast<cplx>().asDiagonal();
        CHECK((late - gibbs).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("Lindblad-based generator against its operator form") {
    std::mt19937_64 rng(8);
    for (int draw = 0; draw < 5; ++draw) {
        const auto f = random_system(rng, 3 + draw % 2);
        const MatrixXcd l = lba_liouvillian(f.rates, f.spec.energies);
        const MatrixXcd ref = oracle::lindblad_dyadic(f.spec.energies, f.rates.transitions);
        CHECK((l - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
    }
}
