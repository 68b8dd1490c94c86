#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "crowdyn/chain_oracle.hpp"
#include "crowdyn/spectral.hpp"
#include "test_support.hpp"

using namespace crowdyn;
using crowdyn::testing::reference_params;

namespace {

// e^{-iHt} applied to `psi` by classical Runge-Kutta with a fine fixed step.
Eigen::VectorXcd rk4_evolve(const Eigen::MatrixXd& H, Eigen::VectorXcd psi, double t, int steps) {
    const Eigen::MatrixXcd A = cplx{0.0, -1.0} * H.cast<cplx>();
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXcd k1 = A * psi;
        const Eigen::VectorXcd k2 = A * (psi + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = A * (psi + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = A * (psi + h * k3);
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

ModelParams small_params(double eta, double temperature) {
    ModelParams p;
    p.omega0 = 4.0;
    p.xi0 = 1.0;
    p.omega_c = 4.3;
    p.eta = eta;
    p.temperature = temperature;
    return p;
}

} // namespace

TEST_CASE("Hamiltonian layout") {
    ModelParams p;
    p.omega_c = 5.0;
    p.omega0 = 4.0;
    p.xi0 = 1.0;
    p.eta = 2.0;
    const auto H = build_hamiltonian(p, ChainSpec{2, 0.8});
    Eigen::MatrixXd expected(3, 3);
    expected << 5, 2, 0, 2, 4, -1, 0, -1, 4;
    CHECK(H == expected);

    p.eta = 0.0;
    const auto H0 = build_hamiltonian(p, ChainSpec{10, 0.8});
    CHECK(H0.rows() == 11);
    CHECK(H0.row(0).tail(10).isZero());
    CHECK(H0.col(0).tail(10).isZero());
    CHECK(H0 == H0.transpose());
}

TEST_CASE("uncoupled waveguide has the open-chain spectrum") {
    auto p = reference_params(0.0);
    const std::size_t n = 50;
    const auto H = build_hamiltonian(p, ChainSpec{n, 0.8});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.bottomRightCorner(n, n));
    std::vector<double> expected;
    for (std::size_t m = 1; m <= n; ++m) {
        expected.push_back(p.omega0 - 2.0 * p.xi0 * std::cos(static_cast<double>(m) * std::numbers::pi / (n + 1.0)));
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t m = 0; m < n; ++m) {
        CHECK(es.eigenvalues()(static_cast<Eigen::Index>(m)) == doctest::Approx(expected[m]).epsilon(1e-12));
    }
}

TEST_CASE("propagator basics") {
    const auto p = reference_params(1.5);
    const ChainPropagator prop(p, ChainSpec{100, 0.8});
    CHECK(std::abs(prop.propagator_element(0.0) - 1.0) < 1e-13);
    CHECK(prop.thermal_v(0.0) == doctest::Approx(0.0).epsilon(1e-13));

    const auto p0 = reference_params(0.0, 0.5);
    const ChainPropagator free(p0, ChainSpec{100, 0.8});
    for (double t : {0.5, 7.0, 30.0}) {
        CHECK(std::abs(free.propagator_element(t) - std::polar(1.0, -p0.omega_c * t)) < 1e-12);
        CHECK(std::abs(free.thermal_v(t)) < 1e-12);
    }

    const auto cold = reference_params(1.5, 1.0, 0.0);
    const ChainPropagator c(cold, ChainSpec{100, 0.8});
    for (double t : {0.5, 7.0, 30.0}) CHECK(c.thermal_v(t) == 0.0);

    CHECK_THROWS_AS(ChainPropagator(p, ChainSpec{7, 0.8}), ConfigError);
}

TEST_CASE("cavity row is normalised") {
    const auto p = reference_params(2.0, 1.025);
    const ChainPropagator prop(p, ChainSpec{300, 0.8});
    for (double t : {0.0, 1.3, 12.0, 48.0, 90.0}) {
        CHECK(prop.cavity_row(t).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(prop.cavity_row(t)(0) - prop.propagator_element(t)) < 1e-13);
    }
}

TEST_CASE("propagator and thermal photons agree with direct time stepping") {
    const auto p = small_params(1.3, 300.0);
    const ChainSpec spec{20, 0.8};
    const auto H = build_hamiltonian(p, spec);
    const ChainPropagator prop(H, p, spec);
    const Eigen::Index dim = H.rows();
    const double nodes = static_cast<double>(spec.n_sites) + 1.0;

    for (double t : {0.7, 3.0, 6.5}) {
        // Cavity row of e^{-iHt}: evolve each basis vector and read the cavity entry.
        Eigen::VectorXcd row(dim);
        for (Eigen::Index n = 0; n < dim; ++n) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
            e(n) = 1.0;
            row(n) = rk4_evolve(H, e, t, 20000)(0);
        }
        CHECK(std::abs(prop.propagator_element(t) - row(0)) < 1e-10);
        CHECK(std::abs(propagator_element(H, t) - row(0)) < 1e-10);

        // Σ_m n̄(ω_m) |Σ_n U_0n φ_m(n)|² with sine modes of the bare chain.
        double v = 0.0;
        for (std::size_t m = 1; m <= spec.n_sites; ++m) {
            const double k = static_cast<double>(m) * std::numbers::pi / nodes;
            cplx amp{0.0, 0.0};
            for (std::size_t n = 1; n <= spec.n_sites; ++n) {
                amp += row(static_cast<Eigen::Index>(n)) * std::sqrt(2.0 / nodes) * std::sin(static_cast<double>(n) * k);
            }
            v += bose_occupation(p.omega0 - 2.0 * p.xi0 * std::cos(k), p.temperature) * std::norm(amp);
        }
        CHECK(prop.thermal_v(t) == doctest::Approx(v).epsilon(1e-9));
        CHECK(thermal_v(H, p, spec, t) == doctest::Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("batched evaluation matches pointwise evaluation") {
    const auto p = reference_params(1.0);
    const ChainPropagator prop(p, ChainSpec{120, 0.8});
    std::vector<double> times;
    for (int i = 0; i < 600; ++i) times.push_back(0.08 * i);
    const auto u = prop.propagator(times);
    const auto v = prop.thermal_v(times);
    REQUIRE(u.size() == times.size());
    for (std::size_t i = 0; i < times.size(); i += 37) {
        CHECK(std::abs(u[i] - prop.propagator_element(times[i])) < 1e-13);
        CHECK(v[i] == doctest::Approx(prop.thermal_v(times[i])).epsilon(1e-11));
    }
}

TEST_CASE("validity horizon") {
    const auto p = reference_params();
    const ChainSpec spec{600, 0.8};
    CHECK(spec.validity_horizon(p) == doctest::Approx(0.8 * 600 / (2 * 1.24)));
    const double t_max = 60.0 / p.xi0;
    CHECK(ChainSpec::required_sites(p, t_max) == 150);
    CHECK(ChainSpec{150, 0.8}.validity_horizon(p) >= t_max * (1 - 1e-12));
    CHECK(ChainSpec{149, 0.8}.validity_horizon(p) < t_max);
}

TEST_CASE("doubling the chain leaves u unchanged within the horizon") {
    const auto p = reference_params(1.5);
    const ChainPropagator a(p, ChainSpec{600, 0.8});
    const ChainPropagator b(p, ChainSpec{1200, 0.8});
    std::vector<double> times;
    for (int i = 0; i <= 600; ++i) times.push_back(0.1 * i / p.xi0);
    const auto ua = a.propagator(times);
    const auto ub = b.propagator(times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(ua[i] - ub[i]));
    CHECK(worst < 1e-6);
}
