#include "crowdyn/chain_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "crowdyn/spectral.hpp"

namespace crowdyn {

double ChainSpec::validity_horizon(const ModelParams& p) const {
    return safety * static_cast<double>(n_sites) / (2.0 * p.xi0);
}

std::size_t ChainSpec::required_sites(const ModelParams& p, double t, double safety) {
    return static_cast<std::size_t>(std::ceil(2.0 * p.xi0 * t / safety - 1e-9));
}

Eigen::MatrixXd build_hamiltonian(const ModelParams& p, const ChainSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(spec.n_sites + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    H(0, 0) = p.omega_c;
    for (Eigen::Index n = 1; n < dim; ++n) H(n, n) = p.omega0;
    for (Eigen::Index n = 1; n + 1 < dim; ++n) H(n, n + 1) = H(n + 1, n) = -p.xi0;
    if (dim > 1) H(0, 1) = H(1, 0) = p.xi();
    return H;
}

namespace {

// Uncoupled open-chain modes φ_m(n) = sqrt(2/(N+1)) sin(n k_m), k_m = mπ/(N+1),
// energies ω₀ − 2ξ₀cos k_m; rows n = 1..N, columns m = 1..N.
Eigen::MatrixXd sine_modes(std::size_t n_sites) {
    const auto N = static_cast<Eigen::Index>(n_sites);
    const double norm = std::sqrt(2.0 / static_cast<double>(N + 1));
    Eigen::MatrixXd phi(N, N);
    for (Eigen::Index n = 0; n < N; ++n) {
        for (Eigen::Index m = 0; m < N; ++m) {
            const double k = static_cast<double>(m + 1) * std::numbers::pi / static_cast<double>(N + 1);
            phi(n, m) = norm * std::sin(static_cast<double>(n + 1) * k);
        }
    }
    return phi;
}

} // namespace

ChainPropagator::ChainPropagator(const ModelParams& p, const ChainSpec& spec)
    : ChainPropagator(build_hamiltonian(p, spec), p, spec) {}

ChainPropagator::ChainPropagator(const Eigen::MatrixXd& H, const ModelParams& p, const ChainSpec& spec) {
    if (spec.n_sites < 8) throw ConfigError("chain needs at least 8 sites");
    if (H.rows() != static_cast<Eigen::Index>(spec.n_sites + 1) || H.cols() != H.rows()) {
        throw ConfigError("hamiltonian does not match chain");
    }
    validate(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    energies_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors();
    cavity_weights_ = eigvecs_.row(0).transpose();

    const auto N = static_cast<Eigen::Index>(spec.n_sites);
    Eigen::VectorXd occupation(N);
    for (Eigen::Index m = 0; m < N; ++m) {
        const double k = static_cast<double>(m + 1) * std::numbers::pi / static_cast<double>(N + 1);
        occupation(m) = bose_occupation(p.omega0 - 2.0 * p.xi0 * std::cos(k), p.temperature);
    }
    thermal_zero_ = occupation.maxCoeff() == 0.0;
    if (!thermal_zero_) {
        // A_m(t) = Σ_l S₀ₗ e^{−iε_l t} C_lm, C = S[1:,:]ᵀ Φ
        const Eigen::MatrixXd C = eigvecs_.bottomRows(N).transpose() * sine_modes(spec.n_sites);
        thermal_form_ = C * occupation.asDiagonal() * C.transpose();
    }
}

cplx ChainPropagator::propagator_element(double t) const {
    cplx acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < energies_.size(); ++l) {
        acc += cavity_weights_(l) * cavity_weights_(l) * std::polar(1.0, -energies_(l) * t);
    }
    return acc;
}

std::vector<cplx> ChainPropagator::propagator(std::span<const double> times) const {
    std::vector<cplx> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) out[j] = propagator_element(times[j]);
    return out;
}

Eigen::VectorXcd ChainPropagator::cavity_row(double t) const {
    Eigen::VectorXcd w(energies_.size());
    for (Eigen::Index l = 0; l < energies_.size(); ++l) w(l) = cavity_weights_(l) * std::polar(1.0, -energies_(l) * t);
    return eigvecs_ * w;
}

double ChainPropagator::thermal_v(double t) const {
    const double ts[] = {t};
    return thermal_v(std::span<const double>(ts, 1))[0];
}

std::vector<double> ChainPropagator::thermal_v(std::span<const double> times) const {
    std::vector<double> out(times.size(), 0.0);
    if (thermal_zero_) return out;
    constexpr std::size_t block = 256;
    const Eigen::Index dim = energies_.size();
    for (std::size_t start = 0; start < times.size(); start += block) {
        const auto cols = static_cast<Eigen::Index>(std::min(block, times.size() - start));
        // v(t) = wᴴ D w with w_l = S₀ₗ e^{−iε_l t}; real and imaginary parts
        // of w go through the real symmetric D separately.
        Eigen::MatrixXd wr(dim, cols), wi(dim, cols);
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double t = times[start + static_cast<std::size_t>(c)];
            for (Eigen::Index l = 0; l < dim; ++l) {
                const double phase = -energies_(l) * t;
                wr(l, c) = cavity_weights_(l) * std::cos(phase);
                wi(l, c) = cavity_weights_(l) * std::sin(phase);
            }
        }
        const Eigen::MatrixXd dr = thermal_form_ * wr;
        const Eigen::MatrixXd di = thermal_form_ * wi;
        for (Eigen::Index c = 0; c < cols; ++c) {
            out[start + static_cast<std::size_t>(c)] = wr.col(c).dot(dr.col(c)) + wi.col(c).dot(di.col(c));
        }
    }
    return out;
}

cplx propagator_element(const Eigen::MatrixXd& H, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    cplx acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < H.rows(); ++l) {
        const double s = es.eigenvectors()(0, l);
        acc += s * s * std::polar(1.0, -es.eigenvalues()(l) * t);
    }
    return acc;
}

double thermal_v(const Eigen::MatrixXd& H, const ModelParams& p, const ChainSpec& spec, double t) {
    return ChainPropagator(H, p, spec).thermal_v(t);
}

} // namespace crowdyn
