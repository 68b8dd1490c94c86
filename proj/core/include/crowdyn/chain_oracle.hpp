// Exact single-excitation dynamics of the cavity coupled to
// a finite tight-binding chain, used as ground truth for the Volterra solver
//
// Site 0 is the cavity, sites 1..n_sites the waveguide. The finite chain
// matches the semi-infinite waveguide until a wavefront travelling at the
// maximal group velocity 2ξ₀ returns from the far end.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "crowdyn/model.hpp"

namespace crowdyn {

struct ChainSpec {
    std::size_t n_sites{600};
    double safety{0.8};

    // safety·n_sites/(2ξ₀)
    double validity_horizon(const ModelParams& p) const;
    // Smallest n_sites whose horizon covers t.
    static std::size_t required_sites(const ModelParams& p, double t, double safety = 0.8);
};

// H[0][0] = ω_c, H[n][n] = ω₀, H[n][n+1] = −ξ₀, H[0][1] = +ξ.
Eigen::MatrixXd build_hamiltonian(const ModelParams& p, const ChainSpec& spec);

// Eigendecomposition of H, reused for every time point.
class ChainPropagator {
public:
    ChainPropagator(const ModelParams& p, const ChainSpec& spec);
    // Uses a caller-supplied Hamiltonian of dimension spec.n_sites + 1; `p`
    // supplies the uncoupled waveguide modes and the temperature.
    ChainPropagator(const Eigen::MatrixXd& H, const ModelParams& p, const ChainSpec& spec);

    // [e^{−iHt}]₀₀
    cplx propagator_element(double t) const;

    // Cavity row [e^{−iHt}]₀ₙ, n = 0..n_sites.
    Eigen::VectorXcd cavity_row(double t) const;

    // Photons in the initially empty cavity fed by the thermal waveguide:
    // Σ_m n̄(ω_m,T)|A_m(t)|², A_m the amplitude from the uncoupled sine
    // mode m into the cavity.
    double thermal_v(double t) const;
    std::vector<double> thermal_v(std::span<const double> times) const;

    std::vector<cplx> propagator(std::span<const double> times) const;

    const Eigen::VectorXd& energies() const { return energies_; }
    std::size_t dimension() const { return static_cast<std::size_t>(energies_.size()); }

private:
    Eigen::VectorXd energies_;
    Eigen::VectorXd cavity_weights_;  // S₀ₗ (cavity component of eigenvector l)
    Eigen::MatrixXd eigvecs_;
    Eigen::MatrixXd thermal_form_;     // C diag(n̄) Cᵀ with C = Sᵀ restricted to the waveguide · Φ
    bool thermal_zero_{true};
};

// Free functions matching the module surface; each call diagonalises.
cplx propagator_element(const Eigen::MatrixXd& H, double t);
double thermal_v(const Eigen::MatrixXd& H, const ModelParams& p, const ChainSpec& spec, double t);

} // namespace crowdyn
