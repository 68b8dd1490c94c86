#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "crowdyn/model.hpp"

namespace crowdyn {

// α(t_j) = u[j]·α₀
std::vector<cplx> amplitude(std::span<const cplx> u, cplx alpha0);

// n[j] = |u[j]|²·n0 + v[j]
std::vector<double> photon_number(std::span<const cplx> u, std::span<const double> v, double n0);

// I[j] = −ṅ(t_j): photon current into the waveguide, central differences
// with one-sided ends.
std::vector<double> photon_current(std::span<const double> n, double dt);

// Reduced cavity state
//   ρ ∝ Σ_n vⁿ/(1+v)^{n+1} |z,n⟩⟨z,n|,   z = α/(1+v),   |z,n⟩ = e^{z a†}|n⟩,
// in the Fock basis {|0⟩..|n_max⟩}, normalised by its computed trace.
struct FockDensityMatrix {
    std::size_t n_max{0};
    Eigen::MatrixXcd elements;
    cplx alpha{0.0, 0.0};
    double v{0.0};
    double truncation_error{0.0};  // discarded mixture weight plus Fock tail

    double trace() const { return elements.trace().real(); }
    double mean_photon_number() const;  // tr[a†a ρ] in the truncated basis
};

inline constexpr double kFockTailLimit = 1e-6;

// Throws NumericalError("truncation too small") if ρ[n_max][n_max] exceeds
// kFockTailLimit of the trace; ConfigError if v < 0 or n_max < 1.
FockDensityMatrix density_matrix(cplx alpha, double v, std::size_t n_max);

// Doubles n_max from `n_start` until the tail criterion holds; gives up with
// NumericalError beyond `n_cap`.
FockDensityMatrix density_matrix_auto(cplx alpha, double v, std::size_t n_start = 64, std::size_t n_cap = 256);

double purity(const FockDensityMatrix& rho);

double min_eigenvalue(const FockDensityMatrix& rho);

} // namespace crowdyn
