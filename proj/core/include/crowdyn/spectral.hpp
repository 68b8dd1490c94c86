// Waveguide spectral density, thermal occupation and the
// reservoir correlation kernels g(τ), g̃(τ)
//
// Band integrals are evaluated with Gauss–Legendre quadrature in the Bloch
// momentum k ∈ [0, π], ω(k) = ω₀ − 2ξ₀cos k. In that variable the measure
// J(ω)dω/2π = (2/π)η²ξ₀² sin²k dk is smooth, so the rule converges
// spectrally instead of being limited by the square-root band edges.

#pragma once

#include <cstddef>
#include <vector>

#include "crowdyn/model.hpp"

namespace crowdyn {

struct QuadratureSpec {
    std::size_t nodes{512};
    double rel_tol{1e-10};
};

// (ξ/ξ₀)²·sqrt(4ξ₀² − (ω−ω₀)²) inside the open band, 0 elsewhere.
double spectral_density(double omega, const ModelParams& p);

// 1/(e^{ω/k_BT} − 1); 0 at T = 0. Throws std::domain_error for ω ≤ 0.
double bose_occupation(double omega, double temperature);

// (1/2π)∫ J(ω) e^{−iωτ} dω. Negative τ is allowed (conjugate symmetric).
// Throws NumericalError if doubling the node count moves the value by more
// than rel_tol relative to g(0).
cplx kernel_g(double tau, const ModelParams& p, const QuadratureSpec& quad = {});

// (1/2π)∫ J(ω) n̄(ω,T) e^{−iωτ} dω, same quadrature and error contract.
cplx kernel_g_tilde(double tau, const ModelParams& p, const QuadratureSpec& quad = {});

// Correlation kernels sampled at non-negative lags τ_j = j·dt. Negative lags
// are conj(g[j]).
//
// memory_fall / memory_rise are the product-integration weights of the
// rotating-frame memory kernel K(τ) = g(τ)e^{iω_c τ} against the falling and
// rising halves of a hat function of width dt centred at lag j:
//   fall[j] = ∫_{j dt}^{(j+1)dt} K(τ)((j+1)dt − τ)/dt dτ
//   rise[j] = ∫_{(j−1)dt}^{j dt} K(τ)(τ − (j−1)dt)/dt dτ   (rise[0] = 0)
// They are what the Volterra solver consumes and are sampled on the internal
// solver grid of spacing dt/substeps; g itself is kept for output and
// cross-checks.
struct KernelTable {
    double dt{0.0};
    std::size_t substeps{1};
    double carrier{0.0};  // ω_c of the rotating frame used for the weights
    std::vector<cplx> g;
    std::vector<cplx> g_tilde;
    std::vector<cplx> memory_fall;
    std::vector<cplx> memory_rise;

    std::size_t size() const { return g.size(); }
};

inline constexpr std::size_t kDefaultSubsteps = 4;

KernelTable tabulate_kernels(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad = {},
                             std::size_t substeps = kDefaultSubsteps);

// Largest relative change (sup-norm over lags, relative to the sup-norm of
// the table) of g and g̃ when the node count is doubled from quad.nodes.
double kernel_node_doubling_change(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad = {});

} // namespace crowdyn
