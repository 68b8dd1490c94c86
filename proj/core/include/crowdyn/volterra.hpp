// Propagating function u(t), fluctuation function v(t) and
// the time-dependent master-equation coefficients
//
// u solves  u̇(t) + iω_c u(t) + ∫₀ᵗ g(t−s) u(s) ds = 0,  u(0) = 1.
// The solver works on ũ(t) = e^{iω_c t}u(t), which only carries band-width
// frequencies, and returns u in the lab frame.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crowdyn/model.hpp"
#include "crowdyn/spectral.hpp"

namespace crowdyn {

struct Coefficients {
    std::vector<double> kappa;        // −Re(u̇/u)
    std::vector<double> kappa_tilde;  // v̇ − 2v·Re(u̇/u)
    std::vector<double> omega_ren;    // −Im(u̇/u)
    std::vector<bool> guard_flags;    // |u| below the guard threshold
};

struct TrajectorySolution {
    TimeGrid grid;
    std::vector<cplx> u;
    std::vector<double> v;
    std::vector<double> kappa;
    std::vector<double> kappa_tilde;
    std::vector<double> omega_ren;
    std::vector<bool> guard_flags;
};

inline constexpr double kGuardThreshold = 1e-8;
inline constexpr double kNumericalSlack = 1e-10;

// Product-trapezoidal memory quadrature (hat-function weights from the
// kernel table) with an implicit trapezoidal step in time, run on the
// table's internal grid dt/substeps and sampled back onto `grid`. Second
// order in the internal step.
std::vector<cplx> solve_u(const ModelParams& p, const TimeGrid& grid, const KernelTable& kernels);

// v(t_j) = ∫₀^{t_j}∫₀^{t_j} u(s₁) g̃*(s₁−s₂) u*(s₂) ds₁ds₂ by the 2-D
// trapezoidal rule, accumulated in O(j) work per step. Throws NumericalError
// ("nonreal v", "negative v") when the result is inconsistent.
std::vector<double> compute_v(std::span<const cplx> u, const KernelTable& kernels, const TimeGrid& grid);

// Central differences (one-sided at the ends). `carrier` is removed from u
// before differencing and added back analytically, so that a fast lab-frame
// rotation does not pollute ω′; carrier = 0 differences u directly.
Coefficients compute_coefficients(std::span<const cplx> u, std::span<const double> v, double dt,
                                  double carrier = 0.0, double guard_threshold = kGuardThreshold);

// Mean of |u| over the last tail_fraction of the samples.
double steady_amplitude(std::span<const cplx> u, double tail_fraction = 0.25);

// u, v and coefficients on one grid, with the trajectory invariants checked.
TrajectorySolution simulate(const ModelParams& p, const TimeGrid& grid, const KernelTable& kernels);
TrajectorySolution simulate(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad = {},
                            std::size_t substeps = kDefaultSubsteps);

// Throws NumericalError if u[0] ≠ 1, |u| > 1 + slack, v < −slack, or v ≠ 0
// at zero temperature.
void check_invariants(const TrajectorySolution& s, const ModelParams& p);

struct ConvergenceReport {
    double max_delta{0.0};         // sup |u_dt − u_{dt/2}| on shared points
    double tolerance{1e-4};
    bool converged{false};
    double observed_order{0.0};    // log2 of successive deltas; 0 unless requested
};

// Re-solves on dt/2 (and dt/4 when `estimate_order`) with the same substep
// count and compares on the shared grid points.
ConvergenceReport convergence_study(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad = {},
                                    double tolerance = 1e-4, bool estimate_order = false,
                                    std::size_t substeps = kDefaultSubsteps);

} // namespace crowdyn
