#include "crowdyn/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crowdyn {

namespace {

void require_aligned(const KernelTable& kernels, const TimeGrid& grid) {
    if (kernels.size() != grid.size() || kernels.memory_fall.size() != grid.n_steps * kernels.substeps + 1 || std::abs(kernels.dt - grid.dt()) > 1e-15 * std::max(1.0, grid.dt())) {
        throw ConfigError("kernel table does not match the time grid");
    }
}

} // namespace

std::vector<cplx> solve_u(const ModelParams& p, const TimeGrid& grid, const KernelTable& kernels) {
    require_aligned(kernels, grid);
    if (kernels.carrier != p.omega_c) throw ConfigError("kernel table was built for a different omega_c");

    const std::size_t sub = kernels.substeps;
    const std::size_t n = grid.n_steps * sub + 1;
    const double h = grid.dt() / static_cast<double>(sub);
    const auto& fall = kernels.memory_fall;
    const auto& rise = kernels.memory_rise;

    // Hat weight for lag m ≥ 1 is rise[m] + fall[m].
    std::vector<cplx> full(n);
    for (std::size_t m = 1; m < n; ++m) full[m] = rise[m] + fall[m];

    std::vector<cplx> w(n);  // rotating-frame amplitude ũ
    w[0] = cplx{1.0, 0.0};
    cplx memory_prev{0.0, 0.0};
    const cplx denom = 1.0 + 0.5 * h * fall[0];
    for (std::size_t j = 1; j < n; ++j) {
        cplx known = rise[j] * w[0];
        for (std::size_t i = 1; i < j; ++i) known += full[j - i] * w[i];
        w[j] = (w[j - 1] - 0.5 * h * (memory_prev + known)) / denom;
        memory_prev = known + fall[0] * w[j];
    }

    std::vector<cplx> u(grid.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = w[j * sub] * std::polar(1.0, -p.omega_c * grid.time(j));
    u[0] = cplx{1.0, 0.0};
    return u;
}

std::vector<double> compute_v(std::span<const cplx> u, const KernelTable& kernels, const TimeGrid& grid) {
    require_aligned(kernels, grid);
    if (u.size() != grid.size()) throw ConfigError("u does not match the time grid");

    const std::size_t n = grid.size();
    const double h2 = grid.dt() * grid.dt();
    const auto& gt = kernels.g_tilde;
    std::vector<double> v(n, 0.0);

    // Quadratic form Σ c_i c_k u_i G_ik u_k*, G_ik = g̃*(τ_i − τ_k), with unit
    // interior weights and c_0 = 1/2. `interior` holds the form over indices
    // < j; the end point j enters with weight 1/2 when reporting v_j.
    cplx interior{0.0, 0.0};
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        // cross_lo = Σ_{i<j} c_i u_i G_ij u_j*, cross_hi = Σ_{k<j} c_k u_j G_jk u_k*
        cplx cross_lo{0.0, 0.0};
        cplx cross_hi{0.0, 0.0};
        for (std::size_t i = 0; i < j; ++i) {
            const double c = i == 0 ? 0.5 : 1.0;
            const cplx gij = gt[j - i];              // g̃*(τ_i − τ_j) = g̃(τ_j − τ_i)
            cross_lo += c * u[i] * gij;
            cross_hi += c * std::conj(gij) * std::conj(u[i]);
        }
        cross_lo *= std::conj(u[j]);
        cross_hi *= u[j];
        const cplx diag = std::norm(u[j]) * std::conj(gt[0]);
        const cplx cross = cross_lo + cross_hi;

        if (j > 0) {
            const cplx vj = h2 * (interior + 0.5 * cross + 0.25 * diag);
            scale = std::max(scale, std::abs(vj));
            if (std::abs(vj.imag()) > 1e-10 * std::max(scale, 1e-300) && std::abs(vj.imag()) > 1e-300) {
                throw NumericalError("nonreal v at t=" + std::to_string(grid.time(j)));
            }
            if (vj.real() < -kNumericalSlack) {
                throw NumericalError("negative v at t=" + std::to_string(grid.time(j)));
            }
            v[j] = vj.real();
        }
        const double cj = j == 0 ? 0.5 : 1.0;
        interior += cj * cross + cj * cj * diag;
    }
    return v;
}

Coefficients compute_coefficients(std::span<const cplx> u, std::span<const double> v, double dt, double carrier,
                                  double guard_threshold) {
    const std::size_t n = u.size();
    if (v.size() != n) throw ConfigError("u and v have different lengths");
    Coefficients c;
    c.kappa.assign(n, 0.0);
    c.kappa_tilde.assign(n, 0.0);
    c.omega_ren.assign(n, 0.0);
    c.guard_flags.assign(n, false);
    if (n < 2 || dt <= 0.0) {
        if (n == 1) c.omega_ren[0] = carrier;
        return c;
    }

    std::vector<cplx> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = u[j] * std::polar(1.0, carrier * dt * static_cast<double>(j));

    auto derivative = [&](auto&& f, std::size_t j) {
        if (j == 0) return (f(1) - f(0)) / dt;
        if (j == n - 1) return (f(n - 1) - f(n - 2)) / dt;
        return (f(j + 1) - f(j - 1)) / (2.0 * dt);
    };

    double last_kappa = 0.0, last_kappa_tilde = 0.0, last_omega = carrier;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(u[j]) < guard_threshold) {
            c.guard_flags[j] = true;
            c.kappa[j] = last_kappa;
            c.kappa_tilde[j] = last_kappa_tilde;
            c.omega_ren[j] = last_omega;
            continue;
        }
        const cplx dw = derivative([&](std::size_t i) { return w[i]; }, j);
        const double dv = derivative([&](std::size_t i) { return v[i]; }, j);
        // u̇/u = ẇ/w − iω_carrier
        const cplx log_rate = dw / w[j] - cplx{0.0, carrier};
        c.kappa[j] = -log_rate.real();
        c.omega_ren[j] = -log_rate.imag();
        c.kappa_tilde[j] = dv - 2.0 * v[j] * log_rate.real();
        last_kappa = c.kappa[j];
        last_kappa_tilde = c.kappa_tilde[j];
        last_omega = c.omega_ren[j];
    }
    return c;
}

double steady_amplitude(std::span<const cplx> u, double tail_fraction) {
    if (u.empty()) throw ConfigError("steady_amplitude of an empty sequence");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw ConfigError("tail_fraction must lie in (0, 1)");
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(tail_fraction * static_cast<double>(u.size()))));
    double sum = 0.0;
    for (std::size_t j = u.size() - count; j < u.size(); ++j) sum += std::abs(u[j]);
    return sum / static_cast<double>(count);
}

void check_invariants(const TrajectorySolution& s, const ModelParams& p) {
    if (s.u.empty() || s.u[0] != cplx{1.0, 0.0}) throw NumericalError("u[0] != 1");
    for (std::size_t j = 0; j < s.u.size(); ++j) {
        if (!std::isfinite(s.u[j].real()) || !std::isfinite(s.u[j].imag()) || !std::isfinite(s.v[j])) {
            throw NumericalError("non-finite trajectory value at t=" + std::to_string(s.grid.time(j)));
        }
        if (std::abs(s.u[j]) > 1.0 + kNumericalSlack) {
            throw NumericalError("|u| exceeds 1 at t=" + std::to_string(s.grid.time(j)));
        }
        if (s.v[j] < -kNumericalSlack) throw NumericalError("negative v at t=" + std::to_string(s.grid.time(j)));
        if (p.temperature == 0.0 && std::abs(s.v[j]) > 1e-12) {
            throw NumericalError("nonzero v at zero temperature");
        }
    }
}

TrajectorySolution simulate(const ModelParams& p, const TimeGrid& grid, const KernelTable& kernels) {
    TrajectorySolution s;
    s.grid = grid;
    s.u = solve_u(p, grid, kernels);
    s.v = compute_v(s.u, kernels, grid);
    auto c = compute_coefficients(s.u, s.v, grid.dt(), p.omega_c);
    s.kappa = std::move(c.kappa);
    s.kappa_tilde = std::move(c.kappa_tilde);
    s.omega_ren = std::move(c.omega_ren);
    s.guard_flags = std::move(c.guard_flags);
    check_invariants(s, p);
    return s;
}

TrajectorySolution simulate(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad,
                            std::size_t substeps) {
    return simulate(p, grid, tabulate_kernels(p, grid, quad, substeps));
}

namespace {

double sup_delta(const std::vector<cplx>& coarse, const std::vector<cplx>& fine) {
    double d = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) d = std::max(d, std::abs(coarse[j] - fine[2 * j]));
    return d;
}

} // namespace

ConvergenceReport convergence_study(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad,
                                    double tolerance, bool estimate_order, std::size_t substeps) {
    const auto u1 = solve_u(p, grid, tabulate_kernels(p, grid, quad, substeps));
    const auto g2 = grid.refined(2);
    const auto u2 = solve_u(p, g2, tabulate_kernels(p, g2, quad, substeps));

    ConvergenceReport r;
    r.tolerance = tolerance;
    r.max_delta = sup_delta(u1, u2);
    r.converged = r.max_delta <= tolerance;
    if (estimate_order) {
        const auto g4 = grid.refined(4);
        const auto u4 = solve_u(p, g4, tabulate_kernels(p, g4, quad, substeps));
        const double d2 = sup_delta(u2, u4);
        r.observed_order = d2 > 0.0 ? std::log2(r.max_delta / d2) : 0.0;
    }
    return r;
}

} // namespace crowdyn
