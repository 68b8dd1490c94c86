#include "crowdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "crowdyn/quadrature.hpp"

namespace crowdyn {

namespace {

constexpr double pi = std::numbers::pi;

// Discrete band measure: Σ_i weight_i f(omega_i) ≈ (1/2π)∫ J(ω) f(ω) dω.
struct BandMeasure {
    std::vector<double> omega;
    std::vector<double> weight;
};

BandMeasure band_measure(const ModelParams& p, std::size_t nodes) {
    const auto rule = quad::gauss_legendre(nodes, 0.0, pi);
    BandMeasure m;
    m.omega.resize(nodes);
    m.weight.resize(nodes);
    const double scale = 2.0 / pi * p.eta * p.eta * p.xi0 * p.xi0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double k = rule.nodes[i];
        const double s = std::sin(k);
        m.omega[i] = p.omega0 - 2.0 * p.xi0 * std::cos(k);
        m.weight[i] = scale * s * s * rule.weights[i];
    }
    return m;
}

std::vector<double> thermal_weights(const BandMeasure& m, double temperature) {
    std::vector<double> w(m.weight.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = m.weight[i] * bose_occupation(m.omega[i], temperature);
    return w;
}

cplx evaluate(const BandMeasure& m, const std::vector<double>& weight, double tau) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < weight.size(); ++i) acc += weight[i] * std::polar(1.0, -m.omega[i] * tau);
    return acc;
}

double total(const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += std::abs(x);
    return s;
}

// ∫_0^1 e^{−iθs}(1 − s) ds
cplx hat_half_transform(double theta) {
    if (std::abs(theta) < 0.5) {
        // Σ_k (−iθ)^k/(k+2)!
        cplx term{0.5, 0.0};
        cplx acc = term;
        const cplx step{0.0, -theta};
        for (int k = 1; k < 20; ++k) {
            term *= step / static_cast<double>(k + 2);
            acc += term;
        }
        return acc;
    }
    const cplx e = std::polar(1.0, -theta);
    return (cplx{1.0, -theta} - e) / (theta * theta);
}

// out[j] = Σ_i coeff_i e^{−i freq_i j h} for j = 0..n-1. Phases advance by
// recurrence and are resynchronised exactly every `resync` steps.
std::vector<cplx> spectral_series(const std::vector<cplx>& coeff, const std::vector<double>& freq, double h,
                                  std::size_t n) {
    constexpr std::size_t resync = 64;
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        if (coeff[i] == cplx{0.0, 0.0}) continue;
        const cplx rot = std::polar(1.0, -freq[i] * h);
        cplx phase{1.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            if (j % resync == 0) phase = std::polar(1.0, -freq[i] * h * static_cast<double>(j));
            out[j] += coeff[i] * phase;
            phase *= rot;
        }
    }
    return out;
}

std::vector<cplx> as_complex(const std::vector<double>& w) { return {w.begin(), w.end()}; }

double sup_norm(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double relative_change(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const double scale = std::max(sup_norm(a), sup_norm(b));
    if (scale == 0.0) return 0.0;
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d / scale;
}

struct RawTables {
    std::vector<cplx> g, g_tilde, fall, rise;
};

RawTables raw_tables(const ModelParams& p, const TimeGrid& grid, std::size_t nodes, std::size_t substeps) {
    const auto m = band_measure(p, nodes);
    RawTables t;
    t.g = spectral_series(as_complex(m.weight), m.omega, grid.dt(), grid.size());
    t.g_tilde = spectral_series(as_complex(thermal_weights(m, p.temperature)), m.omega, grid.dt(), grid.size());
    if (substeps > 0) {
        const double h = grid.dt() / static_cast<double>(substeps);
        const std::size_t n = grid.n_steps * substeps + 1;
        std::vector<double> nu(nodes);
        std::vector<cplx> cf(nodes), cr(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            nu[i] = m.omega[i] - p.omega_c;
            cf[i] = m.weight[i] * h * hat_half_transform(nu[i] * h);
            cr[i] = m.weight[i] * h * hat_half_transform(-nu[i] * h);
        }
        t.fall = spectral_series(cf, nu, h, n);
        t.rise = spectral_series(cr, nu, h, n);
        t.rise[0] = cplx{0.0, 0.0};
    }
    return t;
}

cplx checked_kernel(double tau, const ModelParams& p, const QuadratureSpec& quad, bool thermal, const char* name) {
    const auto coarse = band_measure(p, quad.nodes);
    const auto fine = band_measure(p, 2 * quad.nodes);
    const auto wc = thermal ? thermal_weights(coarse, p.temperature) : coarse.weight;
    const auto wf = thermal ? thermal_weights(fine, p.temperature) : fine.weight;
    const cplx a = evaluate(coarse, wc, tau);
    const cplx b = evaluate(fine, wf, tau);
    const double scale = total(wf);
    if (scale > 0.0 && std::abs(a - b) > quad.rel_tol * scale) {
        throw NumericalError(std::string(name) + " quadrature not converged at tau=" + std::to_string(tau) +
                             " with " + std::to_string(quad.nodes) + " nodes");
    }
    return a;
}

} // namespace

double spectral_density(double omega, const ModelParams& p) {
    const double x = omega - p.omega0;
    // Edges computed as ω₀ ± 2ξ₀ count as outside despite rounding in x.
    const double edge_slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(omega), p.omega0);
    if (std::abs(x) >= 2.0 * p.xi0 - edge_slack) return 0.0;
    const double r = 4.0 * p.xi0 * p.xi0 - x * x;
    return p.eta * p.eta * std::sqrt(r);
}

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw std::domain_error("bose_occupation: omega must be positive");
    if (temperature <= 0.0) return 0.0;
    const double x = omega / (UnitConstants::kB_ueV_per_K * temperature);
    if (x > 700.0) return std::exp(-x);
    return 1.0 / std::expm1(x);
}

cplx kernel_g(double tau, const ModelParams& p, const QuadratureSpec& quad) {
    return checked_kernel(tau, p, quad, false, "g");
}

cplx kernel_g_tilde(double tau, const ModelParams& p, const QuadratureSpec& quad) {
    return checked_kernel(tau, p, quad, true, "g_tilde");
}

KernelTable tabulate_kernels(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad,
                             std::size_t substeps) {
    validate(p);
    validate(grid);
    if (quad.nodes == 0) throw ConfigError("quad_nodes must be positive");
    if (substeps == 0) throw ConfigError("substeps must be positive");

    auto coarse = raw_tables(p, grid, quad.nodes, substeps);
    const auto fine = raw_tables(p, grid, 2 * quad.nodes, substeps);
    const double change = std::max({relative_change(coarse.g, fine.g), relative_change(coarse.g_tilde, fine.g_tilde),
                                    relative_change(coarse.fall, fine.fall), relative_change(coarse.rise, fine.rise)});
    if (change > quad.rel_tol) {
        throw NumericalError("kernel quadrature not converged: node doubling from " + std::to_string(quad.nodes) +
                             " changed tables by " + std::to_string(change) + " relative");
    }

    KernelTable t;
    t.dt = grid.dt();
    t.substeps = substeps;
    t.carrier = p.omega_c;
    t.g = std::move(coarse.g);
    t.g_tilde = std::move(coarse.g_tilde);
    t.memory_fall = std::move(coarse.fall);
    t.memory_rise = std::move(coarse.rise);
    return t;
}

double kernel_node_doubling_change(const ModelParams& p, const TimeGrid& grid, const QuadratureSpec& quad) {
    const auto a = raw_tables(p, grid, quad.nodes, 0);
    const auto b = raw_tables(p, grid, 2 * quad.nodes, 0);
    return std::max(relative_change(a.g, b.g), relative_change(a.g_tilde, b.g_tilde));
}

} // namespace crowdyn
