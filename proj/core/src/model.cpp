#include "crowdyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crowdyn {

std::string_view to_string(Detuning d) {
    switch (d) {
        case Detuning::inside_band: return "inside_band";
        case Detuning::near_upper_edge: return "near_upper_edge";
        case Detuning::outside_band: return "outside_band";
    }
    return "unknown";
}

std::string_view to_string(TimeUnit u) { return u == TimeUnit::ns ? "ns" : "inv_xi0"; }

TimeUnit parse_time_unit(std::string_view s) {
    if (s == "inv_xi0") return TimeUnit::inv_xi0;
    if (s == "ns") return TimeUnit::ns;
    throw ConfigError("time_unit must be inv_xi0 or ns, got '" + std::string(s) + "'");
}

double to_output_time(double t, TimeUnit unit, const ModelParams& p) {
    return unit == TimeUnit::ns ? t * UnitConstants::hbar_ueV_ns : t * p.xi0;
}

double from_output_time(double t, TimeUnit unit, const ModelParams& p) {
    return unit == TimeUnit::ns ? t / UnitConstants::hbar_ueV_ns : t / p.xi0;
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
}

} // namespace

ModelParams validate(const ModelParams& p) {
    require(std::isfinite(p.omega0) && std::isfinite(p.xi0) && std::isfinite(p.omega_c) &&
                std::isfinite(p.eta) && std::isfinite(p.temperature) && std::isfinite(p.n0) &&
                std::isfinite(p.alpha0.real()) && std::isfinite(p.alpha0.imag()),
            "parameters not finite");
    require(p.omega0 > 0.0, "omega0 not positive");
    require(p.xi0 > 0.0, "xi0 not positive");
    require(p.omega_c > 0.0, "omega_c not positive");
    require(p.eta >= 0.0, "eta negative");
    require(p.temperature >= 0.0, "temperature negative");
    require(p.n0 >= 0.0, "n0 negative");
    require(p.omega0 - 2.0 * p.xi0 > 0.0, "band extends to nonpositive frequency");
    if (p.alpha0 != cplx{0.0, 0.0}) {
        const double expected = std::norm(p.alpha0);
        require(std::abs(p.n0 - expected) <= 1e-12 * std::max(1.0, expected),
                "n0 inconsistent with |alpha0|^2");
    }
    return p;
}

TimeGrid validate(const TimeGrid& grid) {
    require(std::isfinite(grid.t_max) && grid.t_max >= 0.0, "t_max negative or not finite");
    require(grid.n_steps > 0 || grid.t_max == 0.0, "n_steps zero with nonzero t_max");
    return grid;
}

std::pair<double, double> band_edges(const ModelParams& p) {
    return {p.omega0 - 2.0 * p.xi0, p.omega0 + 2.0 * p.xi0};
}

Detuning classify_detuning(const ModelParams& p) {
    const auto [lo, hi] = band_edges(p);
    if (!(p.omega_c > lo && p.omega_c < hi)) return Detuning::outside_band;
    if (p.omega_c > p.omega0 + p.xi0) return Detuning::near_upper_edge;
    return Detuning::inside_band;
}

double phase_per_step(const ModelParams& p, const TimeGrid& grid) {
    return grid.dt() * (std::abs(p.omega_c - p.omega0) + 2.0 * p.xi0);
}

} // namespace crowdyn
