// Physical parameters, unit conventions and the shared time grid
//
// Energies are in μeV with ħ = 1, so the internal time unit is 1/μeV.
// Conversions to ns or to units of 1/ξ₀ happen only at the CLI boundary.

#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <utility>

#include "crowdyn/errors.hpp"

namespace crowdyn {

using cplx = std::complex<double>;

struct UnitConstants {
    static constexpr double hbar_ueV_ns = 0.658212;  // ħ in μeV·ns
    static constexpr double kB_ueV_per_K = 86.1733;   // k_B in μeV/K
};

struct ModelParams {
    double omega0{50.25};       // waveguide resonator frequency (μeV)
    double xi0{1.24};           // inter-resonator hopping (μeV)
    double omega_c{50.25};      // cavity frequency (μeV)
    double eta{1.5};            // coupling ratio ξ/ξ₀
    double temperature{5.0};    // initial waveguide temperature (K)
    cplx alpha0{1.0, 0.0};      // initial coherent amplitude
    double n0{1.0};             // initial cavity photon number

    double xi() const { return eta * xi0; }
    double kT() const { return UnitConstants::kB_ueV_per_K * temperature; }
};

// Uniform grid t_j = j·dt on [0, t_max], t_max in 1/μeV.
struct TimeGrid {
    double t_max{0.0};
    std::size_t n_steps{0};

    double dt() const { return n_steps == 0 ? 0.0 : t_max / static_cast<double>(n_steps); }
    double time(std::size_t j) const { return static_cast<double>(j) * dt(); }
    std::size_t size() const { return n_steps + 1; }

    // Grid with t_max given in units of 1/ξ₀.
    static TimeGrid in_xi0_units(const ModelParams& p, double t_max_xi0, std::size_t n_steps) {
        return TimeGrid{t_max_xi0 / p.xi0, n_steps};
    }
    // Same extent, n_steps multiplied by `factor`.
    TimeGrid refined(std::size_t factor) const { return TimeGrid{t_max, n_steps * factor}; }
};

enum class Detuning { inside_band, near_upper_edge, outside_band };

// Output time axis: multiples of 1/ξ₀, or nanoseconds via ħ.
enum class TimeUnit { inv_xi0, ns };

std::string_view to_string(TimeUnit u);
TimeUnit parse_time_unit(std::string_view s);  // throws ConfigError

// Internal time (1/μeV) expressed in `unit`, and back.
double to_output_time(double t, TimeUnit unit, const ModelParams& p);
double from_output_time(double t, TimeUnit unit, const ModelParams& p);

std::string_view to_string(Detuning d);

// Returns `p` unchanged if every invariant holds, otherwise throws ConfigError
// naming the first violated invariant.
ModelParams validate(const ModelParams& p);

// Structural checks only (finite non-negative extent). Coarse grids are
// legal; their accuracy is judged by convergence_study.
TimeGrid validate(const TimeGrid& grid);

// (ω₀ − 2ξ₀, ω₀ + 2ξ₀)
std::pair<double, double> band_edges(const ModelParams& p);

Detuning classify_detuning(const ModelParams& p);

// Largest phase advance per step that the rotating-frame solver has to
// resolve: dt·(|ω_c − ω₀| + 2ξ₀).
double phase_per_step(const ModelParams& p, const TimeGrid& grid);

} // namespace crowdyn
