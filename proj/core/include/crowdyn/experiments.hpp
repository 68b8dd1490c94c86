// Named presets reproducing the cavity/waveguide figure data,
// and the coupling sweep behind the |u(t)| contour

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdyn/csv.hpp"
#include "crowdyn/model.hpp"
#include "crowdyn/spectral.hpp"
#include "crowdyn/volterra.hpp"

namespace crowdyn {

enum class DatasetKind { trajectory, surface, density_matrix };

struct Dataset {
    std::string name;  // file stem
    DatasetKind kind{DatasetKind::trajectory};
    csv::Table table;
};

struct Scenario {
    std::string name;
    ModelParams params;
    TimeGrid grid;
    std::vector<double> eta_values;
    std::vector<std::string> outputs;  // dataset stems produced
};

// Explicitly set config values that replace the preset's own.
struct ScenarioOverrides {
    std::optional<double> omega0;
    std::optional<double> xi0;
    std::optional<double> eta;
    std::optional<double> temperature;
    std::optional<double> omega_c;
    std::optional<cplx> alpha0;
    std::optional<double> n0;
    std::optional<double> t_max_xi0;
    std::optional<std::size_t> n_steps;
    QuadratureSpec quad{};
    std::size_t substeps{kDefaultSubsteps};
    TimeUnit time_unit{TimeUnit::inv_xi0};
};

inline constexpr double kDefaultTmaxXi0 = 60.0;
inline constexpr std::size_t kDefaultSteps = 6000;

std::vector<std::string> preset_names();
std::vector<double> figure_eta_values();  // {0.3, 0.5, 0.7, 1.0, 1.5, 2.0}

// Throws ConfigError for an unknown name.
Scenario make_scenario(std::string_view name, const ScenarioOverrides& overrides = {});

std::vector<Dataset> run_scenario(std::string_view name, const ScenarioOverrides& overrides = {});

struct SweepPoint {
    double eta{0.0};
    std::vector<double> abs_u;
    double steady_amplitude{0.0};
};

struct SweepResult {
    TimeGrid grid;
    std::vector<SweepPoint> points;
};

// Solves every η in parallel; a failing point is rethrown as NumericalError
// naming its η. eta_values must be nonempty and ascending.
SweepResult sweep_eta(const ModelParams& base, const TimeGrid& grid, std::span<const double> eta_values,
                      const QuadratureSpec& quad = {}, std::size_t substeps = kDefaultSubsteps);

// eta_min, eta_min + step, ... up to eta_max (inclusive within 1e-9·step).
std::vector<double> eta_range(double eta_min, double eta_max, double eta_step);

// Long-format (eta,t,abs_u) and (eta,steady_amplitude) tables.
csv::Table sweep_surface_table(const SweepResult& r, const ModelParams& p, TimeUnit unit);
csv::Table sweep_steady_table(const SweepResult& r);

} // namespace crowdyn
