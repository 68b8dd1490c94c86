#include "crowdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <string>

#include "crowdyn/observables.hpp"

namespace crowdyn {

namespace {

struct Preset {
    const char* name;
    double omega_c_ratio;  // ω_c/ω₀
    double temperature;    // K
    const char* quantity;  // column emitted per η
};

constexpr Preset kPresets[] = {
    {"fig2a", 0.5, 5.0, "abs_u"},      {"fig2b", 1.025, 5.0, "abs_u"},   {"fig2c", 1.0, 5.0, "abs_u"},
    {"fig3_sweep", 1.0, 5.0, "abs_u"}, {"fig4a", 1.0, 5e-3, "v"},        {"fig4b", 1.0, 5.0, "v"},
    {"fig5a", 1.0, 5e-3, "n"},         {"fig5b", 1.0, 5.0, "n"},         {"fig5c", 1.0, 5e-3, "current"},
    {"fig5d", 1.0, 5.0, "current"},
};

const Preset& find_preset(std::string_view name) {
    for (const auto& p : kPresets) {
        if (name == p.name) return p;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::string comment_line(const ModelParams& p, TimeUnit unit) {
    return "time_unit=" + std::string(to_string(unit)) + " xi0_ueV=" + csv::format_number(p.xi0) +
           " hbar_ueV_ns=" + csv::format_number(UnitConstants::hbar_ueV_ns) +
           " kB_ueV_per_K=" + csv::format_number(UnitConstants::kB_ueV_per_K);
}

std::vector<double> quantity(const Preset& preset, const TrajectorySolution& s, const ModelParams& p) {
    const std::string_view q = preset.quantity;
    if (q == "v") return s.v;
    const auto n = photon_number(s.u, s.v, p.n0);
    if (q == "n") return n;
    if (q == "current") return photon_current(n, s.grid.dt());
    std::vector<double> a(s.u.size());
    std::transform(s.u.begin(), s.u.end(), a.begin(), [](cplx x) { return std::abs(x); });
    return a;
}

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : kPresets) names.emplace_back(p.name);
    return names;
}

std::vector<double> figure_eta_values() { return {0.3, 0.5, 0.7, 1.0, 1.5, 2.0}; }

std::vector<double> eta_range(double eta_min, double eta_max, double eta_step) {
    if (!(eta_step > 0.0)) throw ConfigError("eta_step must be positive");
    if (!(eta_min <= eta_max)) throw ConfigError("empty eta range: eta_min > eta_max");
    if (eta_min < 0.0) throw ConfigError("eta negative");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((eta_max - eta_min) / eta_step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
        // Round to suppress accumulated step noise in the emitted η column.
        out.push_back(std::round((eta_min + static_cast<double>(k) * eta_step) * 1e12) / 1e12);
    }
    return out;
}

Scenario make_scenario(std::string_view name, const ScenarioOverrides& o) {
    const auto& preset = find_preset(name);
    Scenario s;
    s.name = preset.name;
    s.params.omega0 = o.omega0.value_or(s.params.omega0);
    s.params.xi0 = o.xi0.value_or(s.params.xi0);
    s.params.omega_c = o.omega_c.value_or(preset.omega_c_ratio * s.params.omega0);
    s.params.temperature = o.temperature.value_or(preset.temperature);
    if (o.alpha0) {
        s.params.alpha0 = *o.alpha0;
        s.params.n0 = o.n0.value_or(std::norm(*o.alpha0));
    } else if (o.n0) {
        // n0 alone: coherent amplitude of matching modulus.
        s.params.alpha0 = cplx{std::sqrt(*o.n0), 0.0};
        s.params.n0 = *o.n0;
    }
    if (name == "fig3_sweep") {
        s.eta_values = o.eta ? std::vector<double>{*o.eta} : eta_range(0.1, 2.0, 0.1);
        s.outputs = {"fig3_sweep", "fig3_steady", "fig3_kappa"};
    } else {
        s.eta_values = o.eta ? std::vector<double>{*o.eta} : figure_eta_values();
        s.outputs = {s.name};
    }
    s.params.eta = s.eta_values.front();
    validate(s.params);
    s.grid = validate(TimeGrid::in_xi0_units(s.params, o.t_max_xi0.value_or(kDefaultTmaxXi0),
                                             o.n_steps.value_or(kDefaultSteps)));
    return s;
}

std::vector<Dataset> run_scenario(std::string_view name, const ScenarioOverrides& o) {
    const auto scenario = make_scenario(name, o);
    const auto& preset = find_preset(name);
    const auto& p = scenario.params;
    const auto& grid = scenario.grid;

    if (scenario.name == "fig3_sweep") {
        const auto sweep = sweep_eta(p, grid, scenario.eta_values, o.quad, o.substeps);
        Dataset surface{"fig3_sweep", DatasetKind::surface, sweep_surface_table(sweep, p, o.time_unit)};
        Dataset steady{"fig3_steady", DatasetKind::surface, sweep_steady_table(sweep)};

        // κ(t) in the strong (1.5) and weak (0.5) coupling regimes.
        Dataset kappa{"fig3_kappa", DatasetKind::trajectory, {}};
        kappa.table.comments = {comment_line(p, o.time_unit)};
        kappa.table.header = {"eta", "t", "kappa", "guard"};
        for (double eta : {1.5, 0.5}) {
            auto q = p;
            q.eta = eta;
            const auto s = simulate(q, grid, o.quad, o.substeps);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                kappa.table.add_row({eta, to_output_time(grid.time(j), o.time_unit, q), s.kappa[j],
                                     s.guard_flags[j] ? 1.0 : 0.0});
            }
        }
        return {std::move(surface), std::move(steady), std::move(kappa)};
    }

    std::vector<std::future<std::vector<double>>> jobs;
    for (double eta : scenario.eta_values) {
        auto q = p;
        q.eta = eta;
        jobs.push_back(std::async(std::launch::async, [q, grid, &o, &preset] {
            return quantity(preset, simulate(q, grid, o.quad, o.substeps), q);
        }));
    }

    Dataset d{scenario.name, DatasetKind::trajectory, {}};
    d.table.comments = {comment_line(p, o.time_unit)};
    d.table.header = {"eta", "t", preset.quantity};
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const double eta = scenario.eta_values[k];
        std::vector<double> values;
        try {
            values = jobs[k].get();
        } catch (const NumericalError& e) {
            throw NumericalError("eta=" + csv::format_number(eta) + ": " + e.what());
        }
        for (std::size_t j = 0; j < grid.size(); ++j) {
            d.table.add_row({eta, to_output_time(grid.time(j), o.time_unit, p), values[j]});
        }
    }
    return {std::move(d)};
}

SweepResult sweep_eta(const ModelParams& base, const TimeGrid& grid, std::span<const double> eta_values,
                      const QuadratureSpec& quad, std::size_t substeps) {
    if (eta_values.empty()) throw ConfigError("eta_values is empty");
    if (!std::is_sorted(eta_values.begin(), eta_values.end())) throw ConfigError("eta_values not ascending");

    std::vector<std::future<SweepPoint>> jobs;
    for (double eta : eta_values) {
        auto p = base;
        p.eta = eta;
        jobs.push_back(std::async(std::launch::async, [p, grid, quad, substeps] {
            validate(p);
            const auto s = simulate(p, grid, quad, substeps);
            SweepPoint pt;
            pt.eta = p.eta;
            pt.abs_u.resize(s.u.size());
            std::transform(s.u.begin(), s.u.end(), pt.abs_u.begin(), [](cplx x) { return std::abs(x); });
            pt.steady_amplitude = steady_amplitude(s.u);
            return pt;
        }));
    }

    SweepResult r;
    r.grid = grid;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const std::string where = "eta=" + csv::format_number(eta_values[k]) + ": ";
        try {
            r.points.push_back(jobs[k].get());
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError(where + e.what());
        }
    }
    return r;
}

csv::Table sweep_surface_table(const SweepResult& r, const ModelParams& p, TimeUnit unit) {
    csv::Table t;
    t.comments = {comment_line(p, unit)};
    t.header = {"eta", "t", "abs_u"};
    for (const auto& pt : r.points) {
        for (std::size_t j = 0; j < pt.abs_u.size(); ++j) {
            t.add_row({pt.eta, to_output_time(r.grid.time(j), unit, p), pt.abs_u[j]});
        }
    }
    return t;
}

csv::Table sweep_steady_table(const SweepResult& r) {
    csv::Table t;
    t.header = {"eta", "steady_amplitude"};
    for (const auto& pt : r.points) t.add_row({pt.eta, pt.steady_amplitude});
    return t;
}

} // namespace crowdyn
