#include "crowdyn/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "crowdyn/chain_oracle.hpp"
#include "crowdyn/cli/svg.hpp"
#include "crowdyn/experiments.hpp"
#include "crowdyn/observables.hpp"
#include "crowdyn/volterra.hpp"

namespace crowdyn::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kOracleUTolerance = 1e-3;
constexpr double kOracleVRelTolerance = 1e-2;
constexpr std::size_t kFockCap = 256;

void prepare_output_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw IoError("failed writing " + path.string());
}

std::string units_comment(const RunConfig& cfg) {
    return "time_unit=" + std::string(to_string(cfg.time_unit)) + " xi0_ueV=" + csv::format_number(cfg.params.xi0) +
           " hbar_ueV_ns=" + csv::format_number(UnitConstants::hbar_ueV_ns) +
           " kB_ueV_per_K=" + csv::format_number(UnitConstants::kB_ueV_per_K);
}

std::string time_label(const RunConfig& cfg) { return cfg.time_unit == TimeUnit::ns ? "t (ns)" : "t (1/xi0)"; }

void require_converged(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.check_convergence) return;
    const auto r = convergence_study(cfg.params, cfg.grid(), cfg.quad, cfg.convergence_tol, false, cfg.substeps);
    out << "convergence: max |du| = " << csv::format_number(r.max_delta) << " (tolerance "
        << csv::format_number(r.tolerance) << ")\n";
    if (!r.converged) throw NumericalError("not converged: dt-halving changed u by " + csv::format_number(r.max_delta));
}

std::vector<svg::Series> eta_series(const csv::Table& t, const std::string& column) {
    std::vector<svg::Series> series;
    const auto ce = t.column("eta"), ct = t.column("t"), cv = t.column(column);
    for (const auto& row : t.rows) {
        if (series.empty() || series.back().label != "eta=" + csv::format_number(row[ce])) {
            series.push_back({"eta=" + csv::format_number(row[ce]), {}, {}});
        }
        series.back().x.push_back(row[ct]);
        series.back().y.push_back(row[cv]);
    }
    return series;
}

} // namespace

csv::Table trajectory_table(const RunConfig& cfg) {
    const auto grid = cfg.grid();
    const auto s = simulate(cfg.params, grid, cfg.quad, cfg.substeps);
    const auto n = photon_number(s.u, s.v, cfg.params.n0);
    const auto current = photon_current(n, grid.dt());

    csv::Table t;
    t.comments = {units_comment(cfg)};
    t.header = {"t", "re_u", "im_u", "abs_u", "v", "n", "current", "kappa", "kappa_tilde", "omega_ren", "guard"};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        t.add_row({to_output_time(grid.time(j), cfg.time_unit, cfg.params), s.u[j].real(), s.u[j].imag(),
                   std::abs(s.u[j]), s.v[j], n[j], current[j], s.kappa[j], s.kappa_tilde[j], s.omega_ren[j],
                   s.guard_flags[j] ? 1.0 : 0.0});
    }
    return t;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    prepare_output_dir(cfg);
    require_converged(cfg, out);
    const auto t = trajectory_table(cfg);
    const auto path = cfg.output_dir / "trajectory.csv";
    csv::write(path, t);
    out << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
    if (cfg.svg) {
        const auto x = t.column_values("t");
        write_text(cfg.output_dir / "trajectory.svg",
                   svg::line_plot({{"|u|", x, t.column_values("abs_u")}, {"n", x, t.column_values("n")}},
                                  "cavity field amplitude and photon number", time_label(cfg), "value"));
    }
}

void cmd_sweep(const RunConfig& cfg, const SweepRange& range, std::ostream& out) {
    const auto etas = eta_range(range.eta_min, range.eta_max, range.eta_step);
    prepare_output_dir(cfg);
    const auto result = sweep_eta(cfg.params, cfg.grid(), etas, cfg.quad, cfg.substeps);
    const auto surface = sweep_surface_table(result, cfg.params, cfg.time_unit);
    const auto steady = sweep_steady_table(result);
    csv::write(cfg.output_dir / "sweep.csv", surface);
    csv::write(cfg.output_dir / "steady.csv", steady);
    out << "wrote " << (cfg.output_dir / "sweep.csv").string() << " and " << (cfg.output_dir / "steady.csv").string()
        << " (" << etas.size() << " eta points)\n";
    if (cfg.svg) {
        std::vector<double> x;
        for (std::size_t j = 0; j < result.grid.size(); ++j) {
            x.push_back(to_output_time(result.grid.time(j), cfg.time_unit, cfg.params));
        }
        std::vector<std::vector<double>> values;
        for (const auto& pt : result.points) values.push_back(pt.abs_u);
        write_text(cfg.output_dir / "sweep.svg", svg::heat_map(x, etas, values, "|u(t)|", time_label(cfg), "eta"));
        write_text(cfg.output_dir / "steady.svg",
                   svg::line_plot({{"steady |u|", steady.column_values("eta"), steady.column_values("steady_amplitude")}},
                                  "steady amplitude", "eta", "mean |u| over tail"));
    }
}

void cmd_rho(const RunConfig& cfg, double at_time, std::ostream& out) {
    const auto grid = cfg.grid();
    const double t_internal = from_output_time(at_time, cfg.time_unit, cfg.params);
    if (!(at_time >= 0.0) || t_internal > grid.t_max * (1.0 + 1e-12)) {
        throw ConfigError("at_time " + csv::format_number(at_time) + " outside the grid");
    }
    prepare_output_dir(cfg);
    const auto s = simulate(cfg.params, grid, cfg.quad, cfg.substeps);
    const std::size_t j =
        grid.n_steps == 0 ? 0 : std::min(grid.n_steps, static_cast<std::size_t>(std::llround(t_internal / grid.dt())));
    const cplx alpha = s.u[j] * cfg.params.alpha0;
    const auto rho = density_matrix_auto(alpha, s.v[j], cfg.n_max_fock, std::max(cfg.n_max_fock, kFockCap));

    csv::Table t;
    t.comments = {"alpha_re=" + csv::format_number(alpha.real()) + ", alpha_im=" + csv::format_number(alpha.imag()) +
                  ", v=" + csv::format_number(s.v[j]) + ", purity=" + csv::format_number(purity(rho)) +
                  ", trunc_err=" + csv::format_number(rho.truncation_error)};
    t.header = {"p", "q", "re", "im"};
    const auto dim = rho.elements.rows();
    for (Eigen::Index p = 0; p < dim; ++p) {
        for (Eigen::Index q = p; q < dim; ++q) {
            t.add_row({static_cast<double>(p), static_cast<double>(q), rho.elements(p, q).real(),
                       rho.elements(p, q).imag()});
        }
    }
    const auto path = cfg.output_dir / "rho.csv";
    csv::write(path, t);
    out << "wrote " << path.string() << " (n_max=" << rho.n_max << ", t=" << csv::format_number(to_output_time(grid.time(j), cfg.time_unit, cfg.params))
        << (cfg.time_unit == TimeUnit::ns ? " ns" : " 1/xi0") << ", purity=" << csv::format_number(purity(rho)) << ")\n";
}

void cmd_oracle_check(const RunConfig& cfg, std::ostream& out) {
    const auto grid = cfg.grid();
    const ChainSpec spec{cfg.chain_sites, 0.8};
    if (spec.n_sites < 8 || spec.validity_horizon(cfg.params) < grid.t_max) {
        throw ConfigError("chain_sites=" + std::to_string(cfg.chain_sites) +
                          " does not cover t_max with horizon 0.8*n/(2*xi0): required chain_sites >= " +
                          std::to_string(std::max<std::size_t>(8, ChainSpec::required_sites(cfg.params, grid.t_max))));
    }
    prepare_output_dir(cfg);
    const auto s = simulate(cfg.params, grid, cfg.quad, cfg.substeps);
    const ChainPropagator oracle(cfg.params, spec);
    std::vector<double> times(grid.size());
    for (std::size_t j = 0; j < times.size(); ++j) times[j] = grid.time(j);
    const auto u_oracle = oracle.propagator(times);
    const auto v_oracle = oracle.thermal_v(times);

    csv::Table t;
    t.comments = {units_comment(cfg)};
    t.header = {"t", "re_u", "im_u", "re_u_oracle", "im_u_oracle", "abs_du", "v", "v_oracle", "abs_dv"};
    double du = 0.0, dv = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double eu = std::abs(s.u[j] - u_oracle[j]);
        const double ev = std::abs(s.v[j] - v_oracle[j]);
        du = std::max(du, eu);
        dv = std::max(dv, ev);
        t.add_row({to_output_time(grid.time(j), cfg.time_unit, cfg.params), s.u[j].real(), s.u[j].imag(),
                   u_oracle[j].real(), u_oracle[j].imag(), eu, s.v[j], v_oracle[j], ev});
    }
    csv::write(cfg.output_dir / "oracle.csv", t);

    const double v_tol = kOracleVRelTolerance * bose_occupation(cfg.params.omega_c, cfg.params.temperature);
    const bool u_pass = du <= kOracleUTolerance;
    const bool v_pass = dv <= v_tol;
    out << "max |u - u_oracle| = " << csv::format_number(du) << " (threshold " << csv::format_number(kOracleUTolerance)
        << ") " << (u_pass ? "PASS" : "FAIL") << "\n";
    out << "max |v - v_oracle| = " << csv::format_number(dv) << " (threshold " << csv::format_number(v_tol) << ") "
        << (v_pass ? "PASS" : "FAIL") << "\n";
    out << (u_pass && v_pass ? "PASS" : "FAIL") << "\n";
    if (!(u_pass && v_pass)) throw NumericalError("oracle check failed");
}

void cmd_scenario(const RunConfig& cfg, std::string_view name, std::ostream& out) {
    ScenarioOverrides o;
    const auto& p = cfg.params;
    if (cfg.is_set("omega0")) o.omega0 = p.omega0;
    if (cfg.is_set("xi0")) o.xi0 = p.xi0;
    if (cfg.is_set("omega_c")) o.omega_c = p.omega_c;
    if (cfg.is_set("eta")) o.eta = p.eta;
    if (cfg.is_set("temperature_K")) o.temperature = p.temperature;
    if (cfg.is_set("alpha0_re") || cfg.is_set("alpha0_im")) o.alpha0 = p.alpha0;
    if (cfg.is_set("n0")) o.n0 = p.n0;
    if (cfg.is_set("t_max")) o.t_max_xi0 = cfg.t_max_xi0;
    if (cfg.is_set("n_steps")) o.n_steps = cfg.n_steps;
    o.quad = cfg.quad;
    o.substeps = cfg.substeps;
    o.time_unit = cfg.time_unit;

    const auto datasets = run_scenario(name, o);
    prepare_output_dir(cfg);
    for (const auto& d : datasets) {
        const auto path = cfg.output_dir / (d.name + ".csv");
        csv::write(path, d.table);
        out << "wrote " << path.string() << " (" << d.table.rows.size() << " rows)\n";
        if (!cfg.svg) continue;
        const auto& h = d.table.header;
        if (h.size() >= 3 && h[0] == "eta" && h[1] == "t") {
            write_text(cfg.output_dir / (d.name + ".svg"),
                       svg::line_plot(eta_series(d.table, h[2]), d.name, time_label(cfg), h[2]));
        } else if (h.size() == 2) {
            write_text(cfg.output_dir / (d.name + ".svg"),
                       svg::line_plot({{h[1], d.table.column_values(h[0]), d.table.column_values(h[1])}}, d.name, h[0],
                                      h[1]));
        }
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-Markovian dynamics of a microcavity coupled to a coupled-resonator waveguide"};
    app.require_subcommand(1);

    std::map<std::string, std::pair<CLI::Option*, std::string>> flag_values;
    std::map<CLI::App*, std::map<std::string, std::pair<CLI::Option*, std::string>>> per_sub;
    std::map<CLI::App*, std::string> config_paths;

    auto add_common = [&](CLI::App* sub) {
        auto& values = per_sub[sub];
        sub->add_option("--config", config_paths[sub], "flat key = value configuration file");
        for (const auto& k : config_keys()) {
            auto& slot = values[k.key];
            slot.first = sub->add_option(flag_name(k.key), slot.second,
                                         std::string(k.help) + " [default: " + k.default_value + "]");
        }
    };

    auto* simulate_cmd = app.add_subcommand("simulate", "solve u, v and the master-equation coefficients");
    add_common(simulate_cmd);

    SweepRange range;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep the coupling eta and record |u(t)|");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--eta-min", range.eta_min, "first eta");
    sweep_cmd->add_option("--eta-max", range.eta_max, "last eta");
    sweep_cmd->add_option("--eta-step", range.eta_step, "eta increment");

    double at_time = 0.0;
    auto* rho_cmd = app.add_subcommand("rho", "reduced density matrix in the Fock basis at one time");
    add_common(rho_cmd);
    rho_cmd->add_option("--at-time", at_time, "snapshot time in the configured time_unit")->required();

    auto* oracle_cmd = app.add_subcommand("oracle-check", "compare against the exact finite-chain dynamics");
    add_common(oracle_cmd);

    std::string preset;
    auto* scenario_cmd = app.add_subcommand("scenario", "run a named figure preset");
    add_common(scenario_cmd);
    scenario_cmd->add_option("name", preset, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigFailure;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        RunConfig cfg;
        if (!config_paths[sub].empty()) apply_file(cfg, config_paths[sub]);
        for (const auto& [key, slot] : per_sub[sub]) {
            if (slot.first->count() > 0) apply(cfg, key, slot.second);
        }
        cfg = finalize(std::move(cfg));
        if (phase_per_step(cfg.params, cfg.grid()) * 1.0 / static_cast<double>(cfg.substeps) > 0.5) {
            err << "warning: internal step resolves less than 2 samples per radian of the fastest band phase\n";
        }

        if (sub == simulate_cmd) cmd_simulate(cfg, out);
        else if (sub == sweep_cmd) cmd_sweep(cfg, range, out);
        else if (sub == rho_cmd) cmd_rho(cfg, at_time, out);
        else if (sub == oracle_cmd) cmd_oracle_check(cfg, out);
        else if (sub == scenario_cmd) cmd_scenario(cfg, preset, out);
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const IoError& e) {
        err << "i/o failure: " << e.what() << "\n";
        return kIoFailure;
    } catch (const fs::filesystem_error& e) {
        err << "i/o failure: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

} // namespace crowdyn::cli
