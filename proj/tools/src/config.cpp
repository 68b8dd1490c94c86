#include "crowdyn/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace crowdyn::cli {

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = {
        {"omega0", "50.25", "waveguide resonator frequency (ueV)"},
        {"xi0", "1.24", "inter-resonator hopping (ueV)"},
        {"omega_c", "50.25", "cavity frequency (ueV)"},
        {"eta", "1.5", "coupling ratio xi/xi0"},
        {"temperature_K", "5", "initial waveguide temperature (K)"},
        {"alpha0_re", "1", "initial coherent amplitude, real part"},
        {"alpha0_im", "0", "initial coherent amplitude, imaginary part"},
        {"n0", "|alpha0|^2", "initial cavity photon number"},
        {"t_max", "60", "simulated time in units of 1/xi0"},
        {"n_steps", "6000", "number of time steps"},
        {"quad_nodes", "512", "Gauss-Legendre nodes over the band"},
        {"quad_rel_tol", "1e-10", "node-doubling tolerance for the kernels"},
        {"substeps", "4", "internal solver steps per output step"},
        {"chain_sites", "600", "waveguide sites in the finite-chain oracle"},
        {"n_max_fock", "64", "initial Fock truncation for rho (grown up to 256)"},
        {"output_dir", ".", "directory for emitted files"},
        {"time_unit", "inv_xi0", "time column unit: inv_xi0 or ns"},
        {"svg", "false", "also write SVG plots"},
        {"convergence_tol", "1e-4", "dt-halving tolerance on u"},
        {"check_convergence", "false", "run the dt-halving study before writing"},
    };
    return keys;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key) + ": not a number: '" + std::string(v) + "'");
    }
    return x;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
    std::size_t x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key) + ": not a non-negative integer: '" + std::string(v) + "'");
    }
    return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(std::string(key) + ": not a boolean: '" + std::string(v) + "'");
}

} // namespace

std::string flag_name(std::string_view key) {
    std::string f = "--";
    for (char c : key) f += c == '_' ? '-' : c;
    return f;
}

void apply(RunConfig& cfg, std::string_view key, std::string_view raw) {
    const auto v = trim(raw);
    auto& p = cfg.params;
    if (key == "omega0") p.omega0 = parse_double(key, v);
    else if (key == "xi0") p.xi0 = parse_double(key, v);
    else if (key == "omega_c") p.omega_c = parse_double(key, v);
    else if (key == "eta") p.eta = parse_double(key, v);
    else if (key == "temperature_K") p.temperature = parse_double(key, v);
    else if (key == "alpha0_re") p.alpha0.real(parse_double(key, v));
    else if (key == "alpha0_im") p.alpha0.imag(parse_double(key, v));
    else if (key == "n0") p.n0 = parse_double(key, v);
    else if (key == "t_max") cfg.t_max_xi0 = parse_double(key, v);
    else if (key == "n_steps") cfg.n_steps = parse_count(key, v);
    else if (key == "quad_nodes") cfg.quad.nodes = parse_count(key, v);
    else if (key == "quad_rel_tol") cfg.quad.rel_tol = parse_double(key, v);
    else if (key == "substeps") cfg.substeps = parse_count(key, v);
    else if (key == "chain_sites") cfg.chain_sites = parse_count(key, v);
    else if (key == "n_max_fock") cfg.n_max_fock = parse_count(key, v);
    else if (key == "output_dir") cfg.output_dir = std::filesystem::path(std::string(v));
    else if (key == "time_unit") cfg.time_unit = parse_time_unit(v);
    else if (key == "svg") cfg.svg = parse_bool(key, v);
    else if (key == "convergence_tol") cfg.convergence_tol = parse_double(key, v);
    else if (key == "check_convergence") cfg.check_convergence = parse_bool(key, v);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
    cfg.explicit_keys.insert(std::string(key));
}

void apply_text(RunConfig& cfg, std::string_view text) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        apply(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void apply_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    apply_text(cfg, ss.str());
}

RunConfig finalize(RunConfig cfg) {
    if (!cfg.is_set("n0")) cfg.params.n0 = std::norm(cfg.params.alpha0);
    validate(cfg.params);
    if (!(cfg.t_max_xi0 >= 0.0)) throw ConfigError("t_max negative");
    validate(cfg.grid());
    if (cfg.quad.nodes == 0) throw ConfigError("quad_nodes must be positive");
    if (!(cfg.quad.rel_tol > 0.0)) throw ConfigError("quad_rel_tol must be positive");
    if (cfg.substeps == 0) throw ConfigError("substeps must be positive");
    if (cfg.n_max_fock < 1) throw ConfigError("n_max_fock must be at least 1");
    return cfg;
}

} // namespace crowdyn::cli
