// Flat `key = value` run configuration shared by every subcommand.
//
// Keys double as command-line flags (underscores become dashes). Values from
// a --config file are applied first, flags override them, and an unknown key
// in either place is a ConfigError.

#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crowdyn/model.hpp"
#include "crowdyn/spectral.hpp"

namespace crowdyn::cli {

struct RunConfig {
    ModelParams params{};
    double t_max_xi0{60.0};  // grid extent in units of 1/ξ₀
    std::size_t n_steps{6000};
    QuadratureSpec quad{};
    std::size_t substeps{kDefaultSubsteps};
    std::size_t chain_sites{600};
    std::size_t n_max_fock{64};
    std::filesystem::path output_dir{"."};
    TimeUnit time_unit{TimeUnit::inv_xi0};
    bool svg{false};
    double convergence_tol{1e-4};
    bool check_convergence{false};

    std::set<std::string> explicit_keys;  // keys set by file or flag

    bool is_set(std::string_view key) const { return explicit_keys.contains(std::string(key)); }
    TimeGrid grid() const { return TimeGrid::in_xi0_units(params, t_max_xi0, n_steps); }
};

struct KeyInfo {
    const char* key;
    const char* default_value;
    const char* help;
};

const std::vector<KeyInfo>& config_keys();

// Throws ConfigError for an unknown key or an unparsable value.
void apply(RunConfig& cfg, std::string_view key, std::string_view value);

// `key = value` lines, `#` starts a comment, blank lines ignored.
void apply_text(RunConfig& cfg, std::string_view text);
void apply_file(RunConfig& cfg, const std::filesystem::path& path);

// Derives n0 = |alpha0|² when n0 was not given, then validates params and grid.
RunConfig finalize(RunConfig cfg);

std::string flag_name(std::string_view key);  // "temperature_K" -> "--temperature-K"

} // namespace crowdyn::cli
