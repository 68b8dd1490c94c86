#pragma once

#include <iosfwd>
#include <string_view>

#include "crowdyn/cli/config.hpp"
#include "crowdyn/csv.hpp"

namespace crowdyn::cli {

enum ExitCode : int { kOk = 0, kConfigFailure = 1, kNumericalFailure = 2, kIoFailure = 3 };

struct SweepRange {
    double eta_min{0.1};
    double eta_max{2.0};
    double eta_step{0.1};
};

// t,re_u,im_u,abs_u,v,n,current,kappa,kappa_tilde,omega_ren,guard
csv::Table trajectory_table(const RunConfig& cfg);

void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_sweep(const RunConfig& cfg, const SweepRange& range, std::ostream& out);
void cmd_rho(const RunConfig& cfg, double at_time, std::ostream& out);
// Throws NumericalError on FAIL after oracle.csv has been written.
void cmd_oracle_check(const RunConfig& cfg, std::ostream& out);
void cmd_scenario(const RunConfig& cfg, std::string_view name, std::ostream& out);

// Full command line; returns one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace crowdyn::cli
