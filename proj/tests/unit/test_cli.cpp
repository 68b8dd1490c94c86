#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crowdyn/cli/commands.hpp"
#include "crowdyn/cli/config.hpp"
#include "crowdyn/csv.hpp"
#include "crowdyn/spectral.hpp"
#include "test_support.hpp"

using namespace crowdyn;
using namespace crowdyn::cli;
using crowdyn::testing::TempDir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "crowdyn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("config keys and defaults") {
    RunConfig cfg;
    for (const auto& k : config_keys()) {
        CAPTURE(k.key);
        CHECK(std::string(k.default_value).size() > 0);
        // n0 defaults to a derived value, documented rather than literal.
        if (std::string(k.key) == "n0") continue;
        CHECK_NOTHROW(apply(cfg, k.key, k.default_value));
    }
    cfg = finalize(cfg);
    const RunConfig fresh;
    CHECK(cfg.params.omega0 == fresh.params.omega0);
    CHECK(cfg.params.eta == fresh.params.eta);
    CHECK(cfg.n_steps == fresh.n_steps);
    CHECK(cfg.t_max_xi0 == fresh.t_max_xi0);
    CHECK(cfg.quad.nodes == fresh.quad.nodes);
    CHECK(cfg.chain_sites == fresh.chain_sites);
    CHECK(cfg.time_unit == TimeUnit::inv_xi0);
    CHECK(flag_name("temperature_K") == "--temperature-K");
    CHECK(flag_name("n_max_fock") == "--n-max-fock");
}

TEST_CASE("config text parsing") {
    RunConfig cfg;
    apply_text(cfg, "# sample run\n\neta = 0.7   # trailing\n omega_c=51.0\nalpha0_re = 0\ntime_unit = ns\n");
    cfg = finalize(cfg);
    CHECK(cfg.params.eta == 0.7);
    CHECK(cfg.params.omega_c == 51.0);
    CHECK(cfg.params.n0 == 0.0);
    CHECK(cfg.time_unit == TimeUnit::ns);
    CHECK(cfg.is_set("eta"));
    CHECK_FALSE(cfg.is_set("xi0"));

    RunConfig bad;
    CHECK_THROWS_AS(apply_text(bad, "etta = 1\n"), ConfigError);
    CHECK_THROWS_AS(apply_text(bad, "eta 1\n"), ConfigError);
    CHECK_THROWS_AS(apply(bad, "eta", "abc"), ConfigError);
    CHECK_THROWS_AS(apply(bad, "n_steps", "-4"), ConfigError);
    CHECK_THROWS_AS(apply(bad, "svg", "maybe"), ConfigError);
    RunConfig neg;
    apply(neg, "eta", "-1");
    CHECK_THROWS_AS(finalize(neg), ConfigError);
    CHECK_THROWS_AS(apply_file(bad, "/nonexistent/crowdyn.cfg"), IoError);
}

TEST_CASE("simulate writes the trajectory table") {
    TempDir dir;
    const auto r = run_cli({"simulate", "--output-dir", dir.path().string()});
    REQUIRE(r.code == kOk);
    const auto text = slurp(dir.path() / "trajectory.csv");
    const auto t = csv::parse(text);
    CHECK(t.header == std::vector<std::string>{"t", "re_u", "im_u", "abs_u", "v", "n", "current", "kappa",
                                               "kappa_tilde", "omega_ren", "guard"});
    CHECK(t.rows.size() == 6001);
    REQUIRE(t.comments.size() == 1);
    CHECK(t.comments[0].find("hbar_ueV_ns=") != std::string::npos);
    CHECK(t.rows.back()[0] == doctest::Approx(60.0));
    CHECK(csv::format(t) == text);
    CHECK_FALSE(std::filesystem::exists(dir.path() / "trajectory.svg"));
}

TEST_CASE("simulate special cases") {
    TempDir dir;
    REQUIRE(run_cli({"simulate", "--output-dir", dir.path().string(), "--eta", "0", "--n-steps", "600"}).code == kOk);
    auto t = csv::read(dir.path() / "trajectory.csv");
    for (double a : t.column_values("abs_u")) CHECK(std::abs(a - 1.0) <= 1e-12);

    REQUIRE(run_cli({"simulate", "--output-dir", dir.path().string(), "--temperature-K", "0", "--n-steps", "600"}).code ==
            kOk);
    t = csv::read(dir.path() / "trajectory.csv");
    for (double v : t.column_values("v")) CHECK(v == 0.0);

    REQUIRE(run_cli({"simulate", "--output-dir", dir.path().string(), "--time-unit", "ns", "--n-steps", "600"}).code ==
            kOk);
    t = csv::read(dir.path() / "trajectory.csv");
    CHECK(t.rows.back()[0] == doctest::Approx(60.0 / 1.24 * 0.658212));
}

TEST_CASE("plots never change the tables") {
    TempDir plain, plotted;
    REQUIRE(run_cli({"simulate", "--output-dir", plain.path().string(), "--n-steps", "1200"}).code == kOk);
    REQUIRE(run_cli({"simulate", "--output-dir", plotted.path().string(), "--n-steps", "1200", "--svg", "true"}).code ==
            kOk);
    CHECK(slurp(plain.path() / "trajectory.csv") == slurp(plotted.path() / "trajectory.csv"));
    const auto svg = slurp(plotted.path() / "trajectory.svg");
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("config file and flag precedence") {
    TempDir dir;
    const auto cfg = dir.path() / "run.cfg";
    std::ofstream(cfg) << "eta = 0\nn_steps = 300\noutput_dir = " << dir.path().string() << "\n";
    REQUIRE(run_cli({"simulate", "--config", cfg.string()}).code == kOk);
    CHECK(csv::read(dir.path() / "trajectory.csv").rows.size() == 301);
    REQUIRE(run_cli({"simulate", "--config", cfg.string(), "--n-steps", "100"}).code == kOk);
    CHECK(csv::read(dir.path() / "trajectory.csv").rows.size() == 101);

    std::ofstream(cfg) << "etaa = 0\n";
    const auto r = run_cli({"simulate", "--config", cfg.string()});
    CHECK(r.code == kConfigFailure);
    CHECK(r.err.find("etaa") != std::string::npos);
}

TEST_CASE("sweep outputs") {
    TempDir dir;
    const auto r = run_cli({"sweep", "--output-dir", dir.path().string(), "--eta-min", "1.5", "--eta-max", "1.5",
                            "--n-steps", "2000", "--t-max", "20", "--svg", "true"});
    REQUIRE(r.code == kOk);
    const auto sweep = csv::read(dir.path() / "sweep.csv");
    const auto steady = csv::read(dir.path() / "steady.csv");
    CHECK(sweep.header == std::vector<std::string>{"eta", "t", "abs_u"});
    CHECK(steady.header == std::vector<std::string>{"eta", "steady_amplitude"});
    CHECK(std::filesystem::exists(dir.path() / "sweep.svg"));

    REQUIRE(run_cli({"simulate", "--output-dir", dir.path().string(), "--eta", "1.5", "--n-steps", "2000", "--t-max",
                     "20"})
                .code == kOk);
    const auto traj = csv::read(dir.path() / "trajectory.csv");
    CHECK(sweep.column_values("abs_u") == traj.column_values("abs_u"));

    CHECK(run_cli({"sweep", "--eta-min", "2", "--eta-max", "1"}).code == kConfigFailure);
    CHECK(run_cli({"sweep", "--eta-step", "0"}).code == kConfigFailure);
}

TEST_CASE("density matrix snapshots") {
    TempDir dir;
    auto r = run_cli({"rho", "--output-dir", dir.path().string(), "--at-time", "0", "--temperature-K", "0",
                      "--n-steps", "600"});
    REQUIRE(r.code == kOk);
    auto t = csv::read(dir.path() / "rho.csv");
    CHECK(t.header == std::vector<std::string>{"p", "q", "re", "im"});
    REQUIRE(t.comments.size() == 1);
    const auto& meta = t.comments[0];
    CHECK(meta.starts_with("alpha_re=1, alpha_im=0, v=0, purity="));
    const auto pos = meta.find("purity=") + 7;
    CHECK(std::stod(meta.substr(pos)) == doctest::Approx(1.0).epsilon(1e-8));
    for (const auto& row : t.rows) CHECK(row[0] <= row[1]);

    r = run_cli({"rho", "--output-dir", dir.path().string(), "--at-time", "60", "--alpha0-re", "0", "--eta", "0.5"});
    REQUIRE(r.code == kOk);
    t = csv::read(dir.path() / "rho.csv");
    double mean = 0.0, offdiag = 0.0;
    for (const auto& row : t.rows) {
        if (row[0] == row[1]) mean += row[0] * row[2];
        else offdiag = std::max(offdiag, std::hypot(row[2], row[3]));
    }
    CHECK(mean == doctest::Approx(bose_occupation(50.25, 5.0)).epsilon(0.05));
    CHECK(offdiag < 1e-6);

    CHECK(run_cli({"rho", "--output-dir", dir.path().string(), "--at-time", "61"}).code == kConfigFailure);
    CHECK(run_cli({"rho", "--output-dir", dir.path().string(), "--at-time", "-1"}).code == kConfigFailure);
    CHECK(run_cli({"rho"}).code == kConfigFailure);
    // A thermal cloud far beyond the Fock cap cannot be truncated.
    CHECK(run_cli({"rho", "--output-dir", dir.path().string(), "--at-time", "60", "--eta", "0.5", "--temperature-K",
                   "500", "--n-steps", "600"})
              .code == kNumericalFailure);
}

TEST_CASE("oracle check") {
    TempDir dir;
    auto r = run_cli({"oracle-check", "--output-dir", dir.path().string(), "--eta", "0", "--n-steps", "600",
                      "--chain-sites", "200"});
    REQUIRE(r.code == kOk);
    CHECK(r.out.find("PASS") != std::string::npos);
    const auto t = csv::read(dir.path() / "oracle.csv");
    CHECK(t.header == std::vector<std::string>{"t", "re_u", "im_u", "re_u_oracle", "im_u_oracle", "abs_du", "v",
                                               "v_oracle", "abs_dv"});
    for (double d : t.column_values("abs_du")) CHECK(d < 1e-10);
    for (double d : t.column_values("abs_dv")) CHECK(d < 1e-10);

    r = run_cli({"oracle-check", "--output-dir", dir.path().string(), "--chain-sites", "50"});
    CHECK(r.code == kConfigFailure);
    CHECK(r.err.find("required chain_sites >= 150") != std::string::npos);

    r = run_cli({"oracle-check", "--output-dir", dir.path().string(), "--n-steps", "60", "--chain-sites", "200"});
    CHECK(r.code == kNumericalFailure);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("scenario command") {
    TempDir dir;
    const auto r = run_cli({"scenario", "fig4b", "--output-dir", dir.path().string(), "--eta", "0.5", "--t-max", "10",
                            "--n-steps", "1000", "--svg", "true"});
    REQUIRE(r.code == kOk);
    const auto t = csv::read(dir.path() / "fig4b.csv");
    CHECK(t.header == std::vector<std::string>{"eta", "t", "v"});
    CHECK(t.rows.size() == 1001);
    CHECK(std::filesystem::exists(dir.path() / "fig4b.svg"));
    CHECK(run_cli({"scenario", "fig7"}).code == kConfigFailure);
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run_cli({}).code == kConfigFailure);
    CHECK(run_cli({"simulate", "--bogus", "1"}).code == kConfigFailure);
    CHECK(run_cli({"frobnicate"}).code == kConfigFailure);
    CHECK(run_cli({"simulate", "--eta", "-0.1"}).code == kConfigFailure);
    CHECK(run_cli({"simulate", "--xi0", "30"}).code == kConfigFailure);
    CHECK(run_cli({"--help"}).code == kOk);

    const auto nested = dir.path() / "file";
    std::ofstream(nested) << "x";
    CHECK(run_cli({"simulate", "--output-dir", (nested / "sub").string(), "--n-steps", "10"}).code == kIoFailure);

    const auto r = run_cli({"simulate", "--output-dir", dir.path().string(), "--n-steps", "120", "--check-convergence",
                            "true"});
    CHECK(r.code == kNumericalFailure);
    CHECK(r.err.find("not converged") != std::string::npos);
}
