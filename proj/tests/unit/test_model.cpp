#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "crowdyn/model.hpp"
#include "test_support.hpp"

using namespace crowdyn;
using crowdyn::testing::reference_params;

namespace {

std::string validation_message(const ModelParams& p) {
    try {
        validate(p);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool same(const ModelParams& a, const ModelParams& b) {
    return a.omega0 == b.omega0 && a.xi0 == b.xi0 && a.omega_c == b.omega_c && a.eta == b.eta &&
           a.temperature == b.temperature && a.alpha0 == b.alpha0 && a.n0 == b.n0;
}

} // namespace

TEST_CASE("reference parameters are valid and returned unchanged") {
    const ModelParams p = reference_params();
    CHECK(validation_message(p).empty());
    CHECK(same(validate(p), p));
    CHECK(same(validate(validate(p)), validate(p)));
}

TEST_CASE("validation names the first violated invariant") {
    auto p = reference_params();
    p.eta = -0.1;
    CHECK(validation_message(p) == "eta negative");

    p = reference_params();
    p.xi0 = 30.0;
    CHECK(validation_message(p) == "band extends to nonpositive frequency");

    p = reference_params();
    p.omega0 = 0.0;
    CHECK(validation_message(p) == "omega0 not positive");

    p = reference_params();
    p.xi0 = -1.0;
    CHECK(validation_message(p) == "xi0 not positive");

    p = reference_params();
    p.omega_c = 0.0;
    CHECK(validation_message(p) == "omega_c not positive");

    p = reference_params();
    p.temperature = -1.0;
    CHECK(validation_message(p) == "temperature negative");

    p = reference_params();
    p.n0 = -1.0;
    CHECK(validation_message(p) == "n0 negative");

    p = reference_params();
    p.alpha0 = {1.0, 1.0};
    p.n0 = 1.0;
    CHECK(validation_message(p) == "n0 inconsistent with |alpha0|^2");
    p.n0 = 2.0;
    CHECK(validation_message(p).empty());

    p = reference_params();
    p.eta = std::numeric_limits<double>::quiet_NaN();
    CHECK(validation_message(p) == "parameters not finite");

    // Order: a negative eta is reported before the band problem.
    p = reference_params();
    p.eta = -1.0;
    p.xi0 = 30.0;
    CHECK(validation_message(p) == "eta negative");
}

TEST_CASE("vacuum initial state with zero photons is accepted") {
    auto p = reference_params();
    p.alpha0 = {0.0, 0.0};
    p.n0 = 0.0;
    CHECK(validation_message(p).empty());
}

TEST_CASE("band edges") {
    auto p = reference_params();
    auto [lo, hi] = band_edges(p);
    CHECK(lo == doctest::Approx(47.77).epsilon(1e-12));
    CHECK(hi == doctest::Approx(52.73).epsilon(1e-12));

    p.omega0 = 10.0;
    p.xi0 = 0.0;
    std::tie(lo, hi) = band_edges(p);
    CHECK(lo == 10.0);
    CHECK(hi == 10.0);

    p.omega0 = 4.0;
    p.xi0 = 1.0;
    std::tie(lo, hi) = band_edges(p);
    CHECK(lo == 2.0);
    CHECK(hi == 6.0);
}

TEST_CASE("band edges are symmetric with half-width 2 xi0") {
    for (double w0 : {3.0, 17.5, 50.25, 400.0}) {
        for (double x0 : {0.01, 0.5, 1.24}) {
            ModelParams p;
            p.omega0 = w0;
            p.xi0 = x0;
            const auto [lo, hi] = band_edges(p);
            CHECK(0.5 * (lo + hi) == doctest::Approx(w0).epsilon(1e-14));
            CHECK(0.5 * (hi - lo) == doctest::Approx(2.0 * x0).epsilon(1e-12));
        }
    }
}

TEST_CASE("detuning classification") {
    CHECK(classify_detuning(reference_params(1.5, 0.5)) == Detuning::outside_band);
    CHECK(classify_detuning(reference_params(1.5, 1.025)) == Detuning::near_upper_edge);
    CHECK(classify_detuning(reference_params(1.5, 1.0)) == Detuning::inside_band);
    CHECK(classify_detuning(reference_params(1.5, 1.5)) == Detuning::outside_band);

    auto p = reference_params();
    p.omega_c = p.omega0 + 2.0 * p.xi0;
    CHECK(classify_detuning(p) == Detuning::outside_band);
    p.omega_c = p.omega0 + p.xi0;
    CHECK(classify_detuning(p) == Detuning::inside_band);
    p.omega_c = p.omega0 - 1.5 * p.xi0;
    CHECK(classify_detuning(p) == Detuning::inside_band);
    CHECK(to_string(Detuning::near_upper_edge) == "near_upper_edge");
}

TEST_CASE("time grid layout") {
    const auto p = reference_params();
    const auto g = TimeGrid::in_xi0_units(p, 60.0, 6000);
    CHECK(g.size() == 6001);
    CHECK(g.dt() * p.xi0 == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(g.time(0) == 0.0);
    CHECK(g.time(6000) == doctest::Approx(g.t_max).epsilon(1e-14));
    const auto r = g.refined(2);
    CHECK(r.n_steps == 12000);
    CHECK(r.t_max == g.t_max);
    CHECK(r.dt() == doctest::Approx(g.dt() / 2).epsilon(1e-15));

    CHECK_NOTHROW(validate(TimeGrid{0.0, 0}));
    CHECK_NOTHROW(validate(g));
    CHECK_THROWS_AS(validate(TimeGrid{-1.0, 10}), ConfigError);
    CHECK_THROWS_AS(validate(TimeGrid{1.0, 0}), ConfigError);
    CHECK_THROWS_AS(validate(TimeGrid{std::numeric_limits<double>::infinity(), 10}), ConfigError);
}

TEST_CASE("phase per step reflects the rotating frame") {
    const auto p = reference_params();
    const auto g = TimeGrid::in_xi0_units(p, 60.0, 6000);
    CHECK(phase_per_step(p, g) == doctest::Approx(0.02).epsilon(1e-12));
    const auto off = reference_params(1.5, 0.5);
    CHECK(phase_per_step(off, g) == doctest::Approx(0.01 * (0.5 * 50.25 / 1.24 + 2.0)).epsilon(1e-12));
}

TEST_CASE("output time units") {
    const auto p = reference_params();
    CHECK(parse_time_unit("inv_xi0") == TimeUnit::inv_xi0);
    CHECK(parse_time_unit("ns") == TimeUnit::ns);
    CHECK_THROWS_AS(parse_time_unit("fs"), ConfigError);
    CHECK(to_string(TimeUnit::ns) == "ns");

    const double t = 12.5;
    CHECK(to_output_time(t, TimeUnit::inv_xi0, p) == doctest::Approx(t * 1.24));
    CHECK(to_output_time(t, TimeUnit::ns, p) == doctest::Approx(t * 0.658212));
    for (auto unit : {TimeUnit::inv_xi0, TimeUnit::ns}) {
        CHECK(from_output_time(to_output_time(t, unit, p), unit, p) == doctest::Approx(t).epsilon(1e-15));
    }
}

TEST_CASE("derived quantities") {
    const auto p = reference_params(2.0);
    CHECK(p.xi() == doctest::Approx(2.48));
    CHECK(p.kT() == doctest::Approx(430.8665));
}
