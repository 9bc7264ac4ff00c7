#include <doctest.h>

#include <cmath>

#include "satent/error.hpp"
#include "satent/optimize.hpp"
#include "satent/protocols.hpp"

using namespace satent;

TEST_CASE("rate is probability times the larger coherent information") {
    CHECK(protocol_rate(0.5, 0.2, 0.4) == doctest::Approx(0.2));
    CHECK(protocol_rate(0.5, -0.2, -0.4) == 0.0);
    CHECK(protocol_rate(1.0, 1e-14, 0.0) == 0.0);
}

TEST_CASE("parsing and labels") {
    CHECK(parse_configuration("relay") == Configuration::Relay);
    CHECK(parse_resource("cv") == ResourceKind::CV);
    CHECK_THROWS((void)parse_resource("qudit"));
    CHECK(protocol_label({Configuration::Relay, ResourceKind::DV, true}) == "relay_amp_dv");
    CHECK(protocol_label({Configuration::Distribution, ResourceKind::CV, false}) == "distribution_unamp_cv");
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)relay_amp(Resource{ResourceKind::DV, 0.5}, 0.5, 0.1, 0.1), DomainError);
    CHECK_THROWS_AS((void)relay_unamp_dv(1.5, 0.1, 0.1), DomainError);
    CHECK_THROWS_AS((void)dist_unamp_dv(0.5, 1.1, 0.1), DomainError);
}

TEST_CASE("optimized unamplified DV relay reaches the asymptotic coefficient") {
    const double eta = 0.01;
    const auto r = optimize_protocol({Configuration::Relay, ResourceKind::DV, false}, eta, eta);
    CHECK(r.rate / (eta * eta) == doctest::Approx(0.278).epsilon(0.01));
    CHECK(r.parameters.at("xi") == doctest::Approx(0.217).epsilon(0.005 / 0.217));
}

TEST_CASE("amplified relay beats unamplified relay at high loss") {
    const double eta = 0.01;
    SearchOptions opts;
    opts.grid_points = 11;
    const auto amp = optimize_protocol({Configuration::Relay, ResourceKind::DV, true}, eta, eta, opts);
    const auto unamp = optimize_protocol({Configuration::Relay, ResourceKind::DV, false}, eta, eta, opts);
    CHECK(amp.rate > 5.0 * unamp.rate);
    CHECK(amp.parameters.at("g") > 1.0);
}

TEST_CASE("amplified distribution is nonzero where the unamplified scheme fails") {
    SearchOptions opts;
    opts.grid_points = 7;
    const auto amp = optimize_protocol({Configuration::Distribution, ResourceKind::DV, true}, 0.3, 0.3, opts);
    CHECK(amp.rate > 0.0);
    CHECK(dist_unamp_dv(0.5, 0.3, 0.3).rate == 0.0);
}

TEST_CASE("amplified CV warns at large squeezing") {
    const auto r = relay_amp(Resource{ResourceKind::CV, 0.6, 5}, 2.0, 0.1, 0.1);
    CHECK_FALSE(r.warnings.empty());
}
