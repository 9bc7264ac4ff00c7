#include <doctest.h>

#include <cmath>
#include <sstream>

#include "satent/channel.hpp"
#include "satent/error.hpp"

using namespace satent;

namespace {

ChannelRunConfig small_config(LinkDirection dir, std::size_t runs) {
    ChannelRunConfig c;
    c.geometry.direction = dir;
    c.propagation.grid_points = 512;
    c.propagation.samples_per_waist = 32.0;
    c.propagation.receiver_extent_factor = 6.0;
    c.runs = runs;
    c.master_seed = 99;
    return c;
}

} // namespace

TEST_CASE("loss and percentiles") {
    CHECK(loss_db(0.1) == doctest::Approx(10.0));
    CHECK(loss_db(0.0) == doctest::Approx(300.0));
    CHECK(percentile({3.0, 1.0, 2.0}, 50.0) == doctest::Approx(2.0));
    CHECK(percentile({0.0, 10.0}, 25.0) == doctest::Approx(2.5));
    const auto s = summarize({0.1, 0.01, 0.001});
    CHECK(s.count == 3);
    CHECK(s.mean_loss_db == doctest::Approx(20.0));
    CHECK(s.min_loss_db == doctest::Approx(10.0));
    CHECK(s.max_loss_db == doctest::Approx(30.0));
    CHECK(s.skewness_loss_db == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("channel sampling is independent of worker count") {
    auto c = small_config(LinkDirection::Uplink, 3);
    c.workers = 1;
    const auto a = sample_channel(c);
    c.workers = 3;
    const auto b = sample_channel(c);
    REQUIRE(a.samples.size() == 3);
    CHECK(a.samples == b.samples);
    CHECK(a.raw_samples == b.raw_samples);
    for (double eta : a.samples) {
        CHECK(eta > 0.0);
        CHECK(eta < 1.0);
    }
    CHECK(a.samples[0] != a.samples[1]);
}

TEST_CASE("a single run is reproducible") {
    const auto c = small_config(LinkDirection::Downlink, 1);
    CHECK(sample_channel(c).samples == sample_channel(c).samples);
}

TEST_CASE("configuration JSON round-trips and is strict") {
    auto c = small_config(LinkDirection::Downlink, 5);
    c.aperture_radius = 0.3;
    const auto j = to_json(c);
    const auto back = channel_config_from_json(j);
    CHECK(to_json(back) == j);

    auto bad = j;
    bad["propagation"]["bogus"] = 1;
    try {
        (void)channel_config_from_json(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "propagation.bogus");
    }
    auto wrong_type = j;
    wrong_type["runs"] = "many";
    CHECK_THROWS_AS((void)channel_config_from_json(wrong_type), ConfigError);
}

TEST_CASE("CSV round trip carries the configuration") {
    EmpiricalChannel ch;
    ch.config = small_config(LinkDirection::Uplink, 3);
    ch.samples = {0.01, 0.002, 0.0005};
    ch.raw_samples = ch.samples;
    ch.summary = summarize(ch.samples);
    std::stringstream ss;
    write_channel_csv(ss, ch);
    const std::string text = ss.str();
    CHECK(text.rfind("# schema: satent.channel.v1", 0) == 0);
    const auto back = read_channel_csv(ss);
    CHECK(back.samples == ch.samples);
    CHECK(to_json(back.config) == to_json(ch.config));
}
