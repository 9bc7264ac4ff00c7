#pragma once

// Run configuration of the command-line harness. One JSON document drives
// every scenario; parsing is strict and errors name the offending field.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "satent/channel.hpp"
#include "satent/optimize.hpp"

namespace satent::harness {

inline constexpr const char* kRunConfigSchema = "satent.run_config.v1";

enum class Scenario { Atmos, RateSweep, MonteCarlo, ScreenPlan };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view s);

struct AtmosOptions {
    std::vector<double> zenith_angles_deg{0.0, 10.0, 20.0, 30.0};
    std::vector<LinkDirection> directions{LinkDirection::Uplink, LinkDirection::Downlink};
};

struct RateSweepOptions {
    double eta_min = 1e-5;
    double eta_max = 1.0;
    int points = 21;
    std::vector<ProtocolSpec> protocols; // empty = all eight variants
    SearchOptions search{.grid_points = 11};
};

struct MonteCarloOptions {
    std::size_t trials = 250;
    std::vector<double> zenith_angles_deg{0.0, 10.0, 20.0, 30.0};
    std::vector<ResourceKind> resources{ResourceKind::DV, ResourceKind::CV};
    bool amplified = true;
    int n_max = 5;
    std::string channel_dir; // empty = output_dir
    SearchOptions search{.grid_points = 9};
};

struct RunConfig {
    Scenario scenario = Scenario::Atmos;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    unsigned workers = 0; // 0 = hardware concurrency
    ChannelRunConfig channel;
    AtmosOptions atmos;
    RateSweepOptions rates;
    MonteCarloOptions montecarlo;

    void validate() const;
};

// Every protocol variant, relay before distribution, DV before CV,
// unamplified before amplified.
std::vector<ProtocolSpec> all_protocols();

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

} // namespace satent::harness
