#pragma once

// Scenario drivers behind the command-line subcommands. Each writes
// versioned CSV tables and a JSON document that echoes the resolved run
// configuration, and returns that JSON document.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satent/channel.hpp"
#include "satent/harness/config.hpp"
#include "satent/protocols.hpp"

namespace satent::harness {

inline constexpr const char* kAtmosSchema = "satent.atmos.v1";
inline constexpr const char* kRatesSchema = "satent.rates.v1";
inline constexpr const char* kMonteCarloSchema = "satent.montecarlo.v1";
inline constexpr const char* kScreenPlanSchema = "satent.screenplan.v1";

double degrees_to_radians(double deg);

// Seed of the channel ensemble for one zenith angle and direction.
std::uint64_t ensemble_seed(std::uint64_t master_seed, std::size_t angle_index, LinkDirection direction);

// Channel configuration of one ensemble of an atmos run.
ChannelRunConfig ensemble_config(const RunConfig& config, std::size_t angle_index, LinkDirection direction);

// channel_<direction>_z<angle>, without extension.
std::string channel_stem(LinkDirection direction, double zenith_deg);

nlohmann::json cmd_atmos(const RunConfig& config);

struct RatePoint {
    std::string protocol;
    double eta = 0.0;
    RateResult result;
};

std::vector<RatePoint> rate_sweep(const RateSweepOptions& options, std::uint64_t seed);
nlohmann::json cmd_rates(const RunConfig& config);

struct RateSample {
    std::size_t trial = 0;
    double zenith_deg = 0.0;
    Configuration configuration = Configuration::Relay;
    ResourceKind resource = ResourceKind::DV;
    std::size_t index_a = 0; // sample indices into the channel ensemble
    std::size_t index_b = 0;
    double eta_a = 0.0;
    double eta_b = 0.0;
    RateResult result;
};

struct RateStatistics {
    Configuration configuration = Configuration::Relay;
    ResourceKind resource = ResourceKind::DV;
    double zenith_deg = 0.0;
    std::size_t count = 0;
    double median = 0.0;
    double p05 = 0.0;
    double p25 = 0.0;
    double p75 = 0.0;
    double p95 = 0.0;
    double min = 0.0;
    double max = 0.0;
    double spread_db = 0.0; // 10 log10(max / min), rates floored at 1e-300
};

// Relay trials draw both transmissivities from `uplink`, distribution
// trials from `downlink`. Trial t draws from stream
// (master_seed, t, angle_index), so results do not depend on `workers`.
std::vector<RateSample> montecarlo_trials(const EmpiricalChannel& uplink, const EmpiricalChannel& downlink,
                                          const MonteCarloOptions& options, double zenith_deg,
                                          std::size_t angle_index, std::uint64_t master_seed,
                                          unsigned workers);

std::vector<RateStatistics> rate_statistics(const std::vector<RateSample>& samples);

// Fraction of relay trials whose rate exceeds the distribution median, per
// resource and angle.
double relay_above_distribution_median(const std::vector<RateSample>& samples, ResourceKind resource,
                                       double zenith_deg);

nlohmann::json cmd_montecarlo(const RunConfig& config);

nlohmann::json cmd_screenplan(const RunConfig& config);

nlohmann::json run(const RunConfig& config);

void write_rate_samples_csv(std::ostream& os, const std::vector<RateSample>& samples,
                            const nlohmann::json& config_echo);

} // namespace satent::harness
