#pragma once

// Empirical fading channels: repeated split-step propagations through
// independent turbulence realizations, reduced to aperture transmissivities.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satent/propagation.hpp"
#include "satent/turbulence.hpp"

namespace satent {

inline constexpr const char* kChannelSchema = "satent.channel.v1";

inline constexpr double kDefaultUplinkAperture = 0.15;   // [m]
inline constexpr double kDefaultDownlinkAperture = 0.40; // [m]

double default_aperture(LinkDirection direction);

struct ChannelRunConfig {
    TurbulenceProfile profile;
    BeamParams beam;
    LinkGeometry geometry;
    PropagationConfig propagation;
    double rytov_budget = 0.2;
    std::optional<double> aperture_radius; // default depends on direction
    std::size_t runs = 200;
    std::uint64_t master_seed = 1;
    unsigned workers = 0; // 0 = hardware concurrency

    void validate() const;
    double resolved_aperture() const;
};

struct ChannelSummary {
    std::size_t count = 0;
    double mean_eta = 0.0;
    double mean_loss_db = 0.0;
    double std_loss_db = 0.0;
    double skewness_loss_db = 0.0;
    double min_loss_db = 0.0;
    double max_loss_db = 0.0;
    double p05_loss_db = 0.0;
    double p25_loss_db = 0.0;
    double p50_loss_db = 0.0;
    double p75_loss_db = 0.0;
    double p95_loss_db = 0.0;
};

struct EmpiricalChannel {
    ChannelRunConfig config;
    std::vector<double> samples;     // clamped to [0, 1]
    std::vector<double> raw_samples; // before clamping
    ChannelSummary summary;

    LinkDirection direction() const { return config.geometry.direction; }
};

// Loss in dB, -10 log10(eta); eta is floored at 1e-30.
double loss_db(double eta);

// Linear-interpolated percentile (q in [0, 100]) of unsorted data.
double percentile(std::vector<double> data, double q);

ChannelSummary summarize(const std::vector<double>& etas);

// Runs `config.runs` propagations. Run i draws its screens from streams
// (master_seed, i, screen), so the result does not depend on worker count.
EmpiricalChannel sample_channel(const ChannelRunConfig& config);

// Strict JSON mapping of the run configuration; unknown keys raise
// ConfigError naming the offending field path.
nlohmann::json to_json(const ChannelRunConfig& config);
ChannelRunConfig channel_config_from_json(const nlohmann::json& j, const std::string& path = "");

nlohmann::json to_json(const ChannelSummary& s);
nlohmann::json to_json(const EmpiricalChannel& channel);
EmpiricalChannel channel_from_json(const nlohmann::json& j);

void write_channel_csv(std::ostream& os, const EmpiricalChannel& channel);
EmpiricalChannel read_channel_csv(std::istream& is);

void save_channel(const std::string& json_path, const std::string& csv_path, const EmpiricalChannel& channel);
EmpiricalChannel load_channel(const std::string& path);

} // namespace satent
