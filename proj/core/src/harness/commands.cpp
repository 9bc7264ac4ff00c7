#include "satent/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/random/uniform_int_distribution.hpp>

#include "satent/error.hpp"
#include "satent/optimize.hpp"
#include "satent/parallel.hpp"
#include "satent/rng.hpp"
#include "satent/turbulence.hpp"

namespace satent::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMonteCarloSalt = 0x6d6f6e7465636172ULL;
constexpr const char* kParameterColumns[] = {"xi", "chi", "nu", "g", "g_a", "g_b"};

fs::path prepare_output(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output_dir", "cannot create " + dir + ": " + ec.message());
    return fs::path(dir);
}

std::ofstream open_output(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw ConfigError("output_dir", "cannot write " + p.string());
    os.precision(12);
    return os;
}

void write_json(const fs::path& p, const json& j) {
    auto os = open_output(p);
    os << j.dump(2) << "\n";
}

std::string format_angle(double deg) {
    std::ostringstream os;
    os << deg;
    return os.str();
}

void write_parameters(std::ostream& os, const RateResult& r) {
    for (const char* name : kParameterColumns) {
        os << ",";
        if (auto it = r.parameters.find(name); it != r.parameters.end()) os << it->second;
    }
}

json result_to_json(const RateResult& r) {
    return {{"rate", r.rate},
            {"probability", r.probability},
            {"i_fwd", r.i_fwd},
            {"i_rev", r.i_rev},
            {"parameters", r.parameters},
            {"warnings", r.warnings}};
}

json statistics_to_json(const RateStatistics& s) {
    return {{"configuration", std::string(to_string(s.configuration))},
            {"resource", std::string(to_string(s.resource))},
            {"zenith_deg", s.zenith_deg},
            {"count", s.count},
            {"median", s.median},
            {"p05", s.p05},
            {"p25", s.p25},
            {"p75", s.p75},
            {"p95", s.p95},
            {"min", s.min},
            {"max", s.max},
            {"spread_db", s.spread_db}};
}

EmpiricalChannel load_ensemble(const fs::path& dir, LinkDirection direction, double zenith_deg) {
    const fs::path p = dir / (channel_stem(direction, zenith_deg) + ".json");
    if (!fs::exists(p))
        throw ConfigError("montecarlo.channel_dir", "missing channel file " + p.string() + " (run atmos first)");
    EmpiricalChannel ch = load_channel(p.string());
    if (ch.direction() != direction)
        throw ConfigError("montecarlo.channel_dir", p.string() + " holds a " + std::string(to_string(ch.direction()))
                                                        + " ensemble");
    if (std::abs(ch.config.profile.zenith_angle - degrees_to_radians(zenith_deg)) > 1e-12)
        throw ConfigError("montecarlo.channel_dir", p.string() + " was generated at a different zenith angle");
    if (ch.samples.empty()) throw ConfigError("montecarlo.channel_dir", p.string() + " holds no samples");
    return ch;
}

} // namespace

double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

std::uint64_t ensemble_seed(std::uint64_t master_seed, std::size_t angle_index, LinkDirection direction) {
    return derive_seed(StreamKey{master_seed, angle_index, direction == LinkDirection::Uplink ? 0u : 1u});
}

ChannelRunConfig ensemble_config(const RunConfig& config, std::size_t angle_index, LinkDirection direction) {
    ChannelRunConfig c = config.channel;
    c.profile.zenith_angle = degrees_to_radians(config.atmos.zenith_angles_deg.at(angle_index));
    c.geometry.direction = direction;
    c.master_seed = ensemble_seed(config.master_seed, angle_index, direction);
    c.workers = config.workers;
    return c;
}

std::string channel_stem(LinkDirection direction, double zenith_deg) {
    return "channel_" + std::string(to_string(direction)) + "_z" + format_angle(zenith_deg);
}

json cmd_atmos(const RunConfig& config) {
    config.validate();
    const fs::path dir = prepare_output(config.output_dir);
    json ensembles = json::array();
    for (std::size_t a = 0; a < config.atmos.zenith_angles_deg.size(); ++a) {
        const double deg = config.atmos.zenith_angles_deg[a];
        for (auto direction : config.atmos.directions) {
            const ChannelRunConfig cc = ensemble_config(config, a, direction);
            const EmpiricalChannel ch = sample_channel(cc);
            const std::string stem = channel_stem(direction, deg);
            save_channel((dir / (stem + ".json")).string(), (dir / (stem + ".csv")).string(), ch);
            ensembles.push_back({{"direction", std::string(to_string(direction))},
                                 {"zenith_deg", deg},
                                 {"master_seed", cc.master_seed},
                                 {"json", stem + ".json"},
                                 {"csv", stem + ".csv"},
                                 {"summary", to_json(ch.summary)}});
        }
    }
    json out{{"schema", kAtmosSchema}, {"config", to_json(config)}, {"ensembles", ensembles}};
    write_json(dir / "atmos.json", out);
    return out;
}

std::vector<RatePoint> rate_sweep(const RateSweepOptions& options, std::uint64_t seed) {
    const auto protocols = options.protocols.empty() ? all_protocols() : options.protocols;
    const double lo = std::log(options.eta_min), hi = std::log(options.eta_max);
    std::vector<RatePoint> out;
    for (const auto& spec : protocols) {
        for (int i = 0; i < options.points; ++i) {
            const double eta = std::exp(lo + (hi - lo) * i / (options.points - 1));
            RatePoint pt;
            pt.protocol = protocol_label(spec);
            pt.eta = eta;
            pt.result = optimize_protocol(spec, eta, eta, options.search, seed);
            out.push_back(std::move(pt));
        }
    }
    return out;
}

json cmd_rates(const RunConfig& config) {
    config.validate();
    const fs::path dir = prepare_output(config.output_dir);
    RateSweepOptions options = config.rates;
    options.search.workers = config.workers;
    const auto points = rate_sweep(options, config.master_seed);
    const json echo = to_json(config);

    auto os = open_output(dir / "rates.csv");
    os << "# schema: " << kRatesSchema << "\n# config: " << echo.dump() << "\n";
    os << "protocol,eta,rate,probability,i_fwd,i_rev";
    for (const char* name : kParameterColumns) os << "," << name;
    os << "\n";
    json rows = json::array();
    for (const auto& pt : points) {
        os << pt.protocol << "," << pt.eta << "," << pt.result.rate << "," << pt.result.probability << ","
           << pt.result.i_fwd << "," << pt.result.i_rev;
        write_parameters(os, pt.result);
        os << "\n";
        json row = result_to_json(pt.result);
        row["protocol"] = pt.protocol;
        row["eta"] = pt.eta;
        rows.push_back(row);
    }
    json out{{"schema", kRatesSchema}, {"config", echo}, {"csv", "rates.csv"}, {"points", rows}};
    write_json(dir / "rates.json", out);
    return out;
}

std::vector<RateSample> montecarlo_trials(const EmpiricalChannel& uplink, const EmpiricalChannel& downlink,
                                          const MonteCarloOptions& options, double zenith_deg,
                                          std::size_t angle_index, std::uint64_t master_seed,
                                          unsigned workers) {
    if (uplink.direction() != LinkDirection::Uplink || downlink.direction() != LinkDirection::Downlink)
        throw ConfigError("montecarlo", "relay draws need an uplink ensemble, distribution draws a downlink one");
    if (uplink.samples.empty() || downlink.samples.empty())
        throw ConfigError("montecarlo", "channel ensembles must not be empty");

    const std::size_t per_trial = 2 * options.resources.size();
    std::vector<RateSample> out(options.trials * per_trial);
    parallel_for(options.trials, workers, [&](std::size_t t) {
        RngStream rng(StreamKey{master_seed ^ kMonteCarloSalt, t, angle_index});
        boost::random::uniform_int_distribution<std::size_t> up(0, uplink.samples.size() - 1);
        boost::random::uniform_int_distribution<std::size_t> down(0, downlink.samples.size() - 1);
        const std::size_t ua = up(rng.engine()), ub = up(rng.engine());
        const std::size_t da = down(rng.engine()), db = down(rng.engine());
        std::size_t slot = t * per_trial;
        for (auto config : {Configuration::Relay, Configuration::Distribution}) {
            const bool relay = config == Configuration::Relay;
            const auto& ch = relay ? uplink : downlink;
            for (auto resource : options.resources) {
                RateSample s;
                s.trial = t;
                s.zenith_deg = zenith_deg;
                s.configuration = config;
                s.resource = resource;
                s.index_a = relay ? ua : da;
                s.index_b = relay ? ub : db;
                s.eta_a = ch.samples[s.index_a];
                s.eta_b = ch.samples[s.index_b];
                ProtocolSpec spec{config, resource, options.amplified, options.n_max};
                SearchOptions search = options.search;
                search.workers = 1;
                s.result = optimize_protocol(spec, s.eta_a, s.eta_b, search, t);
                out[slot++] = std::move(s);
            }
        }
    });
    return out;
}

std::vector<RateStatistics> rate_statistics(const std::vector<RateSample>& samples) {
    std::vector<RateStatistics> out;
    auto find = [&](const RateSample& s) -> RateStatistics* {
        for (auto& st : out)
            if (st.configuration == s.configuration && st.resource == s.resource && st.zenith_deg == s.zenith_deg)
                return &st;
        return nullptr;
    };
    std::vector<std::vector<double>> rates;
    for (const auto& s : samples) {
        RateStatistics* st = find(s);
        if (!st) {
            out.push_back(RateStatistics{s.configuration, s.resource, s.zenith_deg});
            rates.emplace_back();
            st = &out.back();
        }
        rates[static_cast<std::size_t>(st - out.data())].push_back(s.result.rate);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& r = rates[i];
        auto& st = out[i];
        st.count = r.size();
        st.median = percentile(r, 50.0);
        st.p05 = percentile(r, 5.0);
        st.p25 = percentile(r, 25.0);
        st.p75 = percentile(r, 75.0);
        st.p95 = percentile(r, 95.0);
        st.min = *std::min_element(r.begin(), r.end());
        st.max = *std::max_element(r.begin(), r.end());
        st.spread_db = 10.0 * std::log10(std::max(st.max, 1e-300) / std::max(st.min, 1e-300));
    }
    return out;
}

double relay_above_distribution_median(const std::vector<RateSample>& samples, ResourceKind resource,
                                       double zenith_deg) {
    std::vector<double> relay, dist;
    for (const auto& s : samples) {
        if (s.resource != resource || s.zenith_deg != zenith_deg) continue;
        (s.configuration == Configuration::Relay ? relay : dist).push_back(s.result.rate);
    }
    if (relay.empty() || dist.empty()) return 0.0;
    const double median = percentile(dist, 50.0);
    const auto above = std::count_if(relay.begin(), relay.end(), [&](double r) { return r > median; });
    return static_cast<double>(above) / static_cast<double>(relay.size());
}

void write_rate_samples_csv(std::ostream& os, const std::vector<RateSample>& samples, const json& config_echo) {
    os << "# schema: " << kMonteCarloSchema << "\n# config: " << config_echo.dump() << "\n";
    os << "zenith_deg,trial,configuration,resource,index_a,index_b,eta_a,eta_b,rate,probability,i_fwd,i_rev";
    for (const char* name : kParameterColumns) os << "," << name;
    os << "\n";
    for (const auto& s : samples) {
        os << s.zenith_deg << "," << s.trial << "," << to_string(s.configuration) << "," << to_string(s.resource)
           << "," << s.index_a << "," << s.index_b << "," << s.eta_a << "," << s.eta_b << "," << s.result.rate
           << "," << s.result.probability << "," << s.result.i_fwd << "," << s.result.i_rev;
        write_parameters(os, s.result);
        os << "\n";
    }
}

json cmd_montecarlo(const RunConfig& config) {
    config.validate();
    const fs::path dir = prepare_output(config.output_dir);
    const fs::path channel_dir(config.montecarlo.channel_dir.empty() ? config.output_dir
                                                                     : config.montecarlo.channel_dir);
    std::vector<RateSample> all;
    json inputs = json::array();
    for (std::size_t a = 0; a < config.montecarlo.zenith_angles_deg.size(); ++a) {
        const double deg = config.montecarlo.zenith_angles_deg[a];
        const auto up = load_ensemble(channel_dir, LinkDirection::Uplink, deg);
        const auto down = load_ensemble(channel_dir, LinkDirection::Downlink, deg);
        inputs.push_back({{"zenith_deg", deg},
                          {"uplink", channel_stem(LinkDirection::Uplink, deg) + ".json"},
                          {"uplink_master_seed", up.config.master_seed},
                          {"downlink", channel_stem(LinkDirection::Downlink, deg) + ".json"},
                          {"downlink_master_seed", down.config.master_seed}});
        auto samples = montecarlo_trials(up, down, config.montecarlo, deg, a, config.master_seed, config.workers);
        all.insert(all.end(), std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.end()));
    }
    const json echo = to_json(config);
    {
        auto os = open_output(dir / "montecarlo.csv");
        write_rate_samples_csv(os, all, echo);
    }
    json stats = json::array();
    for (const auto& st : rate_statistics(all)) stats.push_back(statistics_to_json(st));
    json above = json::array();
    for (double deg : config.montecarlo.zenith_angles_deg)
        for (auto r : config.montecarlo.resources)
            above.push_back({{"zenith_deg", deg},
                             {"resource", std::string(to_string(r))},
                             {"fraction", relay_above_distribution_median(all, r, deg)}});
    json out{{"schema", kMonteCarloSchema},
             {"config", echo},
             {"channels", inputs},
             {"csv", "montecarlo.csv"},
             {"statistics", stats},
             {"relay_above_distribution_median", above}};
    write_json(dir / "montecarlo.json", out);
    return out;
}

json cmd_screenplan(const RunConfig& config) {
    config.validate();
    const fs::path dir = prepare_output(config.output_dir);
    const auto& c = config.channel;
    const ScreenPlan plan = plan_screens(c.profile, c.beam, c.geometry, c.rytov_budget);
    const json echo = to_json(config);

    auto os = open_output(dir / "screenplan.csv");
    os << "# schema: " << kScreenPlanSchema << "\n# config: " << echo.dump() << "\n";
    os << "index,lower,upper,width,screen_altitude,r0,rytov,outer_scale,inner_scale\n";
    json rows = json::array();
    for (std::size_t i = 0; i < plan.segments.size(); ++i) {
        const auto& s = plan.segments[i];
        const bool turbulent = std::isfinite(s.fried_r0);
        os << i << "," << s.lower << "," << s.upper << "," << s.width() << "," << s.screen_altitude << ",";
        if (turbulent) os << s.fried_r0;
        os << "," << s.rytov << ",";
        if (turbulent) os << s.psd.outer_scale << "," << s.psd.inner_scale;
        else os << ",";
        os << "\n";
        rows.push_back({{"lower", s.lower},
                        {"upper", s.upper},
                        {"width", s.width()},
                        {"screen_altitude", s.screen_altitude},
                        {"r0", turbulent ? json(s.fried_r0) : json(nullptr)},
                        {"rytov", s.rytov}});
    }
    json out{{"schema", kScreenPlanSchema},
             {"config", echo},
             {"direction", std::string(to_string(plan.direction))},
             {"screens", plan.screen_count()},
             {"csv", "screenplan.csv"},
             {"segments", rows}};
    write_json(dir / "screenplan.json", out);
    return out;
}

json run(const RunConfig& config) {
    switch (config.scenario) {
    case Scenario::Atmos: return cmd_atmos(config);
    case Scenario::RateSweep: return cmd_rates(config);
    case Scenario::MonteCarlo: return cmd_montecarlo(config);
    case Scenario::ScreenPlan: return cmd_screenplan(config);
    }
    throw ConfigError("scenario", "unknown scenario");
}

} // namespace satent::harness
