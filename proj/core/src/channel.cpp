#include "satent/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json_fields.hpp"
#include "satent/error.hpp"
#include "satent/parallel.hpp"

namespace satent {

using nlohmann::json;

double default_aperture(LinkDirection direction) {
    return direction == LinkDirection::Uplink ? kDefaultUplinkAperture : kDefaultDownlinkAperture;
}

void ChannelRunConfig::validate() const {
    profile.validate();
    beam.validate();
    geometry.validate();
    propagation.validate();
    if (!(rytov_budget > 0.0)) throw DomainError("Rytov budget must be positive");
    if (aperture_radius && !(*aperture_radius > 0.0)) throw DomainError("aperture radius must be positive");
    if (runs < 1) throw DomainError("at least one propagation run is required");
}

double ChannelRunConfig::resolved_aperture() const {
    return aperture_radius ? *aperture_radius : default_aperture(geometry.direction);
}

double loss_db(double eta) { return -10.0 * std::log10(std::max(eta, 1e-30)); }

double percentile(std::vector<double> data, double q) {
    if (data.empty()) throw DomainError("percentile of an empty sample");
    if (!(q >= 0.0 && q <= 100.0)) throw DomainError("percentile must lie in [0, 100]");
    std::sort(data.begin(), data.end());
    const double pos = q / 100.0 * static_cast<double>(data.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= data.size()) return data.back();
    return data[i] + frac * (data[i + 1] - data[i]);
}

ChannelSummary summarize(const std::vector<double>& etas) {
    ChannelSummary s;
    s.count = etas.size();
    if (etas.empty()) return s;
    std::vector<double> db(etas.size());
    std::transform(etas.begin(), etas.end(), db.begin(), loss_db);
    const double n = static_cast<double>(etas.size());
    double mean_eta = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        mean_eta += etas[i] / n;
        mean += db[i] / n;
    }
    double m2 = 0.0, m3 = 0.0;
    for (double x : db) {
        const double d = x - mean;
        m2 += d * d / n;
        m3 += d * d * d / n;
    }
    s.mean_eta = mean_eta;
    s.mean_loss_db = mean;
    s.std_loss_db = std::sqrt(m2);
    s.skewness_loss_db = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.min_loss_db = *std::min_element(db.begin(), db.end());
    s.max_loss_db = *std::max_element(db.begin(), db.end());
    s.p05_loss_db = percentile(db, 5);
    s.p25_loss_db = percentile(db, 25);
    s.p50_loss_db = percentile(db, 50);
    s.p75_loss_db = percentile(db, 75);
    s.p95_loss_db = percentile(db, 95);
    return s;
}

EmpiricalChannel sample_channel(const ChannelRunConfig& config) {
    config.validate();
    const ScreenPlan plan = plan_screens(config.profile, config.beam, config.geometry, config.rytov_budget);
    const PropagationLayout layout = make_layout(config.profile, config.beam, config.geometry, plan, config.propagation);
    const double aperture = config.resolved_aperture();
    if (aperture > layout.receiver_grid.half_width())
        throw DomainError("aperture radius exceeds the receiver grid half-width");

    const ComplexField source = gaussian_beam(layout.source_grid, config.beam.waist);
    // Stages before the first screen are identical for every run.
    PropagationLayout prefix_layout = layout;
    prefix_layout.stages.resize(layout.deterministic_prefix);
    const ComplexField prefix = propagate_vacuum(source, prefix_layout, config.propagation);

    EmpiricalChannel out;
    out.config = config;
    out.samples.resize(config.runs);
    out.raw_samples.resize(config.runs);
    parallel_for(config.runs, config.workers, [&](std::size_t run) {
        try {
            const ComplexField rx = propagate(prefix, plan, layout, config.propagation, config.master_seed,
                                              run, layout.deterministic_prefix);
            const double raw = raw_transmissivity(source, rx, aperture);
            out.raw_samples[run] = raw;
            out.samples[run] = std::clamp(raw, 0.0, 1.0);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " [master_seed " + std::to_string(config.master_seed)
                                      + ", run " + std::to_string(run) + "]");
        }
    });
    out.summary = summarize(out.samples);
    return out;
}

json to_json(const ChannelRunConfig& c) {
    json j;
    j["profile"] = {{"wind_speed", c.profile.wind_speed},
                    {"surface_cn2", c.profile.surface_cn2},
                    {"zenith_angle", c.profile.zenith_angle},
                    {"ground_altitude", c.profile.ground_altitude},
                    {"cutover_altitude", c.profile.cutover_altitude}};
    j["beam"] = {{"wavelength", c.beam.wavelength}, {"waist", c.beam.waist}};
    j["geometry"] = {{"path_length", c.geometry.path_length},
                     {"direction", std::string(to_string(c.geometry.direction))}};
    j["propagation"] = {{"grid_points", c.propagation.grid_points},
                        {"samples_per_waist", c.propagation.samples_per_waist},
                        {"receiver_extent_factor", c.propagation.receiver_extent_factor},
                        {"subharmonic_levels", c.propagation.subharmonic_levels},
                        {"absorbing_boundary", c.propagation.absorbing_boundary}};
    j["rytov_budget"] = c.rytov_budget;
    j["aperture_radius"] = c.aperture_radius ? json(*c.aperture_radius) : json(nullptr);
    j["runs"] = c.runs;
    j["master_seed"] = c.master_seed;
    return j;
}

ChannelRunConfig channel_config_from_json(const json& j, const std::string& path) {
    using detail::join_path;
    using detail::read_field;
    detail::reject_unknown(j, path, {"profile", "beam", "geometry", "propagation", "rytov_budget",
                                     "aperture_radius", "runs", "master_seed", "workers"});
    ChannelRunConfig c;
    if (j.contains("profile")) {
        const auto& p = j.at("profile");
        const auto pp = join_path(path, "profile");
        detail::reject_unknown(p, pp, {"wind_speed", "surface_cn2", "zenith_angle", "ground_altitude", "cutover_altitude"});
        read_field(p, pp, "wind_speed", c.profile.wind_speed);
        read_field(p, pp, "surface_cn2", c.profile.surface_cn2);
        read_field(p, pp, "zenith_angle", c.profile.zenith_angle);
        read_field(p, pp, "ground_altitude", c.profile.ground_altitude);
        read_field(p, pp, "cutover_altitude", c.profile.cutover_altitude);
    }
    if (j.contains("beam")) {
        const auto& b = j.at("beam");
        const auto bp = join_path(path, "beam");
        detail::reject_unknown(b, bp, {"wavelength", "waist"});
        read_field(b, bp, "wavelength", c.beam.wavelength);
        read_field(b, bp, "waist", c.beam.waist);
    }
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        const auto gp = join_path(path, "geometry");
        detail::reject_unknown(g, gp, {"path_length", "direction"});
        read_field(g, gp, "path_length", c.geometry.path_length);
        std::string dir{to_string(c.geometry.direction)};
        read_field(g, gp, "direction", dir);
        try {
            c.geometry.direction = parse_direction(dir);
        } catch (const DomainError& e) {
            throw ConfigError(join_path(gp, "direction"), e.what());
        }
    }
    if (j.contains("propagation")) {
        const auto& p = j.at("propagation");
        const auto pp = join_path(path, "propagation");
        detail::reject_unknown(p, pp, {"grid_points", "samples_per_waist", "receiver_extent_factor",
                                       "subharmonic_levels", "absorbing_boundary"});
        read_field(p, pp, "grid_points", c.propagation.grid_points);
        read_field(p, pp, "samples_per_waist", c.propagation.samples_per_waist);
        read_field(p, pp, "receiver_extent_factor", c.propagation.receiver_extent_factor);
        read_field(p, pp, "subharmonic_levels", c.propagation.subharmonic_levels);
        read_field(p, pp, "absorbing_boundary", c.propagation.absorbing_boundary);
    }
    read_field(j, path, "rytov_budget", c.rytov_budget);
    if (j.contains("aperture_radius") && !j.at("aperture_radius").is_null()) {
        double a = 0.0;
        read_field(j, path, "aperture_radius", a);
        c.aperture_radius = a;
    }
    read_field(j, path, "runs", c.runs);
    read_field(j, path, "master_seed", c.master_seed);
    read_field(j, path, "workers", c.workers);
    try {
        c.validate();
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    return c;
}

json to_json(const ChannelSummary& s) {
    return {{"count", s.count},
            {"mean_eta", s.mean_eta},
            {"mean_loss_db", s.mean_loss_db},
            {"std_loss_db", s.std_loss_db},
            {"skewness_loss_db", s.skewness_loss_db},
            {"min_loss_db", s.min_loss_db},
            {"max_loss_db", s.max_loss_db},
            {"p05_loss_db", s.p05_loss_db},
            {"p25_loss_db", s.p25_loss_db},
            {"p50_loss_db", s.p50_loss_db},
            {"p75_loss_db", s.p75_loss_db},
            {"p95_loss_db", s.p95_loss_db}};
}

json to_json(const EmpiricalChannel& ch) {
    return {{"schema", kChannelSchema},
            {"direction", std::string(to_string(ch.direction()))},
            {"zenith_angle", ch.config.profile.zenith_angle},
            {"aperture_radius", ch.config.resolved_aperture()},
            {"master_seed", ch.config.master_seed},
            {"config", to_json(ch.config)},
            {"samples", ch.samples},
            {"raw_samples", ch.raw_samples},
            {"summary", to_json(ch.summary)}};
}

EmpiricalChannel channel_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", "") != std::string(kChannelSchema))
        throw ConfigError("schema", std::string("expected ") + kChannelSchema);
    EmpiricalChannel ch;
    ch.config = channel_config_from_json(j.at("config"), "config");
    ch.samples = j.at("samples").get<std::vector<double>>();
    ch.raw_samples = j.contains("raw_samples") ? j.at("raw_samples").get<std::vector<double>>() : ch.samples;
    for (double e : ch.samples)
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("samples", "transmissivity outside [0, 1]");
    ch.summary = summarize(ch.samples);
    return ch;
}

void write_channel_csv(std::ostream& os, const EmpiricalChannel& ch) {
    os << "# schema: " << kChannelSchema << "\n";
    os << "# config: " << to_json(ch.config).dump() << "\n";
    os << "run,eta,eta_raw,loss_db\n";
    std::ostringstream line;
    line.precision(17);
    for (std::size_t i = 0; i < ch.samples.size(); ++i) {
        line.str("");
        line << i << "," << ch.samples[i] << "," << ch.raw_samples[i] << "," << loss_db(ch.samples[i]) << "\n";
        os << line.str();
    }
}

EmpiricalChannel read_channel_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != std::string("# schema: ") + kChannelSchema)
        throw ConfigError("schema", std::string("expected ") + kChannelSchema);
    EmpiricalChannel ch;
    bool have_config = false;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# config: ", 0) == 0) {
            ch.config = channel_config_from_json(json::parse(line.substr(10)), "config");
            have_config = true;
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_header) {
            if (line != "run,eta,eta_raw,loss_db") throw ConfigError("header", "unexpected CSV column header");
            have_header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string run, eta, raw;
        std::getline(ls, run, ',');
        std::getline(ls, eta, ',');
        std::getline(ls, raw, ',');
        const double e = std::stod(eta);
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("eta", "transmissivity outside [0, 1]");
        ch.samples.push_back(e);
        ch.raw_samples.push_back(std::stod(raw));
    }
    if (!have_config) throw ConfigError("config", "missing config line");
    ch.summary = summarize(ch.samples);
    return ch;
}

void save_channel(const std::string& json_path, const std::string& csv_path, const EmpiricalChannel& ch) {
    std::ofstream js(json_path);
    if (!js) throw ConfigError("out", "cannot write " + json_path);
    js << to_json(ch).dump(2) << "\n";
    std::ofstream cs(csv_path);
    if (!cs) throw ConfigError("out", "cannot write " + csv_path);
    write_channel_csv(cs, ch);
}

EmpiricalChannel load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("channel", "cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return read_channel_csv(in);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("channel", std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return channel_from_json(j);
}

} // namespace satent
