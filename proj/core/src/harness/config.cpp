#include "satent/harness/config.hpp"

#include <cmath>
#include <fstream>

#include "../json_fields.hpp"
#include "satent/error.hpp"

namespace satent::harness {

using nlohmann::json;
using detail::join_path;
using detail::read_field;

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::Atmos: return "atmos";
    case Scenario::RateSweep: return "rates";
    case Scenario::MonteCarlo: return "mc";
    case Scenario::ScreenPlan: return "screens";
    }
    return "atmos";
}

Scenario parse_scenario(std::string_view s) {
    if (s == "atmos") return Scenario::Atmos;
    if (s == "rates") return Scenario::RateSweep;
    if (s == "mc") return Scenario::MonteCarlo;
    if (s == "screens") return Scenario::ScreenPlan;
    throw ConfigError("scenario", "expected one of atmos, rates, mc, screens");
}

std::vector<ProtocolSpec> all_protocols() {
    std::vector<ProtocolSpec> out;
    for (auto c : {Configuration::Relay, Configuration::Distribution})
        for (auto r : {ResourceKind::DV, ResourceKind::CV})
            for (bool amp : {false, true}) out.push_back(ProtocolSpec{c, r, amp});
    return out;
}

namespace {

void validate_angles(const std::vector<double>& angles, const std::string& path) {
    if (angles.empty()) throw ConfigError(path, "at least one zenith angle is required");
    for (std::size_t i = 0; i < angles.size(); ++i)
        if (!(angles[i] >= 0.0 && angles[i] < 60.0))
            throw ConfigError(path + "[" + std::to_string(i) + "]", "zenith angle must lie in [0, 60) degrees");
}

void validate_search(const SearchOptions& s, const std::string& path) {
    if (s.grid_points < 2) throw ConfigError(join_path(path, "grid_points"), "need at least 2 grid points");
    if (!(s.rtol > 0.0)) throw ConfigError(join_path(path, "rtol"), "must be positive");
    if (!(s.chi_max > 0.0 && s.chi_max < 1.0)) throw ConfigError(join_path(path, "chi_max"), "must lie in (0, 1)");
    if (!(s.g_max > 1.0 && std::isfinite(s.g_max))) throw ConfigError(join_path(path, "g_max"), "must be finite and above 1");
}

json search_to_json(const SearchOptions& s) {
    return {{"grid_points", s.grid_points}, {"rtol", s.rtol}, {"chi_max", s.chi_max}, {"g_max", s.g_max}};
}

SearchOptions search_from_json(const json& j, const std::string& path, SearchOptions s) {
    detail::reject_unknown(j, path, {"grid_points", "rtol", "chi_max", "g_max"});
    read_field(j, path, "grid_points", s.grid_points);
    read_field(j, path, "rtol", s.rtol);
    read_field(j, path, "chi_max", s.chi_max);
    read_field(j, path, "g_max", s.g_max);
    return s;
}

json protocol_to_json(const ProtocolSpec& p) {
    return {{"configuration", std::string(to_string(p.configuration))},
            {"resource", std::string(to_string(p.resource))},
            {"amplified", p.amplified},
            {"n_max", p.n_max},
            {"cv_squeezing_db", p.cv_squeezing_db}};
}

template <class Parse>
auto parse_enum(const json& j, const std::string& path, const char* key, Parse parse) {
    std::string text;
    read_field(j, path, key, text);
    try {
        return parse(text);
    } catch (const Error& e) {
        throw ConfigError(join_path(path, key), e.what());
    }
}

ProtocolSpec protocol_from_json(const json& j, const std::string& path) {
    detail::reject_unknown(j, path, {"configuration", "resource", "amplified", "n_max", "cv_squeezing_db"});
    for (const char* key : {"configuration", "resource"})
        if (!j.contains(key)) throw ConfigError(join_path(path, key), "required");
    ProtocolSpec p;
    p.configuration = parse_enum(j, path, "configuration", parse_configuration);
    p.resource = parse_enum(j, path, "resource", parse_resource);
    read_field(j, path, "amplified", p.amplified);
    read_field(j, path, "n_max", p.n_max);
    read_field(j, path, "cv_squeezing_db", p.cv_squeezing_db);
    return p;
}

std::vector<double> read_angles(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of angles in degrees");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

json directions_to_json(const std::vector<LinkDirection>& dirs) {
    json a = json::array();
    for (auto d : dirs) a.push_back(std::string(to_string(d)));
    return a;
}

json resources_to_json(const std::vector<ResourceKind>& rs) {
    json a = json::array();
    for (auto r : rs) a.push_back(std::string(to_string(r)));
    return a;
}

} // namespace

void RunConfig::validate() const {
    if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    try {
        channel.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("channel", e.what());
    }
    validate_angles(atmos.zenith_angles_deg, "atmos.zenith_angles_deg");
    if (atmos.directions.empty()) throw ConfigError("atmos.directions", "at least one direction is required");

    if (!(rates.eta_min > 0.0 && rates.eta_min < rates.eta_max && rates.eta_max <= 1.0))
        throw ConfigError("rates.eta_min", "need 0 < eta_min < eta_max <= 1");
    if (rates.points < 2) throw ConfigError("rates.points", "need at least 2 points");
    validate_search(rates.search, "rates.search");
    for (std::size_t i = 0; i < rates.protocols.size(); ++i) {
        const auto& p = rates.protocols[i];
        if (p.n_max < 1) throw ConfigError("rates.protocols[" + std::to_string(i) + "].n_max", "must be at least 1");
    }

    if (montecarlo.trials < 1) throw ConfigError("montecarlo.trials", "need at least one trial");
    validate_angles(montecarlo.zenith_angles_deg, "montecarlo.zenith_angles_deg");
    if (montecarlo.resources.empty()) throw ConfigError("montecarlo.resources", "at least one resource is required");
    if (montecarlo.n_max < 1) throw ConfigError("montecarlo.n_max", "must be at least 1");
    validate_search(montecarlo.search, "montecarlo.search");
}

json to_json(const RunConfig& c) {
    json j;
    j["schema"] = kRunConfigSchema;
    j["scenario"] = std::string(to_string(c.scenario));
    j["master_seed"] = c.master_seed;
    j["output_dir"] = c.output_dir;
    json ch = to_json(c.channel);
    ch.erase("master_seed");
    j["channel"] = ch;
    j["atmos"] = {{"zenith_angles_deg", c.atmos.zenith_angles_deg},
                  {"directions", directions_to_json(c.atmos.directions)}};
    json protocols = json::array();
    for (const auto& p : c.rates.protocols) protocols.push_back(protocol_to_json(p));
    j["rates"] = {{"eta_min", c.rates.eta_min},
                  {"eta_max", c.rates.eta_max},
                  {"points", c.rates.points},
                  {"protocols", protocols},
                  {"search", search_to_json(c.rates.search)}};
    j["montecarlo"] = {{"trials", c.montecarlo.trials},
                       {"zenith_angles_deg", c.montecarlo.zenith_angles_deg},
                       {"resources", resources_to_json(c.montecarlo.resources)},
                       {"amplified", c.montecarlo.amplified},
                       {"n_max", c.montecarlo.n_max},
                       {"channel_dir", c.montecarlo.channel_dir},
                       {"search", search_to_json(c.montecarlo.search)}};
    return j;
}

RunConfig run_config_from_json(const json& j) {
    detail::reject_unknown(j, "", {"schema", "scenario", "master_seed", "output_dir", "workers", "channel",
                                   "atmos", "rates", "montecarlo"});
    RunConfig c;
    if (j.contains("schema")) {
        std::string schema;
        read_field(j, "", "schema", schema);
        if (schema != kRunConfigSchema) throw ConfigError("schema", "expected " + std::string(kRunConfigSchema));
    }
    if (j.contains("scenario")) c.scenario = parse_enum(j, "", "scenario", parse_scenario);
    read_field(j, "", "master_seed", c.master_seed);
    read_field(j, "", "output_dir", c.output_dir);
    read_field(j, "", "workers", c.workers);

    if (j.contains("channel")) {
        const auto& ch = j.at("channel");
        detail::require_object(ch, "channel");
        for (const char* key : {"master_seed", "workers"})
            if (ch.contains(key)) throw ConfigError(join_path("channel", key), "set this at the top level");
        c.channel = channel_config_from_json(ch, "channel");
    }

    if (j.contains("atmos")) {
        const auto& a = j.at("atmos");
        detail::reject_unknown(a, "atmos", {"zenith_angles_deg", "directions"});
        if (a.contains("zenith_angles_deg"))
            c.atmos.zenith_angles_deg = read_angles(a.at("zenith_angles_deg"), "atmos.zenith_angles_deg");
        if (a.contains("directions")) {
            const auto& d = a.at("directions");
            if (!d.is_array()) throw ConfigError("atmos.directions", "expected an array");
            c.atmos.directions.clear();
            for (std::size_t i = 0; i < d.size(); ++i) {
                const std::string p = "atmos.directions[" + std::to_string(i) + "]";
                if (!d[i].is_string()) throw ConfigError(p, "expected a string");
                try {
                    c.atmos.directions.push_back(parse_direction(d[i].get<std::string>()));
                } catch (const Error& e) {
                    throw ConfigError(p, e.what());
                }
            }
        }
    }

    if (j.contains("rates")) {
        const auto& r = j.at("rates");
        detail::reject_unknown(r, "rates", {"eta_min", "eta_max", "points", "protocols", "search"});
        read_field(r, "rates", "eta_min", c.rates.eta_min);
        read_field(r, "rates", "eta_max", c.rates.eta_max);
        read_field(r, "rates", "points", c.rates.points);
        if (r.contains("protocols")) {
            const auto& ps = r.at("protocols");
            if (!ps.is_array()) throw ConfigError("rates.protocols", "expected an array");
            for (std::size_t i = 0; i < ps.size(); ++i)
                c.rates.protocols.push_back(protocol_from_json(ps[i], "rates.protocols[" + std::to_string(i) + "]"));
        }
        if (r.contains("search")) c.rates.search = search_from_json(r.at("search"), "rates.search", c.rates.search);
    }

    if (j.contains("montecarlo")) {
        const auto& m = j.at("montecarlo");
        const std::string mp = "montecarlo";
        detail::reject_unknown(m, mp, {"trials", "zenith_angles_deg", "resources", "amplified", "n_max",
                                       "channel_dir", "search"});
        read_field(m, mp, "trials", c.montecarlo.trials);
        if (m.contains("zenith_angles_deg"))
            c.montecarlo.zenith_angles_deg = read_angles(m.at("zenith_angles_deg"), "montecarlo.zenith_angles_deg");
        if (m.contains("resources")) {
            const auto& rs = m.at("resources");
            if (!rs.is_array()) throw ConfigError("montecarlo.resources", "expected an array");
            c.montecarlo.resources.clear();
            for (std::size_t i = 0; i < rs.size(); ++i) {
                const std::string p = "montecarlo.resources[" + std::to_string(i) + "]";
                if (!rs[i].is_string()) throw ConfigError(p, "expected a string");
                try {
                    c.montecarlo.resources.push_back(parse_resource(rs[i].get<std::string>()));
                } catch (const Error& e) {
                    throw ConfigError(p, e.what());
                }
            }
        }
        read_field(m, mp, "amplified", c.montecarlo.amplified);
        read_field(m, mp, "n_max", c.montecarlo.n_max);
        read_field(m, mp, "channel_dir", c.montecarlo.channel_dir);
        if (m.contains("search"))
            c.montecarlo.search = search_from_json(m.at("search"), "montecarlo.search", c.montecarlo.search);
    }
    c.channel.master_seed = c.master_seed;
    c.channel.workers = c.workers;
    c.rates.search.workers = c.workers;
    c.montecarlo.search.workers = 1;
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

} // namespace satent::harness
