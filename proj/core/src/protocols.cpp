#include "satent/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "satent/error.hpp"
#include "satent/fock.hpp"
#include "satent/gaussian_cv.hpp"

namespace satent {

std::string_view to_string(Configuration c) noexcept {
    return c == Configuration::Relay ? "relay" : "distribution";
}

std::string_view to_string(ResourceKind r) noexcept { return r == ResourceKind::DV ? "dv" : "cv"; }

Configuration parse_configuration(std::string_view s) {
    if (s == "relay") return Configuration::Relay;
    if (s == "distribution" || s == "dist") return Configuration::Distribution;
    throw DomainError("unknown configuration '" + std::string(s) + "'");
}

ResourceKind parse_resource(std::string_view s) {
    if (s == "dv") return ResourceKind::DV;
    if (s == "cv") return ResourceKind::CV;
    throw DomainError("unknown resource '" + std::string(s) + "'");
}

void Resource::validate() const {
    if (kind == ResourceKind::DV) {
        if (!(parameter >= 0.0 && parameter <= 1.0)) throw DomainError("xi must lie in [0, 1]");
    } else {
        if (!(parameter >= 0.0 && parameter < 1.0)) throw DomainError("chi must lie in [0, 1)");
        if (n_max < 1 || n_max > 20) throw DomainError("CV truncation must lie in [1, 20]");
    }
}

double protocol_rate(double p, double i_fwd, double i_rev) {
    const double best = std::max({i_fwd, i_rev, 0.0});
    return best < kRateNoiseFloor ? 0.0 : p * best;
}

namespace {

void check_eta(double eta_a, double eta_b) {
    if (!(eta_a >= 0.0 && eta_a <= 1.0) || !(eta_b >= 0.0 && eta_b <= 1.0))
        throw DomainError("channel transmissivities must lie in [0, 1]");
}

void check_gain(double g) {
    if (!(g >= 1.0) || !std::isfinite(g)) throw DomainError("amplifier gain must be finite and at least 1");
}

const char* parameter_name(const Resource& r) { return r.kind == ResourceKind::DV ? "xi" : "chi"; }

PureState resource_state(const Resource& r, int cutoff) {
    return r.kind == ResourceKind::DV ? dv_bell(r.parameter, cutoff)
                                      : tmsv_truncated(r.parameter, r.n_max, cutoff);
}

int resource_photons(const Resource& r) { return r.kind == ResourceKind::DV ? 1 : r.n_max; }

PureState vacuum(std::size_t modes, int cutoff) {
    PureState v(FockSpace{modes, cutoff});
    v.add(Occupation(modes, 0), 1.0);
    return v;
}

// Drops every basis vector whose photon count on (m1, m2) differs from
// `total`. Later operations never touch these modes, so this only prunes
// branches the herald would discard.
PureState keep_total(const PureState& s, std::size_t m1, std::size_t m2, int total) {
    PureState out(s.space());
    for (const auto& [key, amp] : s.terms())
        if (PureState::photons(key, m1) + PureState::photons(key, m2) == total) out.add_key(key, amp);
    return out;
}

RateResult finish(const HeraldResult& h, double p, std::map<std::string, double> params) {
    const auto ci = coherent_info(h.state, {0}, {1});
    RateResult r;
    r.probability = std::clamp(p, 0.0, 1.0);
    r.i_fwd = ci.forward;
    r.i_rev = ci.reverse;
    r.rate = protocol_rate(r.probability, r.i_fwd, r.i_rev);
    r.parameters = std::move(params);
    return r;
}

RateResult failed(std::map<std::string, double> params) {
    RateResult r;
    r.parameters = std::move(params);
    return r;
}

void warn_chi(const Resource& res, RateResult& r) {
    if (res.kind == ResourceKind::CV && res.parameter > 0.45) {
        std::ostringstream os;
        os << "chi = " << res.parameter << " exceeds 0.45; truncation at N = " << res.n_max
           << " may be inaccurate";
        r.warnings.push_back(os.str());
    }
}

} // namespace

RateResult relay_unamp_fock(const Resource& resource, double eta_a, double eta_b) {
    resource.validate();
    check_eta(eta_a, eta_b);
    const int cutoff = resource_photons(resource);
    // modes: A1 A2 | E_A E_B
    PureState s = tensor(resource_state(resource, cutoff), vacuum(2, cutoff));
    s = beamsplitter(s, 1, 2, eta_a);
    s = beamsplitter(s, 1, 3, eta_b);
    const auto h = herald(s, {}, {HeraldBranch{}}, {0, 1});
    RateResult r = finish(h, 1.0, {{parameter_name(resource), resource.parameter}});
    warn_chi(resource, r);
    return r;
}

RateResult dist_unamp_fock(const Resource& resource, double eta_a, double eta_b) {
    resource.validate();
    check_eta(eta_a, eta_b);
    const int cutoff = resource_photons(resource);
    // modes: A B | E_A E_B
    PureState s = tensor(resource_state(resource, cutoff), vacuum(2, cutoff));
    s = beamsplitter(s, 0, 2, eta_a);
    s = beamsplitter(s, 1, 3, eta_b);
    const auto h = herald(s, {}, {HeraldBranch{}}, {0, 1});
    RateResult r = finish(h, 1.0, {{parameter_name(resource), resource.parameter}});
    warn_chi(resource, r);
    return r;
}

RateResult relay_unamp_dv(double xi, double eta_a, double eta_b) {
    return relay_unamp_fock(Resource{ResourceKind::DV, xi, 1}, eta_a, eta_b);
}

RateResult dist_unamp_dv(double xi, double eta_a, double eta_b) {
    return dist_unamp_fock(Resource{ResourceKind::DV, xi, 1}, eta_a, eta_b);
}

RateResult relay_unamp_cv(double nu, double eta_a, double eta_b) {
    check_eta(eta_a, eta_b);
    CovMatrix v = tmsv_cov(nu);
    v = apply_loss(v, 1, eta_a);
    v = apply_loss(v, 1, eta_b);
    const auto ci = gaussian_coherent_info(v);
    RateResult r;
    r.probability = 1.0;
    r.i_fwd = ci.forward;
    r.i_rev = ci.reverse;
    r.rate = protocol_rate(1.0, ci.forward, ci.reverse);
    r.parameters = {{"nu", nu}};
    return r;
}

RateResult dist_unamp_cv(double nu, double eta_a, double eta_b) {
    check_eta(eta_a, eta_b);
    CovMatrix v = tmsv_cov(nu);
    v = apply_loss(v, 0, eta_a);
    v = apply_loss(v, 1, eta_b);
    const auto ci = gaussian_coherent_info(v);
    RateResult r;
    r.probability = 1.0;
    r.i_fwd = ci.forward;
    r.i_rev = ci.reverse;
    r.rate = protocol_rate(1.0, ci.forward, ci.reverse);
    r.parameters = {{"nu", nu}};
    return r;
}

RateResult relay_amp(const Resource& resource, double g, double eta_a, double eta_b) {
    resource.validate();
    check_eta(eta_a, eta_b);
    check_gain(g);
    std::map<std::string, double> params{{parameter_name(resource), resource.parameter}, {"g", g}};
    const int cutoff = resource_photons(resource) + 1;
    // modes: A1 A2 | B1 B2 | E_A E_B. A2 and B2 travel to the relay.
    PureState s = tensor(tensor(resource_state(resource, cutoff), scissor_ancilla(gain_to_tau(g), cutoff)),
                         vacuum(2, cutoff));
    s = beamsplitter(s, 1, 4, eta_a);
    s = beamsplitter(s, 3, 5, eta_b);
    s = beamsplitter(s, 1, 3, 0.5);
    s = keep_total(s, 1, 3, 1);
    RateResult r;
    try {
        const auto h = herald(s, {1, 3}, scissor_success(2), {0, 2});
        r = finish(h, h.probability, std::move(params));
    } catch (const ImprobableBranchError&) {
        r = failed(std::move(params));
    }
    warn_chi(resource, r);
    return r;
}

RateResult dist_amp(const Resource& resource, double g_a, double g_b, double eta_a, double eta_b) {
    resource.validate();
    check_eta(eta_a, eta_b);
    check_gain(g_a);
    check_gain(g_b);
    std::map<std::string, double> params{{parameter_name(resource), resource.parameter}, {"g_a", g_a}, {"g_b", g_b}};
    const int cutoff = resource_photons(resource) + 1;
    // modes: A1 B1 | A3 A2 | B3 B2 | E_A E_B. A3 and B3 survive.
    PureState s = tensor(resource_state(resource, cutoff), scissor_ancilla(gain_to_tau(g_a), cutoff));
    s = tensor(s, scissor_ancilla(gain_to_tau(g_b), cutoff));
    s = tensor(s, vacuum(2, cutoff));
    s = beamsplitter(s, 0, 6, eta_a);
    s = beamsplitter(s, 1, 7, eta_b);
    s = beamsplitter(s, 0, 3, 0.5);
    s = keep_total(s, 0, 3, 1);
    s = beamsplitter(s, 1, 5, 0.5);
    s = keep_total(s, 1, 5, 1);

    std::vector<HeraldBranch> branches;
    for (const auto& a : scissor_success(2))
        for (const auto& b : scissor_success(4)) {
            HeraldBranch br;
            br.pattern = {a.pattern[0], a.pattern[1], b.pattern[0], b.pattern[1]};
            br.parity_modes = a.parity_modes;
            br.parity_modes.insert(br.parity_modes.end(), b.parity_modes.begin(), b.parity_modes.end());
            branches.push_back(std::move(br));
        }
    RateResult r;
    try {
        const auto h = herald(s, {0, 3, 1, 5}, branches, {2, 4});
        r = finish(h, h.probability, std::move(params));
    } catch (const ImprobableBranchError&) {
        r = failed(std::move(params));
    }
    warn_chi(resource, r);
    return r;
}

} // namespace satent
