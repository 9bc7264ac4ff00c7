// Acceptance criteria 1-10. One PASS/FAIL line per criterion; tolerances are
// fixed below. Criteria listed in kKnownDeviations still print FAIL when they
// fail but do not change the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satent/channel.hpp"
#include "satent/fock.hpp"
#include "satent/gaussian_cv.hpp"
#include "satent/harness/commands.hpp"
#include "satent/harness/config.hpp"
#include "satent/optimize.hpp"
#include "satent/propagation.hpp"
#include "satent/protocols.hpp"
#include "satent/turbulence.hpp"

using namespace satent;

namespace {

const std::set<int> kKnownDeviations = {8, 9};

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Options {
    std::size_t runs = 200;
    std::size_t angle_runs = 50;
    std::size_t trials = 50;
    std::size_t grid_points = 1024;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<int> only;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log10(x[i]);
        my += std::log10(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log10(x[i]) - mx;
        sxy += dx * (std::log10(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

PureState random_state(std::size_t modes, int cutoff, int max_total, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const FockSpace space{modes, cutoff};
    PureState s(space);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const auto occ = space.occupation(i);
        int total = 0;
        for (int n : occ) total += n;
        if (total <= max_total) s.add(occ, {nd(rng), nd(rng)});
    }
    s.canonicalize();
    return s.normalized();
}

Outcome criterion1() {
    const double eta = 1e-2;
    const auto r = optimize_protocol({Configuration::Relay, ResourceKind::DV, false}, eta, eta);
    const double coeff = r.rate / (eta * eta);
    const double xi = r.parameters.at("xi");
    const bool pass = std::abs(coeff / 0.278 - 1.0) <= 0.01 && std::abs(xi - 0.217) <= 0.005;
    return {pass, fmt("R/eta^2 = %.5f (0.278 +/- 1%%), argmax xi = %.4f (0.217 +/- 0.005)", coeff, xi)};
}

Outcome criterion2() {
    const double eta = 1e-2;
    const double nu = nu_from_squeezing_db(8.0);
    const double coeff = cv_relay_rate(nu, eta) / (eta * eta);
    const double series = 0.5 * (nu - 1.0) * std::log((nu + 1.0) / (nu - 1.0));
    const bool pass = std::abs(coeff / 0.714 - 1.0) <= 0.01 && std::abs(coeff / series - 1.0) <= 0.01;
    return {pass, fmt("R/eta^2 = %.5f (0.714 +/- 1%%), series oracle %.5f", coeff, series)};
}

Outcome criterion3() {
    std::size_t checked = 0;
    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5}) {
        for (int i = 0; i <= 20; ++i) {
            const double xi = i / 20.0;
            worst = std::max(worst, dist_unamp_dv(xi, eta, eta).rate);
            ++checked;
        }
        for (double db = 0.5; db <= 20.0; db += 0.5) {
            worst = std::max(worst, dist_unamp_cv(nu_from_squeezing_db(db), eta, eta).rate);
            ++checked;
        }
    }
    return {worst == 0.0, fmt("max R over %zu (eta, xi|nu) points = %.3g (must be 0)", checked, worst)};
}

Outcome criterion4() {
    const std::vector<double> etas = {1e-3, std::sqrt(1e-5), 1e-2};
    std::string detail;
    bool pass = true;
    for (auto config : {Configuration::Relay, Configuration::Distribution})
        for (auto kind : {ResourceKind::DV, ResourceKind::CV}) {
            const ProtocolSpec spec{config, kind, true, 5};
            SearchOptions opts;
            opts.grid_points = config == Configuration::Relay ? 21 : 11;
            std::vector<double> rates;
            for (double eta : etas) rates.push_back(optimize_protocol(spec, eta, eta, opts).rate);
            const double s = slope(etas, rates);
            const double expected = config == Configuration::Relay ? 1.0 : 2.0;
            pass = pass && std::abs(s - expected) <= 0.1;
            detail += fmt("%s%s %.4f", detail.empty() ? "" : ", ", protocol_label(spec).c_str(), s);
        }
    return {pass, "slopes " + detail + " (1.0 relay / 2.0 distribution, +/- 0.1)"};
}

Outcome criterion5() {
    const double chi = std::tanh(5.5 * std::log(10.0) / 20.0);
    const double f = tmsv_truncation_fidelity(chi, 5);
    return {f >= 0.999, fmt("fidelity at N = 5, 5.5 dB = %.6f (>= 0.999)", f)};
}

Outcome criterion6() {
    const auto plan = plan_screens(TurbulenceProfile{}, BeamParams{}, LinkGeometry{}, 0.2);
    const auto& last = plan.segments.back();
    const bool pass = plan.screen_count() == 19 && last.lower >= 15e3 && last.lower <= 25e3
                   && std::abs(last.upper - 500e3) < 1.0;
    return {pass, fmt("%zu screens (19), final segment %.2f km -> %.1f km (~20 km -> 500 km)",
                      plan.screen_count(), last.lower / 1e3, last.upper / 1e3)};
}

Outcome criterion7(const Options& o) {
    TurbulenceProfile p;
    BeamParams b;
    PropagationConfig cfg;
    cfg.grid_points = o.grid_points;
    const double analytic = gaussian_spot_size(b, 500e3);
    std::string detail;
    bool pass = true;
    for (auto dir : {LinkDirection::Downlink, LinkDirection::Uplink}) {
        LinkGeometry geo{500e3, dir};
        const auto plan = plan_screens(p, b, geo, 0.2);
        const auto layout = make_layout(p, b, geo, plan, cfg);
        const auto rx = propagate_vacuum(gaussian_beam(layout.source_grid, b.waist), layout, cfg);
        const double err = rx.second_moment_radius() / analytic - 1.0;
        pass = pass && std::abs(err) <= 0.01;
        detail += fmt("%s%s w = %.5f m (%+.3f%%)", detail.empty() ? "" : ", ", std::string(to_string(dir)).c_str(),
                      rx.second_moment_radius(), 100.0 * err);
    }
    return {pass, detail + fmt(", analytic %.5f m, tolerance 1%%", analytic)};
}

double variance(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

std::vector<double> losses(const EmpiricalChannel& ch) {
    std::vector<double> out;
    for (double eta : ch.samples) out.push_back(loss_db(eta));
    return out;
}

struct Ensembles {
    harness::RunConfig config;
    std::map<std::pair<std::size_t, LinkDirection>, EmpiricalChannel> channels;

    const EmpiricalChannel& get(const Options& o, std::size_t angle, LinkDirection dir) {
        const auto key = std::make_pair(angle, dir);
        auto it = channels.find(key);
        if (it != channels.end()) return it->second;
        auto c = harness::ensemble_config(config, angle, dir);
        c.runs = angle == 0 ? o.runs : o.angle_runs;
        const auto t0 = std::chrono::steady_clock::now();
        auto ch = sample_channel(c);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "  ensemble %s z=%g deg: %zu runs in %.0f s\n", std::string(to_string(dir)).c_str(),
                     config.atmos.zenith_angles_deg[angle], c.runs, secs);
        return channels.emplace(key, std::move(ch)).first->second;
    }
};

Ensembles make_ensembles(const Options& o) {
    Ensembles e;
    e.config.master_seed = o.seed;
    e.config.workers = o.workers;
    e.config.channel.propagation.grid_points = o.grid_points;
    e.config.atmos.zenith_angles_deg = {0.0, 10.0, 20.0, 30.0};
    return e;
}

Outcome criterion8(const Options& o, Ensembles& ens) {
    const auto& down = ens.get(o, 0, LinkDirection::Downlink);
    const auto& up = ens.get(o, 0, LinkDirection::Uplink);
    const auto& d = down.summary;
    const auto& u = up.summary;
    const double dvar = variance(losses(down));
    const double uvar = variance(losses(up));
    const double urange = u.max_loss_db - u.min_loss_db;
    const bool down_ok = std::abs(d.mean_loss_db - 20.0) <= 3.0 && d.skewness_loss_db > 0.0;
    const bool up_ok = std::abs(u.mean_loss_db - 50.0) <= 5.0 && urange >= 25.0;
    const bool pass = down_ok && up_ok && uvar > dvar;
    return {pass, fmt("n = %zu: downlink mean %.2f dB (20 +/- 3), skew %+.3f (> 0); uplink mean %.2f dB (50 +/- 5), "
                      "range %.2f dB (>= 25); dB variance up %.3f vs down %.3f",
                      d.count, d.mean_loss_db, d.skewness_loss_db, u.mean_loss_db, urange, uvar, dvar)};
}

Outcome criterion9(const Options& o, Ensembles& ens) {
    harness::MonteCarloOptions mc;
    mc.trials = o.trials;
    mc.resources = {ResourceKind::DV, ResourceKind::CV};
    mc.amplified = true;
    std::string detail;
    bool pass = true;
    for (std::size_t a = 0; a < ens.config.atmos.zenith_angles_deg.size(); ++a) {
        const double zenith = ens.config.atmos.zenith_angles_deg[a];
        const auto& up = ens.get(o, a, LinkDirection::Uplink);
        const auto& down = ens.get(o, a, LinkDirection::Downlink);
        const auto t0 = std::chrono::steady_clock::now();
        const auto samples = harness::montecarlo_trials(up, down, mc, zenith, a, o.seed, o.workers);
        std::fprintf(stderr, "  monte carlo z=%g deg: %zu samples in %.0f s\n", zenith, samples.size(),
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        std::map<std::pair<Configuration, ResourceKind>, harness::RateStatistics> st;
        for (const auto& s : harness::rate_statistics(samples)) st[{s.configuration, s.resource}] = s;
        const auto& rdv = st.at({Configuration::Relay, ResourceKind::DV});
        const auto& rcv = st.at({Configuration::Relay, ResourceKind::CV});
        const auto& ddv = st.at({Configuration::Distribution, ResourceKind::DV});
        const auto& dcv = st.at({Configuration::Distribution, ResourceKind::CV});
        bool ok = rdv.spread_db - ddv.spread_db >= 10.0 && rcv.spread_db - dcv.spread_db >= 10.0
               && ddv.median > dcv.median;
        if (a == 0)
            for (const auto* s : {&rdv, &rcv, &ddv, &dcv}) ok = ok && s->median >= 1e-6 && s->median <= 1e-2;
        pass = pass && ok;
        detail += fmt("%sz=%g: spread relay %.1f/%.1f dB vs dist %.1f/%.1f dB (DV/CV), median dist DV %.2e vs CV "
                      "%.2e, relay %.2e/%.2e",
                      detail.empty() ? "" : "; ", zenith, rdv.spread_db, rcv.spread_db, ddv.spread_db, dcv.spread_db,
                      ddv.median, dcv.median, rdv.median, rcv.median);
    }
    return {pass, fmt("%zu trials/angle: ", o.trials) + detail +
                      " (relay spread - dist spread >= 10 dB; dist DV median > CV; medians at z=0 in [1e-6, 1e-2])"};
}

Outcome criterion10(const Options& o, Ensembles& ens) {
    std::vector<std::string> failures;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };

    // POVM completeness.
    double povm_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto psi = random_state(3, 3, 4, seed);
        povm_err = std::max(povm_err, std::abs(herald(psi, {1, 2}, photon_number_povm(2, 3), {0}).probability - 1.0));
        const auto rho = pure_loss(psi, 2, 0.4);
        povm_err = std::max(povm_err,
                            std::abs(povm_project(rho, {0}, photon_number_povm(1, 3), {1, 2}).probability - 1.0));
    }
    require(povm_err <= 1e-10, fmt("POVM completeness %.2e", povm_err));

    // Beamsplitter block unitarity.
    double bs_err = 0.0;
    for (int n = 0; n <= 20; ++n)
        for (double tau : {0.0, 0.1, 0.5, 0.77, 1.0}) {
            const Eigen::MatrixXd u = beamsplitter_block(n, tau);
            bs_err = std::max(bs_err, (u.transpose() * u - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff());
        }
    require(bs_err <= 1e-12, fmt("beamsplitter unitarity %.2e", bs_err));

    // Trace preservation.
    double tr_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto psi = random_state(3, 4, 4, seed + 10);
        const auto rho = DensityOp::from_pure(psi);
        for (double eta : {0.0, 0.3, 0.9, 1.0}) {
            tr_err = std::max(tr_err, std::abs(pure_loss(psi, 1, eta).trace() - 1.0));
            tr_err = std::max(tr_err, std::abs(pure_loss(rho, 0, eta).trace() - 1.0));
        }
        tr_err = std::max(tr_err, std::abs(phase_rotation(rho, 2, 0.9).trace() - 1.0));
        tr_err = std::max(tr_err, std::abs(partial_trace(rho, {0, 2}).trace() - 1.0));
        tr_err = std::max(tr_err, std::abs(DensityOp::from_pure(beamsplitter(psi, 0, 2, 0.3)).trace() - 1.0));
    }
    require(tr_err <= 1e-10, fmt("trace preservation %.2e", tr_err));

    // Entropy invariance under local unitaries.
    double ent_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto psi = random_state(3, 3, 3, seed + 20);
        const auto rho = pure_loss(psi, 2, 0.6);
        const auto before = coherent_info(rho, {0, 1}, {2});
        const auto after = coherent_info(phase_rotation(phase_rotation(rho, 0, 0.7), 2, -1.3), {0, 1}, {2});
        ent_err = std::max({ent_err, std::abs(after.forward - before.forward), std::abs(after.reverse - before.reverse)});
        const auto s1 = entropy(partial_trace(DensityOp::from_pure(psi), {0, 1}));
        const auto s2 = entropy(partial_trace(DensityOp::from_pure(beamsplitter(psi, 0, 1, 0.35)), {0, 1}));
        ent_err = std::max(ent_err, std::abs(s1 - s2));
    }
    require(ent_err <= 1e-9, fmt("entropy invariance %.2e", ent_err));

    // Fock versus Gaussian reverse coherent information.
    double cross = 0.0;
    for (double chi : {0.05, 0.15, 0.25, 0.35})
        for (double eta : {0.2, 0.5, 0.8, 0.95}) {
            const Resource res{ResourceKind::CV, chi, 5};
            const double nu = nu_from_chi(chi);
            cross = std::max(cross, std::abs(relay_unamp_fock(res, eta, eta).i_rev - relay_unamp_cv(nu, eta, eta).i_rev));
            cross = std::max(cross, std::abs(dist_unamp_fock(res, eta, eta).i_rev - dist_unamp_cv(nu, eta, eta).i_rev));
        }
    require(cross <= 1e-3, fmt("Fock vs Gaussian %.2e nats", cross));

    // Monte Carlo worker invariance.
    harness::MonteCarloOptions mc;
    mc.trials = 4;
    mc.resources = {ResourceKind::DV};
    mc.search.grid_points = 5;
    const auto& up = ens.get(o, 0, LinkDirection::Uplink);
    const auto& down = ens.get(o, 0, LinkDirection::Downlink);
    const auto base = harness::montecarlo_trials(up, down, mc, 0.0, 0, o.seed, 1);
    bool same = true;
    for (unsigned w : {2u, 4u}) {
        const auto other = harness::montecarlo_trials(up, down, mc, 0.0, 0, o.seed, w);
        same = same && other.size() == base.size();
        for (std::size_t i = 0; same && i < base.size(); ++i)
            same = base[i].index_a == other[i].index_a && base[i].index_b == other[i].index_b
                && base[i].result.rate == other[i].result.rate;
    }
    require(same, "Monte Carlo differs across worker counts");

    const std::string summary =
        fmt("POVM %.1e, BS unitarity %.1e, trace %.1e, entropy invariance %.1e, Fock-Gaussian %.1e nats, MC worker "
            "invariance %s",
            povm_err, bs_err, tr_err, ent_err, cross, same ? "yes" : "no");
    if (failures.empty()) return {true, summary};
    std::string f;
    for (const auto& x : failures) f += (f.empty() ? "" : "; ") + x;
    return {false, summary + " | failed: " + f};
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"acceptance criteria"};
    app.add_option("--runs", o.runs, "atmospheres per direction at zenith 0");
    app.add_option("--angle-runs", o.angle_runs, "atmospheres per direction at the other zenith angles");
    app.add_option("--trials", o.trials, "Monte Carlo trials per angle");
    app.add_option("--grid", o.grid_points, "propagation grid points per side");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--workers", o.workers, "worker threads, 0 = hardware");
    app.add_option("--only", o.only, "criteria to run");
    CLI11_PARSE(app, argc, argv);

    Ensembles ens = make_ensembles(o);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"DV relay asymptote", criterion1},
        {"CV relay asymptote", criterion2},
        {"zero-rate region", criterion3},
        {"amplified scaling laws", criterion4},
        {"truncation fidelity", criterion5},
        {"screen plan", criterion6},
        {"vacuum diffraction oracle", [&] { return criterion7(o); }},
        {"channel statistics", [&] { return criterion8(o, ens); }},
        {"Monte Carlo orderings", [&] { return criterion9(o, ens); }},
        {"property suites", [&] { return criterion10(o, ens); }},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), id) == o.only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool known = kKnownDeviations.contains(id);
        std::printf("[%s] %2d %s: %s [%.1f s]%s\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    out.detail.c_str(), secs, !out.pass && known ? " (known deviation)" : "");
        std::fflush(stdout);
        if (!out.pass && !known) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
