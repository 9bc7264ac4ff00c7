#include "satent/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "satent/error.hpp"
#include "satent/gaussian_cv.hpp"
#include "satent/parallel.hpp"
#include "satent/rng.hpp"

namespace satent {

void SearchSpec::validate() const {
    if (bounds.empty() || bounds.size() > 3) throw DomainError("search needs between 1 and 3 parameters");
    for (const auto& b : bounds) {
        if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower <= b.upper))
            throw DomainError("bounds of '" + b.name + "' must be finite and ordered");
        if (b.log_scale && !(b.lower > 0.0)) throw DomainError("log-scaled '" + b.name + "' needs a positive lower bound");
    }
    if (grid_points < 2) throw DomainError("grid needs at least 2 points per dimension");
    if (!(rtol > 0.0)) throw DomainError("tolerance must be positive");
    if (max_evaluations < 1) throw DomainError("evaluation budget must be positive");
}

namespace {

// Unit-cube coordinate u in [0, 1] to the parameter value.
double from_unit(const ParameterBound& b, double u) {
    u = std::clamp(u, 0.0, 1.0);
    if (b.log_scale) return std::exp(std::log(b.lower) + u * (std::log(b.upper) - std::log(b.lower)));
    return b.lower + u * (b.upper - b.lower);
}

std::string describe(const std::vector<ParameterBound>& bounds, const std::vector<double>& x) {
    std::ostringstream os;
    os.precision(10);
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << bounds[i].name << "=" << x[i];
    return os.str();
}

class Evaluator {
public:
    Evaluator(const Objective& f, const SearchSpec& spec) : f_(f), spec_(spec) {}

    std::vector<double> point(const std::vector<double>& u) const {
        std::vector<double> x(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) x[i] = from_unit(spec_.bounds[i], u[i]);
        return x;
    }

    double operator()(const std::vector<double>& u) const {
        const auto x = point(u);
        double v;
        try {
            v = f_(x);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (at " + describe(spec_.bounds, x) + ")");
        } catch (const std::exception& e) {
            throw NumericalError(std::string(e.what()) + " (at " + describe(spec_.bounds, x) + ")");
        }
        if (!std::isfinite(v)) throw NumericalError("objective is not finite at " + describe(spec_.bounds, x));
        return v;
    }

private:
    const Objective& f_;
    const SearchSpec& spec_;
};

} // namespace

OptimumResult maximize(const Objective& f, const SearchSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t d = spec.bounds.size();
    const Evaluator eval(f, spec);
    const auto gp = static_cast<std::size_t>(spec.grid_points);

    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= gp;
    auto grid_unit = [&](std::size_t flat) {
        std::vector<double> u(d);
        for (std::size_t i = d; i-- > 0;) {
            u[i] = static_cast<double>(flat % gp) / static_cast<double>(gp - 1);
            flat /= gp;
        }
        return u;
    };
    std::vector<double> values(total);
    parallel_for(total, spec.workers, [&](std::size_t i) { values[i] = eval(grid_unit(i)); });
    const std::size_t best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());

    OptimumResult out;
    out.best_grid_value = values[best];
    out.evaluations = total;

    // Nelder-Mead on the unit cube, minimizing -f. Points are clamped to the box.
    RngStream rng(StreamKey{seed, 0, 0});
    const double step = 1.0 / static_cast<double>(gp - 1);
    std::vector<std::vector<double>> simplex{grid_unit(best)};
    for (std::size_t i = 0; i < d; ++i) {
        auto v = simplex[0];
        double s = (rng.uniform() < 0.5 ? -step : step);
        if (v[i] + s > 1.0 || v[i] + s < 0.0) s = -s;
        v[i] += s;
        simplex.push_back(v);
    }
    std::vector<double> fv(d + 1);
    fv[0] = -values[best];
    for (std::size_t i = 1; i <= d; ++i) fv[i] = -eval(simplex[i]);
    out.evaluations += d;

    auto clamp_unit = [](std::vector<double> v) {
        for (double& c : v) c = std::clamp(c, 0.0, 1.0);
        return v;
    };
    auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
        std::vector<double> r(d);
        for (std::size_t i = 0; i < d; ++i) r[i] = a[i] + t * (b[i] - a[i]);
        return clamp_unit(r);
    };

    std::vector<std::size_t> order(d + 1);
    while (out.evaluations < static_cast<std::size_t>(spec.max_evaluations)) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t lo = order.front(), hi = order.back(), nh = order[d - 1];

        const double spread = std::abs(fv[hi] - fv[lo]);
        double diameter = 0.0;
        for (std::size_t k = 0; k <= d; ++k)
            for (std::size_t i = 0; i < d; ++i) diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[lo][i]));
        if (spread <= spec.rtol * std::abs(fv[lo]) || spread == 0.0 || diameter < 1e-9) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t k = 0; k <= d; ++k)
            if (k != hi)
                for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / static_cast<double>(d);

        const auto xr = combine(centroid, simplex[hi], -1.0);
        const double fr = -eval(xr);
        ++out.evaluations;
        if (fr < fv[lo]) {
            const auto xe = combine(centroid, simplex[hi], -2.0);
            const double fe = -eval(xe);
            ++out.evaluations;
            if (fe < fr) { simplex[hi] = xe; fv[hi] = fe; }
            else { simplex[hi] = xr; fv[hi] = fr; }
        } else if (fr < fv[nh]) {
            simplex[hi] = xr;
            fv[hi] = fr;
        } else {
            const bool outside = fr < fv[hi];
            const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, simplex[hi], 0.5);
            const double fc = -eval(xc);
            ++out.evaluations;
            if (fc < std::min(fr, fv[hi])) {
                simplex[hi] = xc;
                fv[hi] = fc;
            } else {
                for (std::size_t k = 0; k <= d; ++k) {
                    if (k == lo) continue;
                    simplex[k] = combine(simplex[lo], simplex[k], 0.5);
                    fv[k] = -eval(simplex[k]);
                    ++out.evaluations;
                }
            }
        }
    }
    const std::size_t winner = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    out.x = eval.point(simplex[winner]);
    out.value = -fv[winner];
    return out;
}

std::vector<ParameterBound> protocol_bounds(const ProtocolSpec& spec, const SearchOptions& options) {
    std::vector<ParameterBound> b;
    if (spec.resource == ResourceKind::DV) b.push_back({"xi", 0.0, 1.0, false});
    else if (spec.amplified) b.push_back({"chi", 0.0, options.chi_max, false});
    else return b;
    if (spec.amplified) {
        if (spec.configuration == Configuration::Relay) {
            b.push_back({"g", 1.0, options.g_max, true});
        } else {
            b.push_back({"g_a", 1.0, options.g_max, true});
            b.push_back({"g_b", 1.0, options.g_max, true});
        }
    }
    return b;
}

RateResult evaluate_protocol(const ProtocolSpec& spec, const std::vector<double>& x, double eta_a, double eta_b) {
    const bool relay = spec.configuration == Configuration::Relay;
    if (!spec.amplified) {
        if (spec.resource == ResourceKind::DV) {
            if (x.size() != 1) throw DomainError("unamplified DV protocols take one parameter");
            return relay ? relay_unamp_dv(x[0], eta_a, eta_b) : dist_unamp_dv(x[0], eta_a, eta_b);
        }
        const double nu = nu_from_squeezing_db(spec.cv_squeezing_db);
        return relay ? relay_unamp_cv(nu, eta_a, eta_b) : dist_unamp_cv(nu, eta_a, eta_b);
    }
    const Resource res{spec.resource, x.at(0), spec.n_max};
    if (relay) {
        if (x.size() != 2) throw DomainError("amplified relay takes two parameters");
        return relay_amp(res, x[1], eta_a, eta_b);
    }
    if (x.size() != 3) throw DomainError("amplified distribution takes three parameters");
    return dist_amp(res, x[1], x[2], eta_a, eta_b);
}

RateResult optimize_protocol(const ProtocolSpec& spec, double eta_a, double eta_b,
                             const SearchOptions& options, std::uint64_t seed) {
    SearchSpec search;
    search.bounds = protocol_bounds(spec, options);
    if (search.bounds.empty()) return evaluate_protocol(spec, {}, eta_a, eta_b);
    search.grid_points = options.grid_points;
    search.rtol = options.rtol;
    search.workers = options.workers;
    const auto opt = maximize(
        [&](const std::vector<double>& x) { return evaluate_protocol(spec, x, eta_a, eta_b).rate; }, search, seed);
    RateResult r = evaluate_protocol(spec, opt.x, eta_a, eta_b);
    if (spec.resource == ResourceKind::CV && spec.amplified && opt.x[0] > 0.45 && r.warnings.empty())
        r.warnings.push_back("optimal chi exceeds 0.45; truncated resource may be inaccurate");
    return r;
}

std::string protocol_label(const ProtocolSpec& spec) {
    std::string s{to_string(spec.configuration)};
    s += "_";
    s += spec.amplified ? "amp" : "unamp";
    s += "_";
    s += to_string(spec.resource);
    return s;
}

} // namespace satent
