#include "satent/turbulence.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "quadrature.hpp"
#include "satent/error.hpp"

namespace satent {

std::string_view to_string(LinkDirection d) noexcept {
    return d == LinkDirection::Uplink ? "uplink" : "downlink";
}

LinkDirection parse_direction(std::string_view s) {
    if (s == "uplink") return LinkDirection::Uplink;
    if (s == "downlink") return LinkDirection::Downlink;
    throw DomainError("unknown link direction '" + std::string(s) + "'");
}

void TurbulenceProfile::validate() const {
    if (!(wind_speed > 0.0)) throw DomainError("wind pseudospeed must be positive");
    if (!(surface_cn2 >= 0.0)) throw DomainError("surface Cn2 must be nonnegative");
    if (!(zenith_angle >= 0.0 && zenith_angle < 1.0))
        throw DomainError("zenith angle must lie in [0, 1) rad");
    if (!(cutover_altitude > ground_altitude))
        throw DomainError("cutover altitude must exceed the ground altitude");
}

double TurbulenceProfile::sec_zenith() const { return 1.0 / std::cos(zenith_angle); }

void BeamParams::validate() const {
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    if (!(waist > 0.0)) throw DomainError("beam waist must be positive");
}

void LinkGeometry::validate() const {
    if (!(path_length > 0.0)) throw DomainError("path length must be positive");
}

GaussianBeamDerived gaussian_beam_at(const BeamParams& beam, double distance) {
    beam.validate();
    if (distance < 0.0) throw DomainError("propagation distance must be nonnegative");
    const double k = beam.wavenumber();
    const double rayleigh = std::numbers::pi * beam.waist * beam.waist / beam.wavelength;
    const double spot = gaussian_spot_size(beam, distance);
    if (distance == 0.0)
        return {std::numeric_limits<double>::infinity(), spot, 1.0, 0.0};
    const double ratio = rayleigh / distance;
    const double radius = distance * (1.0 + ratio * ratio);
    return {radius, spot, 1.0 + distance / radius, 2.0 * distance / (k * spot * spot)};
}

double gaussian_spot_size(const BeamParams& beam, double distance) {
    const double x = beam.wavelength * distance / (std::numbers::pi * beam.waist * beam.waist);
    return beam.waist * std::sqrt(1.0 + x * x);
}

double cn2(const TurbulenceProfile& profile, double h) {
    if (!(h >= 0.0)) throw DomainError("altitude must be nonnegative");
    const double v = profile.wind_speed / 27.0;
    const double h5 = 1e-5 * h;
    const double h5_10 = std::pow(h5, 10);
    return 0.00594 * v * v * h5_10 * std::exp(-h / 1000.0)
         + 2.7e-16 * std::exp(-h / 1500.0)
         + profile.surface_cn2 * std::exp(-h / 100.0);
}

double integrated_cn2(const TurbulenceProfile& profile, double lo, double hi) {
    return detail::integrate_altitude([&](double h) { return cn2(profile, h); }, lo, hi);
}

double rytov_increment(const TurbulenceProfile& profile, const BeamParams& beam,
                       double lo, double hi) {
    const double sec = profile.sec_zenith();
    const double k = beam.wavenumber();
    const double integral = detail::integrate_altitude(
        [&](double h) { return cn2(profile, h) * std::pow(h - lo, 11.0 / 6.0); }, lo, hi);
    // ds = sec dh and (s - s_lo) = sec (h - lo)
    return 1.23 * std::pow(k, 7.0 / 6.0) * std::pow(sec, 17.0 / 6.0) * integral;
}

namespace {

double fried_from_weight(double coefficient, double k, double weighted_integral) {
    if (!(weighted_integral > 0.0)) return kNoTurbulence;
    return std::pow(coefficient * k * k * weighted_integral, -3.0 / 5.0);
}

void check_segment(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("segment must satisfy lo < hi");
    if (lo < 0.0) throw DomainError("segment altitude must be nonnegative");
}

} // namespace

double fried_downlink(const TurbulenceProfile& profile, const BeamParams& beam,
                      double lo, double hi) {
    check_segment(lo, hi);
    const double integral = profile.sec_zenith() * integrated_cn2(profile, lo, hi);
    return fried_from_weight(0.423, beam.wavenumber(), integral);
}

double fried_uplink(const TurbulenceProfile& profile, const BeamParams& beam,
                    const LinkGeometry& geometry, double lo, double hi) {
    check_segment(lo, hi);
    const double sec = profile.sec_zenith();
    const double height = geometry.path_length - profile.ground_altitude;
    const auto derived = gaussian_beam_at(beam, height * sec);
    const double theta = derived.theta;

    const double mu1 = detail::integrate_altitude(
        [&](double h) {
            const double frac = (h - profile.ground_altitude) / height;
            return cn2(profile, h) * std::pow(theta * (1.0 - frac) + frac, 5.0 / 3.0);
        },
        lo, hi);
    const double mu2 = detail::integrate_altitude(
        [&](double h) {
            const double frac = (h - profile.ground_altitude) / height;
            return cn2(profile, h) * std::pow(std::max(0.0, 1.0 - frac), 5.0 / 3.0);
        },
        lo, hi);
    const double weight = sec * (mu1 + 0.622 * mu2 * std::pow(derived.lambda, 11.0 / 6.0));
    return fried_from_weight(0.424, beam.wavenumber(), weight);
}

double fried_parameter(const TurbulenceProfile& profile, const BeamParams& beam,
                       const LinkGeometry& geometry, double lo, double hi) {
    return geometry.direction == LinkDirection::Uplink
               ? fried_uplink(profile, beam, geometry, lo, hi)
               : fried_downlink(profile, beam, lo, hi);
}

double PsdParams::operator()(double kappa) const {
    if (!std::isfinite(r0)) return 0.0;
    const double k2 = kappa * kappa;
    return 0.49 * std::pow(r0, -5.0 / 3.0) * std::exp(-k2 / (kappa_m * kappa_m))
         / std::pow(k2 + kappa_0 * kappa_0, 11.0 / 6.0);
}

PsdParams psd_params(double r0, double screen_altitude) {
    if (!(r0 > 0.0)) throw DomainError("Fried parameter must be positive");
    if (!(screen_altitude >= 0.0)) throw DomainError("screen altitude must be nonnegative");
    const double d = screen_altitude - 8500.0;
    const double outer = 25e6 / (6.25e6 + d * d);
    const double inner = 0.005 * outer;
    return {r0, 5.92 / inner, 2.0 * std::numbers::pi / outer, outer, inner};
}

ScreenPlan plan_screens(const TurbulenceProfile& profile, const BeamParams& beam,
                        const LinkGeometry& geometry, double rytov_budget) {
    profile.validate();
    beam.validate();
    geometry.validate();
    if (!(rytov_budget > 0.0)) throw DomainError("Rytov budget must be positive");
    if (!(geometry.path_length > profile.ground_altitude))
        throw DomainError("satellite must sit above the ground station");

    constexpr double kMinWidth = 1e-3;      // [m]
    constexpr std::size_t kMaxSegments = 100000;
    const double top = geometry.path_length;
    const double cutover = std::min(profile.cutover_altitude, top);

    ScreenPlan plan;
    plan.direction = geometry.direction;
    plan.sec_zenith = profile.sec_zenith();
    plan.boundaries.push_back(profile.ground_altitude);

    double lo = profile.ground_altitude;
    while (lo < cutover && rytov_increment(profile, beam, lo, cutover) > rytov_budget) {
        auto excess = [&](double x) { return rytov_increment(profile, beam, lo, x) - rytov_budget; };
        std::uintmax_t iters = 200;
        auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-7 * std::max(1.0, std::abs(a)); };
        const auto [a, b] = boost::math::tools::toms748_solve(
            excess, lo, cutover, -rytov_budget, excess(cutover), tol, iters);
        const double next = 0.5 * (a + b);
        if (next - lo < kMinWidth)
            throw DomainError("Rytov budget too small: segment width underflows quadrature resolution");
        plan.boundaries.push_back(next);
        lo = next;
        if (plan.boundaries.size() > kMaxSegments)
            throw DomainError("Rytov budget too small: too many segments");
    }
    plan.boundaries.push_back(top);

    const std::size_t n = plan.boundaries.size() - 1;
    plan.segments.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ScreenSegment seg{};
        seg.lower = plan.boundaries[i];
        seg.upper = plan.boundaries[i + 1];
        const bool last = (i + 1 == n);
        // The closing segment's turbulence is concentrated at its lower edge.
        seg.screen_altitude = last ? seg.lower : 0.5 * (seg.lower + seg.upper);
        seg.fried_r0 = seg.lower >= profile.cutover_altitude
                           ? kNoTurbulence
                           : fried_parameter(profile, beam, geometry, seg.lower, seg.upper);
        seg.rytov = rytov_increment(profile, beam, seg.lower, seg.upper);
        if (std::isfinite(seg.fried_r0)) {
            seg.psd = psd_params(seg.fried_r0, seg.screen_altitude);
        } else {
            seg.psd = psd_params(1.0, seg.screen_altitude);
            seg.psd.r0 = kNoTurbulence;
        }
        plan.segments.push_back(seg);
    }
    return plan;
}

} // namespace satent
