#pragma once

// Closed-form atmospheric models: Hufnagel-Valley 5/7 Cn^2 profile,
// equal-Rytov phase-screen placement, Fried coherence parameters for
// both link directions and the modified von Karman spectrum parameters.
//
// Altitudes are vertical heights in metres. For a zenith angle theta > 0
// every path element picks up the airmass factor sec(theta).

#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace satent {

enum class LinkDirection { Uplink, Downlink };

std::string_view to_string(LinkDirection d) noexcept;
LinkDirection parse_direction(std::string_view s);

struct TurbulenceProfile {
    double wind_speed = 27.0;          // high-altitude wind pseudospeed v [m/s]
    double surface_cn2 = 1.7e-14;      // surface value A [m^-2/3]
    double zenith_angle = 0.0;         // [rad], shallow angles only
    double ground_altitude = 0.0;      // [m]
    double cutover_altitude = 20000.0; // no significant turbulence above [m]

    void validate() const;
    double sec_zenith() const;
};

struct BeamParams {
    double wavelength = 1550e-9; // [m]
    double waist = 0.1;          // initial 1/e^2 intensity radius [m]

    void validate() const;
    double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
};

struct LinkGeometry {
    double path_length = 500e3; // zenith height of the satellite [m]
    LinkDirection direction = LinkDirection::Downlink;

    void validate() const;
};

// Gaussian-beam parameters at the output plane of a path of given length.
struct GaussianBeamDerived {
    double curvature_radius; // R(Z) [m]
    double spot_size;        // w(Z) [m]
    double theta;            // 1 + Z/R
    double lambda;           // 2Z / (k w(Z)^2)
};

GaussianBeamDerived gaussian_beam_at(const BeamParams& beam, double distance);

// Analytic 1/e^2 spot radius after vacuum propagation over `distance`.
double gaussian_spot_size(const BeamParams& beam, double distance);

double cn2(const TurbulenceProfile& profile, double altitude);

// Rytov contribution 1.23 k^{7/6} \int Cn^2 (h - lo)^{11/6} dh over [lo, hi].
double rytov_increment(const TurbulenceProfile& profile, const BeamParams& beam,
                       double lo, double hi);

double integrated_cn2(const TurbulenceProfile& profile, double lo, double hi);

// r0 sentinel for turbulence-free segments.
inline constexpr double kNoTurbulence = std::numeric_limits<double>::infinity();

double fried_downlink(const TurbulenceProfile& profile, const BeamParams& beam,
                      double lo, double hi);

double fried_uplink(const TurbulenceProfile& profile, const BeamParams& beam,
                    const LinkGeometry& geometry, double lo, double hi);

// Dispatches on geometry.direction.
double fried_parameter(const TurbulenceProfile& profile, const BeamParams& beam,
                       const LinkGeometry& geometry, double lo, double hi);

struct PsdParams {
    double r0;          // [m]
    double kappa_m;     // inner-scale cutoff 5.92/l0 [1/m]
    double kappa_0;     // outer-scale cutoff 2 pi/L0 [1/m]
    double outer_scale; // L0 [m]
    double inner_scale; // l0 [m]

    // Modified von Karman phase PSD at angular spatial frequency kappa.
    double operator()(double kappa) const;
};

PsdParams psd_params(double r0, double screen_altitude);

struct ScreenSegment {
    double lower;           // [m]
    double upper;           // [m]
    double screen_altitude; // where the screen sits [m]
    double fried_r0;        // [m], kNoTurbulence for an identity screen
    double rytov;           // Rytov contribution of the segment
    PsdParams psd;

    double width() const { return upper - lower; }
};

struct ScreenPlan {
    std::vector<double> boundaries; // h_0 .. h_{n+1}
    std::vector<ScreenSegment> segments;
    LinkDirection direction = LinkDirection::Downlink;
    double sec_zenith = 1.0;

    std::size_t screen_count() const { return segments.size(); }
};

// Places screen boundaries so each interior segment adds exactly
// `rytov_budget` of scintillation; the segment that would cross the
// cutover altitude is extended to the satellite and closes the plan.
ScreenPlan plan_screens(const TurbulenceProfile& profile, const BeamParams& beam,
                        const LinkGeometry& geometry, double rytov_budget = 0.2);

} // namespace satent
