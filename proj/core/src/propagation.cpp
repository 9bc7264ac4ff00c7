#include "satent/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "satent/error.hpp"
#include "satent/fft.hpp"

namespace satent {

namespace {

constexpr double kPi = std::numbers::pi;

double lattice_frequency(std::size_t i, std::size_t n, double df) {
    const auto si = static_cast<double>(i);
    const auto sn = static_cast<double>(n);
    return (i < n / 2 ? si : si - sn) * df;
}

// exp(i alpha x_j^2) on the centred coordinates of `grid`.
std::vector<cplx> quadratic_phase(const Grid& grid, double alpha) {
    std::vector<cplx> out(grid.points);
    for (std::size_t j = 0; j < grid.points; ++j) {
        const double x = grid.coordinate(j);
        out[j] = std::polar(1.0, alpha * x * x);
    }
    return out;
}

void apply_separable(ComplexField& f, const std::vector<cplx>& v, double scale = 1.0) {
    const std::size_t n = f.side();
    for (std::size_t r = 0; r < n; ++r) {
        const cplx vr = v[r] * scale;
        cplx* row = f.data() + r * n;
        for (std::size_t c = 0; c < n; ++c) row[c] *= vr * v[c];
    }
}

// exp(-(r / 0.47 L)^16); depends only on the point count.
std::shared_ptr<const std::vector<double>> absorbing_window(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (slot) return slot;
    const Grid unit{n, 1.0 / static_cast<double>(n)};
    const double inv_r2 = 1.0 / (0.47 * 0.47);
    auto w = std::make_shared<std::vector<double>>(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const double y = unit.coordinate(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = unit.coordinate(c);
            const double t = (x * x + y * y) * inv_r2;
            const double t2 = t * t, t4 = t2 * t2;
            (*w)[r * n + c] = std::exp(-t4 * t4);
        }
    }
    slot = std::move(w);
    return slot;
}

void apply_absorbing_window(ComplexField& f) {
    const auto window = absorbing_window(f.side());
    auto samples = f.samples();
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] *= (*window)[i];
}

std::string describe_distance(double metres) {
    std::ostringstream os;
    os.precision(6);
    os << metres << " m";
    return os.str();
}

} // namespace

ComplexField vacuum_step(const ComplexField& field, double dz, double wavenumber,
                         double magnification, const VacuumStepOptions& options) {
    if (!(dz >= 0.0)) throw DomainError("propagation distance must be nonnegative");
    if (!(wavenumber > 0.0)) throw DomainError("wavenumber must be positive");
    if (!(magnification > 0.0)) throw DomainError("magnification must be positive");
    if (dz == 0.0) {
        if (magnification != 1.0) throw DomainError("a zero-length step cannot rescale the grid");
        ComplexField out = field;
        if (options.absorbing_boundary) apply_absorbing_window(out);
        return out;
    }

    const Grid in_grid = field.grid();
    const std::size_t n = in_grid.points;
    const double d1 = in_grid.spacing;
    const double m = magnification;
    const Grid out_grid{n, m * d1};
    const double lambda = 2.0 * kPi / wavenumber;

    const bool scaled = m != 1.0;
    if (scaled) {
        const double corner1 = std::sqrt(2.0) * in_grid.half_width();
        const double corner2 = std::sqrt(2.0) * out_grid.half_width();
        const double q1 = wavenumber * std::abs(1.0 - m) / dz * corner1 * d1;
        const double q3 = wavenumber * std::abs(m - 1.0) / (m * dz) * corner2 * out_grid.spacing;
        if (q1 > kPi || q3 > kPi)
            throw SamplingError("quadratic phase undersampled at " + options.plane_label
                                + " (magnification " + std::to_string(m) + ")");
    }

    ComplexField work = field;
    if (scaled) {
        apply_separable(work, quadratic_phase(in_grid, 0.5 * wavenumber * (1.0 - m) / dz), 1.0 / m);
    }

    const auto& fft = Fft2D::for_size(n);
    fft.forward(work.data());

    const double df = 1.0 / in_grid.extent();
    const double band = 1.0 / (lambda * std::sqrt(std::pow(2.0 * dz * df / m, 2) + 1.0));
    std::vector<cplx> kernel(n);
    std::vector<char> inside(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double f = lattice_frequency(j, n, df);
        kernel[j] = std::polar(1.0, -kPi * lambda * dz * f * f / m);
        inside[j] = std::abs(f) <= band;
    }

    double total = 0.0, clipped = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        cplx* row = work.data() + r * n;
        for (std::size_t c = 0; c < n; ++c) {
            const double p = std::norm(row[c]);
            total += p;
            if (inside[r] && inside[c]) {
                row[c] *= kernel[r] * kernel[c];
            } else {
                clipped += p;
                row[c] = 0.0;
            }
        }
    }
    if (total > 0.0 && clipped / total > options.max_band_clip) {
        std::ostringstream os;
        os << "angular spectrum exceeds the sampled band at " << options.plane_label
           << " (clipped fraction " << clipped / total << ")";
        throw SamplingError(os.str());
    }

    fft.inverse(work.data());
    const double norm = 1.0 / static_cast<double>(n * n);

    ComplexField out(out_grid);
    std::copy(work.samples().begin(), work.samples().end(), out.samples().begin());
    if (scaled) {
        apply_separable(out, quadratic_phase(out_grid, 0.5 * wavenumber * (m - 1.0) / (m * dz)), norm);
    } else {
        for (auto& v : out.samples()) v *= norm;
    }
    if (options.absorbing_boundary) apply_absorbing_window(out);
    return out;
}

void PropagationConfig::validate() const {
    if (grid_points < 256 || (grid_points & (grid_points - 1)) != 0)
        throw DomainError("grid side must be a power of two and at least 256");
    if (!(samples_per_waist > 0.0)) throw DomainError("samples per waist must be positive");
    if (!(receiver_extent_factor >= 4.0))
        throw DomainError("receiver grid must span at least 4 analytic spot sizes");
    if (subharmonic_levels < 0) throw DomainError("subharmonic levels must be nonnegative");
}

PropagationLayout make_layout(const TurbulenceProfile& profile, const BeamParams& beam,
                              const LinkGeometry& geometry, const ScreenPlan& plan,
                              const PropagationConfig& config) {
    profile.validate();
    beam.validate();
    geometry.validate();
    config.validate();

    PropagationLayout layout;
    const double sec = profile.sec_zenith();
    layout.path_length = (geometry.path_length - profile.ground_altitude) * sec;
    layout.wavenumber = beam.wavenumber();
    layout.source_grid = Grid{config.grid_points, beam.waist / config.samples_per_waist};
    const double far_spot = gaussian_spot_size(beam, layout.path_length);
    layout.receiver_grid = Grid{config.grid_points,
                                config.receiver_extent_factor * far_spot / static_cast<double>(config.grid_points)};
    const double m_total = layout.receiver_grid.spacing / layout.source_grid.spacing;

    const bool up = geometry.direction == LinkDirection::Uplink;
    auto path_position = [&](double altitude) {
        return up ? (altitude - profile.ground_altitude) * sec : (geometry.path_length - altitude) * sec;
    };

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < plan.segments.size(); ++i)
        if (std::isfinite(plan.segments[i].fried_r0)) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return path_position(plan.segments[a].screen_altitude) < path_position(plan.segments[b].screen_altitude);
    });

    const Grid& screen_grid = up ? layout.source_grid : layout.receiver_grid;
    double cursor = 0.0;
    bool magnified = false;
    for (std::size_t idx : order) {
        const auto& seg = plan.segments[idx];
        const double s = path_position(seg.screen_altitude);
        const double leg = std::max(0.0, s - cursor);
        if (leg > 0.0 || (!up && !magnified)) {
            PropagationStage st;
            st.kind = PropagationStage::Kind::Vacuum;
            st.distance = leg;
            st.magnification = (!up && !magnified) ? m_total : 1.0;
            st.grid = screen_grid;
            st.label = "plane at path distance " + describe_distance(s);
            layout.stages.push_back(st);
            if (!up) magnified = true;
        }
        PropagationStage sc;
        sc.kind = PropagationStage::Kind::Screen;
        sc.segment = idx;
        sc.grid = screen_grid;
        sc.label = "screen " + std::to_string(idx) + " at altitude " + describe_distance(seg.screen_altitude);
        layout.stages.push_back(sc);
        cursor = s;
    }
    const double tail = layout.path_length - cursor;
    const bool need_magnification = up || !magnified;
    if (tail > 0.0 || need_magnification) {
        PropagationStage st;
        st.kind = PropagationStage::Kind::Vacuum;
        st.distance = std::max(0.0, tail);
        st.magnification = need_magnification ? m_total : 1.0;
        st.grid = layout.receiver_grid;
        st.label = "receiver plane";
        layout.stages.push_back(st);
    }
    layout.deterministic_prefix = 0;
    while (layout.deterministic_prefix < layout.stages.size()
           && layout.stages[layout.deterministic_prefix].kind == PropagationStage::Kind::Vacuum)
        ++layout.deterministic_prefix;
    return layout;
}

namespace {

ComplexField run_stages(const ComplexField& source, const ScreenPlan* plan,
                        const PropagationLayout& layout, const PropagationConfig& config,
                        std::uint64_t master_seed, std::uint64_t run_index, std::size_t first_stage) {
    ComplexField field = source;
    bool turbulent = false;
    for (std::size_t i = first_stage; i < layout.stages.size(); ++i) {
        const auto& st = layout.stages[i];
        if (st.kind == PropagationStage::Kind::Screen) {
            if (!plan) continue;
            const auto& seg = plan->segments.at(st.segment);
            RngStream rng(StreamKey{master_seed, run_index, st.segment});
            const auto screen = synthesize_screen(seg.psd, field.grid(), rng, config.subharmonic_levels);
            apply_screen(field, screen);
            turbulent = true;
        } else {
            VacuumStepOptions opts;
            opts.absorbing_boundary = config.absorbing_boundary;
            opts.max_band_clip = turbulent ? 1.0 : 1e-6;
            opts.plane_label = st.label;
            field = vacuum_step(field, st.distance, layout.wavenumber, st.magnification, opts);
        }
        if (!field.all_finite()) {
            throw NumericalError("non-finite field after " + st.label + " (seed "
                                 + std::to_string(master_seed) + ", run " + std::to_string(run_index) + ")");
        }
    }
    return field;
}

} // namespace

ComplexField propagate(const ComplexField& source, const ScreenPlan& plan,
                       const PropagationLayout& layout, const PropagationConfig& config,
                       std::uint64_t master_seed, std::uint64_t run_index, std::size_t first_stage) {
    return run_stages(source, &plan, layout, config, master_seed, run_index, first_stage);
}

ComplexField propagate_vacuum(const ComplexField& source, const PropagationLayout& layout,
                              const PropagationConfig& config) {
    return run_stages(source, nullptr, layout, config, 0, 0, 0);
}

double raw_transmissivity(const ComplexField& source, const ComplexField& received,
                          double aperture_radius) {
    if (!(aperture_radius >= 0.0)) throw DomainError("aperture radius must be nonnegative");
    const Grid& g = received.grid();
    if (aperture_radius > g.half_width())
        throw DomainError("aperture radius exceeds the receiver grid half-width");
    const double input = source.total_power();
    if (!(input > 0.0)) throw DomainError("source field carries no power");
    const double r2max = aperture_radius * aperture_radius;
    double p = 0.0;
    for (std::size_t r = 0; r < g.points; ++r) {
        const double y = g.coordinate(r);
        if (y * y >= r2max) continue;
        for (std::size_t c = 0; c < g.points; ++c) {
            const double x = g.coordinate(c);
            if (x * x + y * y < r2max) p += std::norm(received(r, c));
        }
    }
    return p * g.spacing * g.spacing / input;
}

double transmissivity(const ComplexField& source, const ComplexField& received,
                      double aperture_radius) {
    return std::clamp(raw_transmissivity(source, received, aperture_radius), 0.0, 1.0);
}

} // namespace satent
