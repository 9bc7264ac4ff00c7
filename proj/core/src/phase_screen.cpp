#include "satent/phase_screen.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "satent/error.hpp"
#include "satent/fft.hpp"

namespace satent {

namespace {

// FFT frequency of index i on an N-point lattice with step df.
double lattice_frequency(std::size_t i, std::size_t n, double df) {
    const auto si = static_cast<double>(i);
    const auto sn = static_cast<double>(n);
    return (i < n / 2 ? si : si - sn) * df;
}

// sqrt(PSD) * dkappa on the FFT lattice, zero at DC. Screens of one
// segment share it across runs, so it is cached by PSD and grid.
std::shared_ptr<const std::vector<double>> spectral_amplitude(const PsdParams& psd, const Grid& grid) {
    using CacheKey = std::tuple<double, double, double, std::size_t, double>;
    static std::mutex mutex;
    static std::map<CacheKey, std::shared_ptr<const std::vector<double>>> cache;
    constexpr std::size_t capacity = 64;

    const CacheKey key{psd.r0, psd.kappa_m, psd.kappa_0, grid.points, grid.spacing};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const std::size_t n = grid.points;
    const double df = 1.0 / grid.extent();
    const double dkappa = two_pi * df;
    auto amp = std::make_shared<std::vector<double>>(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const double fy = lattice_frequency(r, n, df);
        for (std::size_t c = 0; c < n; ++c) {
            const double fx = lattice_frequency(c, n, df);
            (*amp)[r * n + c] = std::sqrt(psd(two_pi * std::hypot(fx, fy))) * dkappa;
        }
    }
    (*amp)[0] = 0.0;
    std::lock_guard lock(mutex);
    if (cache.size() >= capacity) cache.clear();
    return cache.emplace(key, std::move(amp)).first->second;
}

} // namespace

double PhaseScreen::mean() const {
    if (phase.empty()) return 0.0;
    double s = 0.0;
    for (double v : phase) s += v;
    return s / static_cast<double>(phase.size());
}

PhaseScreen synthesize_screen(const PsdParams& psd, const Grid& grid, RngStream& rng,
                              int subharmonic_levels) {
    grid.validate();
    if (subharmonic_levels < 0) throw DomainError("subharmonic levels must be nonnegative");
    const std::size_t n = grid.points;
    PhaseScreen screen{grid, std::vector<double>(n * n, 0.0), psd.r0, subharmonic_levels};
    if (!std::isfinite(psd.r0)) return screen;
    if (!(psd.r0 > 0.0)) throw DomainError("Fried parameter must be positive");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double df = 1.0 / grid.extent();

    // Hermitian noise: the inverse transform is real and each +/-f pair
    // costs one complex draw.
    const auto amplitude = spectral_amplitude(psd, grid);
    const double half = std::sqrt(0.5);
    aligned_vector<cplx> spectrum(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t rm = (n - r) % n;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t i = r * n + c;
            const std::size_t mirror = rm * n + (n - c) % n;
            if (mirror < i) continue;
            const double amp = (*amplitude)[i];
            if (mirror == i) {
                spectrum[i] = rng.normal() * amp;
            } else {
                const double a = rng.normal();
                const double b = rng.normal();
                spectrum[i] = cplx{a * half, b * half} * amp;
                spectrum[mirror] = std::conj(spectrum[i]);
            }
        }
    }
    Fft2D::for_size(n).inverse(spectrum.data());
    for (std::size_t i = 0; i < n * n; ++i) screen.phase[i] = spectrum[i].real();

    if (subharmonic_levels > 0) {
        // Re sum_ij c_ij exp(i 2 pi (fx_i x + fy_j y)), evaluated row by row
        // as sum_i Re(U_i(y) E_i(x)).
        const std::size_t terms = 3 * static_cast<std::size_t>(subharmonic_levels);
        std::vector<double> fx(terms);
        std::vector<std::array<cplx, 3>> coeff(terms); // [level*3 + i][j]
        for (int level = 1; level <= subharmonic_levels; ++level) {
            const double dfp = df / std::pow(3.0, level);
            const double dkp = two_pi * dfp;
            for (int j = 0; j < 3; ++j) {     // fy index
                for (int i = 0; i < 3; ++i) { // fx index
                    const double a = rng.normal();
                    const double b = rng.normal();
                    const double kappa = two_pi * std::hypot((i - 1) * dfp, (j - 1) * dfp);
                    const std::size_t t = static_cast<std::size_t>(level - 1) * 3 + static_cast<std::size_t>(i);
                    coeff[t][j] = (i == 1 && j == 1) ? cplx{} : cplx{a, b} * std::sqrt(psd(kappa)) * dkp;
                    fx[t] = (i - 1) * dfp;
                }
            }
        }
        std::vector<double> ex_re(terms * n), ex_im(terms * n);
        for (std::size_t t = 0; t < terms; ++t)
            for (std::size_t p = 0; p < n; ++p) {
                const cplx e = std::polar(1.0, two_pi * fx[t] * grid.coordinate(p));
                ex_re[t * n + p] = e.real();
                ex_im[t * n + p] = e.imag();
            }
        std::vector<double> low(n * n, 0.0);
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double y = grid.coordinate(r);
            double* out = low.data() + r * n;
            for (std::size_t t = 0; t < terms; ++t) {
                const double dfp = df / std::pow(3.0, static_cast<double>(t / 3 + 1));
                cplx u{};
                for (int j = 0; j < 3; ++j) u += coeff[t][j] * std::polar(1.0, two_pi * (j - 1) * dfp * y);
                const double ur = u.real(), ui = u.imag();
                const double* er = ex_re.data() + t * n;
                const double* ei = ex_im.data() + t * n;
                for (std::size_t c = 0; c < n; ++c) out[c] += ur * er[c] - ui * ei[c];
            }
            for (std::size_t c = 0; c < n; ++c) sum += out[c];
        }
        const double mean = sum / static_cast<double>(n * n);
        for (std::size_t i = 0; i < n * n; ++i) screen.phase[i] += low[i] - mean;
    }
    return screen;
}

void apply_screen(ComplexField& field, const PhaseScreen& screen) {
    if (field.side() != screen.grid.points) throw DomainError("screen and field grids differ");
    if (!std::isfinite(screen.r0)) return;
    auto samples = field.samples();
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] *= std::polar(1.0, screen.phase[i]);
}

} // namespace satent
