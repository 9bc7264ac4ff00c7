#include "satent/fft.hpp"

#include <map>
#include <mutex>

#include <fftw3.h>

#include "satent/error.hpp"

namespace satent {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

const Fft2D& Fft2D::for_size(std::size_t n) {
    static std::mutex cache_mutex;
    static std::map<std::size_t, std::unique_ptr<Fft2D>> cache;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot.reset(new Fft2D(n));
    return *slot;
}

Fft2D::Fft2D(std::size_t n) : n_(n) {
    if (n < 2) throw DomainError("FFT size must be at least 2");
    std::lock_guard lock(planner_mutex());
    aligned_vector<cplx> scratch(n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int ni = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_FORWARD, FFTW_MEASURE);
    inverse_plan_ = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_BACKWARD, FFTW_MEASURE);
    if (!forward_plan_ || !inverse_plan_) throw NumericalError("FFTW failed to create a plan");
}

Fft2D::~Fft2D() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fft2D::forward(cplx* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft2D::inverse(cplx* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), buf, buf);
}

} // namespace satent
