#pragma once

#include <cstddef>
#include <memory>

#include "satent/field.hpp"

namespace satent {

// In-place 2-D complex FFT of a fixed square size. Instances are shared
// through `for_size`; executing a plan is safe from many threads at once
// because every call supplies its own buffer.
class Fft2D {
public:
    static const Fft2D& for_size(std::size_t n);

    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    std::size_t size() const noexcept { return n_; }

    // Unnormalised forward transform, exponent sign -1.
    void forward(cplx* data) const;
    // Unnormalised inverse transform, exponent sign +1.
    void inverse(cplx* data) const;

private:
    explicit Fft2D(std::size_t n);

    std::size_t n_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

} // namespace satent
