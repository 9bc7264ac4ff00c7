#pragma once

// Sampled optical fields on square grids.

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

namespace satent {

using cplx = std::complex<double>;

// 64-byte aligned storage so FFTW can use its SIMD codelets.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        const std::size_t bytes = ((n * sizeof(T) + 63) / 64) * 64;
        void* p = std::aligned_alloc(64, bytes == 0 ? 64 : bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

struct Grid {
    std::size_t points = 1024; // N per side
    double spacing = 0.0;      // [m]

    void validate() const;
    double extent() const { return static_cast<double>(points) * spacing; }
    double half_width() const { return 0.5 * extent(); }
    // Centred coordinate of sample index i: (i - N/2) * spacing.
    double coordinate(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(points / 2)) * spacing;
    }
};

class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t side() const noexcept { return grid_.points; }
    double spacing() const noexcept { return grid_.spacing; }

    cplx& operator()(std::size_t row, std::size_t col) { return data_[row * grid_.points + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const {
        return data_[row * grid_.points + col];
    }

    std::span<cplx> samples() noexcept { return data_; }
    std::span<const cplx> samples() const noexcept { return data_; }
    cplx* data() noexcept { return data_.data(); }
    const cplx* data() const noexcept { return data_.data(); }

    // Integrated intensity, sum |U|^2 dx^2.
    double total_power() const;
    bool all_finite() const;

    // Second-moment 1/e^2 radius estimate, 2 sqrt(<x^2>) averaged over both axes.
    double second_moment_radius() const;

private:
    Grid grid_{};
    aligned_vector<cplx> data_;
};

// Unit-peak collimated Gaussian exp(-r^2 / w0^2).
ComplexField gaussian_beam(const Grid& grid, double waist);

// Uniform field of the given amplitude.
ComplexField plane_wave(const Grid& grid, cplx amplitude = 1.0);

} // namespace satent
