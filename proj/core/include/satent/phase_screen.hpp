#pragma once

#include <cstddef>
#include <vector>

#include "satent/field.hpp"
#include "satent/rng.hpp"
#include "satent/turbulence.hpp"

namespace satent {

struct PhaseScreen {
    Grid grid;
    std::vector<double> phase; // row-major N x N [rad]
    double r0 = kNoTurbulence;
    int subharmonic_levels = 0;

    double operator()(std::size_t row, std::size_t col) const { return phase[row * grid.points + col]; }
    double mean() const;
};

// Random screen with modified von Karman statistics: FFT synthesis over
// the grid's frequency lattice plus `subharmonic_levels` 3x3 subharmonic
// lattices for the low-order modes the FFT grid cannot represent.
// An infinite r0 yields an all-zero screen without consuming randomness.
PhaseScreen synthesize_screen(const PsdParams& psd, const Grid& grid, RngStream& rng,
                              int subharmonic_levels = 3);

// Multiplies the field by exp(i phi).
void apply_screen(ComplexField& field, const PhaseScreen& screen);

} // namespace satent
