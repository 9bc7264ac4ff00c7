#include "satent/field.hpp"

#include <cmath>

#include "satent/error.hpp"

namespace satent {

void Grid::validate() const {
    if (points < 2 || (points & (points - 1)) != 0)
        throw DomainError("grid side must be a power of two");
    if (!(spacing > 0.0)) throw DomainError("grid spacing must be positive");
}

ComplexField::ComplexField(Grid grid) : grid_(grid) {
    grid_.validate();
    data_.assign(grid_.points * grid_.points, cplx{0.0, 0.0});
}

double ComplexField::total_power() const {
    double sum = 0.0;
    for (const auto& v : data_) sum += std::norm(v);
    return sum * grid_.spacing * grid_.spacing;
}

bool ComplexField::all_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double ComplexField::second_moment_radius() const {
    const std::size_t n = grid_.points;
    double p = 0.0, x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double y = grid_.coordinate(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = grid_.coordinate(c);
            const double I = std::norm((*this)(r, c));
            p += I;
            x1 += I * x;
            y1 += I * y;
            x2 += I * x * x;
            y2 += I * y * y;
        }
    }
    if (!(p > 0.0)) return 0.0;
    const double vx = x2 / p - (x1 / p) * (x1 / p);
    const double vy = y2 / p - (y1 / p) * (y1 / p);
    return std::sqrt(2.0 * (vx + vy));
}

ComplexField gaussian_beam(const Grid& grid, double waist) {
    if (!(waist > 0.0)) throw DomainError("beam waist must be positive");
    ComplexField f(grid);
    const std::size_t n = grid.points;
    for (std::size_t r = 0; r < n; ++r) {
        const double y = grid.coordinate(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = grid.coordinate(c);
            f(r, c) = std::exp(-(x * x + y * y) / (waist * waist));
        }
    }
    return f;
}

ComplexField plane_wave(const Grid& grid, cplx amplitude) {
    ComplexField f(grid);
    for (auto& v : f.samples()) v = amplitude;
    return f;
}

} // namespace satent
