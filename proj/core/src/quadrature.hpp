#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "satent/error.hpp"

namespace satent::detail {

// Adaptive Gauss-Kronrod over [a, b], split at the altitude scales where
// the Cn^2 terms change character so each piece is smooth.
template <class F>
double integrate_altitude(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    static constexpr std::array<double, 12> kBreaks = {
        50.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0, 10000.0,
        15000.0, 20000.0, 30000.0, 60000.0, 150000.0};
    double total = 0.0;
    double lo = a;
    auto piece = [&](double x0, double x1) {
        double err = 0.0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, x0, x1, 15, 1e-12, &err);
        if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value");
        total += v;
    };
    for (double brk : kBreaks) {
        if (brk <= lo) continue;
        if (brk >= b) break;
        piece(lo, brk);
        lo = brk;
    }
    piece(lo, b);
    return total;
}

} // namespace satent::detail
