#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "scatlen/core.hpp"

namespace scatlen::detail {

// Two-component state (value, derivative) of the radial problems.
struct State2 {
    double y = 0.0;
    double yp = 0.0;
};

// Dormand-Prince 5(4) adaptive step integrator for a two-state system, used
// between potential breakpoints where the right-hand side is smooth. Steps
// land exactly on `r_end`.
template <class Rhs>
State2 integrate_dp45(Rhs&& rhs, double r0, double r_end, State2 s, double rel_tol,
                      double abs_tol) {
    if (r_end <= r0) return s;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double r = r0;
    double h = (r_end - r0) / 16.0;
    const double h_min = (r_end - r0) * 1e-14;
    auto f = [&rhs](double x, const State2& u) { return rhs(x, u); };

    State2 k1 = f(r, s);
    int guard = 0;
    while (r < r_end) {
        if (++guard > 2000000) throw std::runtime_error("ode: step count exceeded");
        h = std::min(h, r_end - r);

        auto stage = [&](double frac, double w1, double w2, double w3, double w4, double w5,
                         const State2& q1, const State2& q2, const State2& q3, const State2& q4,
                         const State2& q5) {
            State2 u;
            u.y = s.y + h * (w1 * q1.y + w2 * q2.y + w3 * q3.y + w4 * q4.y + w5 * q5.y);
            u.yp = s.yp + h * (w1 * q1.yp + w2 * q2.yp + w3 * q3.yp + w4 * q4.yp + w5 * q5.yp);
            return f(r + frac * h, u);
        };

        State2 z;
        State2 k2 = stage(c2, a21, 0, 0, 0, 0, k1, z, z, z, z);
        State2 k3 = stage(c3, a31, a32, 0, 0, 0, k1, k2, z, z, z);
        State2 k4 = stage(c4, a41, a42, a43, 0, 0, k1, k2, k3, z, z);
        State2 k5 = stage(c5, a51, a52, a53, a54, 0, k1, k2, k3, k4, z);
        State2 k6 = stage(1.0, a61, a62, a63, a64, a65, k1, k2, k3, k4, k5);

        State2 next;
        next.y = s.y + h * (b1 * k1.y + b3 * k3.y + b4 * k4.y + b5 * k5.y + b6 * k6.y);
        next.yp = s.yp + h * (b1 * k1.yp + b3 * k3.yp + b4 * k4.yp + b5 * k5.yp + b6 * k6.yp);
        State2 k7 = f(r + h, next);

        const double err_y = h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y +
                                  e7 * k7.y);
        const double err_yp = h * (e1 * k1.yp + e3 * k3.yp + e4 * k4.yp + e5 * k5.yp +
                                   e6 * k6.yp + e7 * k7.yp);
        const double sc_y = abs_tol + rel_tol * std::max(std::abs(s.y), std::abs(next.y));
        const double sc_yp = abs_tol + rel_tol * std::max(std::abs(s.yp), std::abs(next.yp));
        const double err = std::sqrt(0.5 * ((err_y / sc_y) * (err_y / sc_y) +
                                            (err_yp / sc_yp) * (err_yp / sc_yp)));

        if (err <= 1.0 || h <= h_min) {
            r += h;
            s = next;
            k1 = k7; // FSAL
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, factor));
        if (h < h_min) h = h_min;
    }
    return s;
}

} // namespace scatlen::detail
