#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "scatlen/core.hpp"

namespace scatlen {
namespace detail {

// K0 and K1 for x <= 2 from the ascending series with logarithmic part,
//   K0(x) = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2
//   K1(x) = 1/x + ln(x/2) I1(x)
//           - (x/4) sum_{k>=0} (H_k + H_{k+1} - 2 gamma) (x^2/4)^k / (k!(k+1)!).
// Terms at x = 2 decay like 1/(k!)^2, so ~20 terms reach machine precision.
inline std::pair<double, double> k01_series(double x) {
    const double t = 0.25 * x * x;
    const double lg = std::log(0.5 * x);

    double term = 1.0, i0 = 1.0, s0 = 0.0, hk = 0.0;
    for (int k = 1; k < 64; ++k) {
        term *= t / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        i0 += term;
        s0 += term * hk;
        if (term < 1e-19 * i0) break;
    }
    const double k0 = -(lg + euler_gamma) * i0 + s0;

    term = 1.0;
    double i1s = 1.0, s1 = 1.0 - 2.0 * euler_gamma, hk1 = 1.0;
    hk = 0.0;
    for (int k = 1; k < 64; ++k) {
        term *= t / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        i1s += term;
        s1 += term * (hk + hk1 - 2.0 * euler_gamma);
        if (term < 1e-19 * i1s) break;
    }
    const double i1 = 0.5 * x * i1s;
    const double k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    return {k0, k1};
}

// K0 and K1 for x > 2 by Steed's evaluation of the continued fraction CF2
// (Thompson & Barnett), specialized to order zero.
inline std::pair<double, double> k01_cf2(double x) {
    const double eps = 1e-16;
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 5000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= eps) break;
    }
    h = a1 * h;
    const double k0 = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

} // namespace detail

// Modified Bessel function of the second kind, K0(x), x > 0.
inline double bessel_k0(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k0: x must be > 0");
    return x <= 2.0 ? detail::k01_series(x).first : detail::k01_cf2(x).first;
}

// Modified Bessel function of the second kind, K1(x), x > 0. K0'(x) = -K1(x).
inline double bessel_k1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k1: x must be > 0");
    return x <= 2.0 ? detail::k01_series(x).second : detail::k01_cf2(x).second;
}

inline double bessel_k(int order, double x) {
    if (order == 0) return bessel_k0(x);
    if (order == 1) return bessel_k1(x);
    throw std::invalid_argument("bessel_k: order must be 0 or 1");
}

} // namespace scatlen
