#pragma once

#include <cmath>
#include <stdexcept>

#include "scatlen/bessel.hpp"
#include "scatlen/core.hpp"

namespace scatlen {

// Hard-core potential of radius a (which equals its scattering length).
struct HardCoreParams {
    double a = 1.0;
    Beta beta{1.0};
    Dim d = Dim::three;
};

inline void require_valid(const HardCoreParams& p) {
    if (!(p.a > 0.0) || !std::isfinite(p.a))
        throw std::invalid_argument("hard core radius must be positive and finite");
    require_valid(p.beta);
}

// Exact minimum of the positive-temperature functional for a hard core:
//   d=3:  8 pi a (1 + a/sqrt(beta) + a^2/(3 beta))
//   d=2:  (4 pi a / sqrt(beta)) K1(t)/K0(t) + 2 pi a^2 / beta,  t = a/sqrt(beta).
inline double ebeta_hardcore(const HardCoreParams& p) {
    require_valid(p);
    const double sb = std::sqrt(p.beta.value);
    if (p.d == Dim::three) {
        const double t = p.a / sb;
        return 8.0 * pi * p.a * (1.0 + t + t * t / 3.0);
    }
    const double t = p.a / sb;
    return (4.0 * pi * p.a / sb) * (bessel_k1(t) / bessel_k0(t)) +
           2.0 * pi * p.a * p.a / p.beta.value;
}

// Value of the exact minimizer profile at radius r:
//   d=3:  min{ (a/r) exp(-(r-a)/sqrt(beta)), 1 }
//   d=2:  min{ K0(r/sqrt(beta)) / K0(a/sqrt(beta)), 1 }.
inline double hardcore_profile(const HardCoreParams& p, double r) {
    require_valid(p);
    if (!(r >= 0.0)) throw std::invalid_argument("hardcore_profile: r must be >= 0");
    if (r <= p.a) return 1.0;
    const double sb = std::sqrt(p.beta.value);
    if (p.d == Dim::three)
        return std::min((p.a / r) * std::exp(-(r - p.a) / sb), 1.0);
    return std::min(bessel_k0(r / sb) / bessel_k0(p.a / sb), 1.0);
}

} // namespace scatlen
